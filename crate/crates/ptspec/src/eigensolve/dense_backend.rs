//! Dense eigenvalue backend.
//!
//! The banded Hamiltonian is expanded to a dense matrix and handed to a
//! Hessenberg-QR eigensolver. Everything runs sequentially
//! ([`faer::Par::Seq`]) so results are bitwise reproducible regardless of
//! the machine's core count or any thread-count environment setting.

use faer::dyn_stack::{MemBuffer, MemStack};
use faer::linalg::evd::{self, ComputeEigenvectors, EvdParams};
use faer::{Mat, Par, Spec};
use num_complex::Complex64;

use crate::discretize::ComplexBandedMatrix;

use super::SolveError;

fn to_dense_complex(m: &ComplexBandedMatrix) -> Mat<Complex64> {
    let n = m.n();
    let b = m.half_bandwidth();
    Mat::from_fn(n, n, |i, j| {
        if i.abs_diff(j) <= b {
            m.get(i, j)
        } else {
            Complex64::new(0.0, 0.0)
        }
    })
}

fn to_dense_real(m: &ComplexBandedMatrix) -> Mat<f64> {
    let n = m.n();
    let b = m.half_bandwidth();
    Mat::from_fn(n, n, |i, j| {
        if i.abs_diff(j) <= b {
            m.get(i, j).re
        } else {
            0.0
        }
    })
}

/// Eigenvalues of a general complex matrix (unsorted).
pub fn complex_eigenvalues(m: &ComplexBandedMatrix) -> Result<Vec<Complex64>, SolveError> {
    let n = m.n();
    let a = to_dense_complex(m);
    let par = Par::Seq;
    let params: Spec<EvdParams, Complex64> = Default::default();
    let mut s = faer::diag::Diag::<Complex64>::zeros(n);
    let mut buf = MemBuffer::new(evd::evd_scratch::<Complex64>(
        n,
        ComputeEigenvectors::No,
        ComputeEigenvectors::No,
        par,
        params,
    ));
    evd::evd_cplx(
        a.as_ref(),
        s.as_mut(),
        None,
        None,
        par,
        MemStack::new(&mut buf),
        params,
    )
    .map_err(|_| SolveError::NoConvergence { index: None })?;
    Ok(s.column_vector().iter().copied().collect())
}

/// Eigenvalues of a general real matrix (unsorted, may come in conjugate
/// pairs).
pub fn real_eigenvalues(m: &ComplexBandedMatrix) -> Result<Vec<Complex64>, SolveError> {
    let n = m.n();
    let a = to_dense_real(m);
    let par = Par::Seq;
    let params: Spec<EvdParams, f64> = Default::default();
    let mut s_re = faer::diag::Diag::<f64>::zeros(n);
    let mut s_im = faer::diag::Diag::<f64>::zeros(n);
    let mut buf = MemBuffer::new(evd::evd_scratch::<f64>(
        n,
        ComputeEigenvectors::No,
        ComputeEigenvectors::No,
        par,
        params,
    ));
    evd::evd_real(
        a.as_ref(),
        s_re.as_mut(),
        s_im.as_mut(),
        None,
        None,
        par,
        MemStack::new(&mut buf),
        params,
    )
    .map_err(|_| SolveError::NoConvergence { index: None })?;
    let re = s_re.column_vector();
    let im = s_im.column_vector();
    Ok((0..n).map(|i| Complex64::new(re[i], im[i])).collect())
}

/// Eigenvalues of an exactly PT-symmetric matrix (`J·conj(M)·J = M`) via
/// its real form.
///
/// Such a matrix commutes with the antiunitary involution `A = J ∘ conj`,
/// so it is the complexification of a real operator on the fixed subspace
/// `{x : Ax = x}`, spanned by `f_j = (e_j + e_{n-1-j})/√2` and
/// `g_j = i(e_j - e_{n-1-j})/√2` (plus `e_c` at the center for odd n). The
/// matrix in that basis is real by construction — every entry below is a
/// plain `Re`/`Im` pick with no cancellation — and real QR then returns
/// complex eigenvalues in exact conjugate pairs. That makes the spectrum's
/// conjugation symmetry hold to the bit, where complex QR on the original
/// matrix would scatter ill-conditioned high modes off the mirror by their
/// pseudospectral forward error.
pub fn pt_folded_eigenvalues(m: &ComplexBandedMatrix) -> Result<Vec<Complex64>, SolveError> {
    let n = m.n();
    let r = n / 2; // mirror pairs; odd n leaves a fixed center node
    let odd = n % 2 == 1;
    let c = r; // center index, only reachable for odd n
    let sqrt2 = std::f64::consts::SQRT_2;

    // Basis ordering: f_0..f_{r-1}, (center), g_0..g_{r-1}.
    let a = Mat::from_fn(n, n, |p, q| {
        let mirror = |k: usize| n - 1 - k;
        match (basis_kind(p, r, odd), basis_kind(q, r, odd)) {
            (Basis::F(j), Basis::F(k)) => m.get(j, k).re + m.get(j, mirror(k)).re,
            (Basis::F(j), Basis::G(k)) => -m.get(j, k).im + m.get(j, mirror(k)).im,
            (Basis::G(j), Basis::F(k)) => m.get(j, k).im + m.get(j, mirror(k)).im,
            (Basis::G(j), Basis::G(k)) => m.get(j, k).re - m.get(j, mirror(k)).re,
            (Basis::F(j), Basis::C) => sqrt2 * m.get(j, c).re,
            (Basis::G(j), Basis::C) => sqrt2 * m.get(j, c).im,
            (Basis::C, Basis::F(k)) => sqrt2 * m.get(c, k).re,
            (Basis::C, Basis::G(k)) => -sqrt2 * m.get(c, k).im,
            (Basis::C, Basis::C) => m.get(c, c).re,
        }
    });

    let par = Par::Seq;
    let params: Spec<EvdParams, f64> = Default::default();
    let mut s_re = faer::diag::Diag::<f64>::zeros(n);
    let mut s_im = faer::diag::Diag::<f64>::zeros(n);
    let mut buf = MemBuffer::new(evd::evd_scratch::<f64>(
        n,
        ComputeEigenvectors::No,
        ComputeEigenvectors::No,
        par,
        params,
    ));
    evd::evd_real(
        a.as_ref(),
        s_re.as_mut(),
        s_im.as_mut(),
        None,
        None,
        par,
        MemStack::new(&mut buf),
        params,
    )
    .map_err(|_| SolveError::NoConvergence { index: None })?;
    let re = s_re.column_vector();
    let im = s_im.column_vector();
    Ok((0..n).map(|i| Complex64::new(re[i], im[i])).collect())
}

enum Basis {
    F(usize),
    G(usize),
    C,
}

fn basis_kind(p: usize, r: usize, odd: bool) -> Basis {
    if p < r {
        Basis::F(p)
    } else if odd && p == r {
        Basis::C
    } else if odd {
        Basis::G(p - r - 1)
    } else {
        Basis::G(p - r)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn off_diagonal_real_two_by_two() {
        // [[0, 1], [1, 0]] -> {-1, +1}
        let mut m = ComplexBandedMatrix::zero(2, 1);
        m.set(0, 1, Complex64::new(1.0, 0.0));
        let mut vals = real_eigenvalues(&m).unwrap();
        vals.sort_by(|a, b| a.re.total_cmp(&b.re));
        assert!((vals[0] - Complex64::new(-1.0, 0.0)).norm() < 1e-14);
        assert!((vals[1] - Complex64::new(1.0, 0.0)).norm() < 1e-14);
    }

    #[test]
    fn complex_diagonal_passthrough() {
        // diag(1 + 2i, 3) -> {1 + 2i, 3}
        let mut m = ComplexBandedMatrix::zero(2, 1);
        m.set(0, 0, Complex64::new(1.0, 2.0));
        m.set(1, 1, Complex64::new(3.0, 0.0));
        let mut vals = complex_eigenvalues(&m).unwrap();
        vals.sort_by(|a, b| a.re.total_cmp(&b.re));
        assert!((vals[0] - Complex64::new(1.0, 2.0)).norm() < 1e-14);
        assert!((vals[1] - Complex64::new(3.0, 0.0)).norm() < 1e-14);
    }

    fn pt_test_matrix(n: usize) -> ComplexBandedMatrix {
        // Tridiagonal with real kinetic coupling and a potential whose real
        // part is even and imaginary part odd across the index mirror.
        let mut m = ComplexBandedMatrix::zero(n, 1);
        let mid = (n as f64 - 1.0) / 2.0;
        for i in 0..n {
            let s = i as f64 - mid;
            m.set(i, i, Complex64::new(2.0 + 0.1 * s * s, 0.3 * s));
            if i + 1 < n {
                m.set(i, i + 1, Complex64::new(-1.0, 0.0));
            }
        }
        assert!(m.is_pt_symmetric());
        m
    }

    #[test]
    fn folded_route_matches_complex_route_on_well_conditioned_modes() {
        // Positional comparison is too brittle (the two routes may order a
        // conjugate pair differently), so match by nearest distance.
        for n in [9usize, 10] {
            let m = pt_test_matrix(n);
            let a = pt_folded_eigenvalues(&m).unwrap();
            let b = complex_eigenvalues(&m).unwrap();
            for x in &a {
                let d = b
                    .iter()
                    .map(|y| (x - y).norm())
                    .fold(f64::INFINITY, f64::min);
                assert!(d < 1e-10, "n={n}: {x} unmatched, nearest {d:.3e}");
            }
        }
    }

    #[test]
    fn folded_route_spectrum_exactly_self_conjugate() {
        let m = pt_test_matrix(31);
        let vals = pt_folded_eigenvalues(&m).unwrap();
        for v in &vals {
            let nearest = vals
                .iter()
                .map(|w| (w - v.conj()).norm())
                .fold(f64::INFINITY, f64::min);
            assert_eq!(nearest, 0.0, "eigenvalue {v} has no exact mirror");
        }
    }
}
