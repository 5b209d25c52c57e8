//! LU factorization with partial pivoting for complex banded matrices, and
//! inverse iteration built on top of it.
//!
//! Eigenvectors are recovered one at a time from converged eigenvalues; the
//! banded solve keeps that O(n·b²) per iteration instead of O(n²) dense,
//! which matters when spot-checking residuals on production grids.

use num_complex::Complex64;

use crate::discretize::ComplexBandedMatrix;

use super::SolveError;

/// Row-oriented banded LU factors of `A - shift·I` with partial pivoting.
///
/// A matrix with bandwidth `b` gains at most `b` extra superdiagonals of
/// fill under row pivoting, so each working row is stored with a fixed
/// column window `[i - b, i + 2b]`.
#[derive(Debug)]
pub struct BandedLu {
    n: usize,
    b: usize,
    /// Row-major storage, `width = 3b + 1`; `rows[i][c]` is the entry at
    /// column `i - b + c`. After factorization, columns `< i` hold the
    /// eliminated multipliers and columns `>= i` hold U.
    rows: Vec<Vec<Complex64>>,
    /// Pivot row chosen at each elimination step (`swaps[k] >= k`).
    swaps: Vec<usize>,
}

impl BandedLu {
    /// Factor `m - shift·I`. Fails with [`SolveError::SingularShift`] when a
    /// pivot column is exactly zero (the shift is an eigenvalue of a leading
    /// block to working precision).
    pub fn factor(m: &ComplexBandedMatrix, shift: Complex64) -> Result<Self, SolveError> {
        let n = m.n();
        let b = m.half_bandwidth();
        let width = 3 * b + 1;
        let mut rows = vec![vec![Complex64::new(0.0, 0.0); width]; n];
        for i in 0..n {
            let lo = i.saturating_sub(b);
            let hi = (i + b).min(n - 1);
            for j in lo..=hi {
                let mut v = m.get(i, j);
                if i == j {
                    v -= shift;
                }
                rows[i][j + b - i] = v;
            }
        }

        let idx = |i: usize, j: usize| -> usize { j + b - i };
        let mut swaps = vec![0usize; n];
        for k in 0..n {
            let pmax = (k + b).min(n - 1);
            let mut p = k;
            let mut best = rows[k][idx(k, k)].norm();
            for i in k + 1..=pmax {
                let cand = rows[i][idx(i, k)].norm();
                if cand > best {
                    best = cand;
                    p = i;
                }
            }
            if best == 0.0 {
                return Err(SolveError::SingularShift { column: k });
            }
            swaps[k] = p;
            if p != k {
                // Swap column-wise over the shared window [k, k + 2b]; all
                // entries left of column k are already eliminated in both.
                let jhi = (k + 2 * b).min(n - 1);
                for j in k..=jhi {
                    let tmp = rows[k][idx(k, j)];
                    rows[k][idx(k, j)] = rows[p][idx(p, j)];
                    rows[p][idx(p, j)] = tmp;
                }
            }
            let pivot = rows[k][idx(k, k)];
            for i in k + 1..=pmax {
                let mult = rows[i][idx(i, k)] / pivot;
                rows[i][idx(i, k)] = mult; // keep the multiplier for solves
                if mult.norm() != 0.0 {
                    let jhi = (k + 2 * b).min(n - 1);
                    for j in k + 1..=jhi {
                        let upper = rows[k][idx(k, j)];
                        rows[i][idx(i, j)] -= mult * upper;
                    }
                }
            }
        }
        Ok(Self { n, b, rows, swaps })
    }

    /// Solve `(A - shift·I) x = rhs` in place.
    pub fn solve(&self, x: &mut [Complex64]) {
        assert_eq!(x.len(), self.n);
        let b = self.b;
        let idx = |i: usize, j: usize| -> usize { j + b - i };
        for k in 0..self.n {
            let p = self.swaps[k];
            if p != k {
                x.swap(k, p);
            }
            let imax = (k + b).min(self.n - 1);
            for i in k + 1..=imax {
                let mult = self.rows[i][idx(i, k)];
                let xk = x[k];
                x[i] -= mult * xk;
            }
        }
        for i in (0..self.n).rev() {
            let jhi = (i + 2 * b).min(self.n - 1);
            let mut s = x[i];
            for (j, &xj) in x.iter().enumerate().take(jhi + 1).skip(i + 1) {
                s -= self.rows[i][idx(i, j)] * xj;
            }
            x[i] = s / self.rows[i][idx(i, i)];
        }
    }
}

/// Deterministic pseudo-random start vector (fixed LCG), unit 2-norm.
/// A structured start can be exactly orthogonal to the target mode on a
/// symmetric grid; a fixed scrambled one never is in practice and keeps runs
/// reproducible.
fn start_vector(n: usize) -> Vec<Complex64> {
    let mut state: u64 = 0x9e37_79b9_7f4a_7c15;
    let mut v = Vec::with_capacity(n);
    for _ in 0..n {
        state = state
            .wrapping_mul(6364136223846793005)
            .wrapping_add(1442695040888963407);
        let u = ((state >> 11) as f64) / ((1u64 << 53) as f64); // in [0,1)
        v.push(Complex64::new(u - 0.5, 0.0));
    }
    let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    for z in &mut v {
        *z /= norm;
    }
    v
}

/// Eigenvector for an already-converged eigenvalue by inverse iteration.
///
/// Returns the unit-2-norm vector. The shift is nudged off the eigenvalue by
/// a norm-scaled epsilon so the factorization stays regular; if a pivot still
/// collapses the nudge is widened a few times before giving up.
pub fn inverse_iteration(
    m: &ComplexBandedMatrix,
    eigenvalue: Complex64,
    iterations: usize,
) -> Result<Vec<Complex64>, SolveError> {
    let scale = m.inf_norm().max(1.0);
    let mut nudge = 1e-12 * scale;
    let mut lu = None;
    let mut last_err = SolveError::SingularShift { column: 0 };
    for _ in 0..4 {
        match BandedLu::factor(m, eigenvalue + Complex64::new(nudge, 0.0)) {
            Ok(f) => {
                lu = Some(f);
                break;
            }
            Err(e) => {
                last_err = e;
                nudge *= 1e3;
            }
        }
    }
    let lu = lu.ok_or(last_err)?;

    let mut v = start_vector(m.n());
    for _ in 0..iterations.max(1) {
        lu.solve(&mut v);
        let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if !norm.is_finite() || norm == 0.0 {
            return Err(SolveError::InverseIterationBreakdown { eigenvalue });
        }
        for z in &mut v {
            *z /= norm;
        }
    }
    Ok(v)
}
