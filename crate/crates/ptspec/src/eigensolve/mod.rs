//! Eigenvalue engines and spectrum classification.
//!
//! Two independent routes to the same spectra:
//!
//! * **Matrix route** — [`dense_eigenvalues`] diagonalizes the banded
//!   Hamiltonian, picking the cheapest adequate backend: an O(n²)
//!   implicit-shift QL for real symmetric tridiagonal operators (the common
//!   3-point / real-potential case) and dense Hessenberg-QR otherwise. Size
//!   caps are explicit errors, not silent truncation.
//! * **Shooting route** — [`shooting::shooting_residual`] /
//!   [`shooting::refine_eigen_shooting`] integrate the ODE directly and
//!   never see the matrix discretization.
//!
//! [`classify::classify_spectrum`] turns either route's raw output into
//! real levels, conjugate pairs, and explicitly tagged artifacts.

pub mod banded_lu;
pub mod classify;
mod dense_backend;
pub mod shooting;
pub mod tridiagonal;

use num_complex::Complex64;
use thiserror::Error;

use crate::discretize::{
    assemble_hamiltonian, ComplexBandedMatrix, DiscretizeError, Grid, Stencil,
};
use crate::potentials::{PotentialError, PotentialSpec};

pub use classify::{
    classify_spectrum, ClassifyOptions, SpectralClass, SpectrumEntry, SpectrumReport,
};
pub use shooting::{
    matching_node, refine_eigen_shooting, shooting_residual, RefineOptions, RefineResult,
    ShootingOptions,
};

/// Errors from the eigenvalue engines.
#[derive(Debug, Error)]
pub enum SolveError {
    #[error("matrix of size {n} exceeds the {route} cap of {cap}")]
    MatrixTooLarge {
        n: usize,
        cap: usize,
        route: &'static str,
    },
    #[error("QR/QL iteration failed to converge (eigenvalue index: {index:?})")]
    NoConvergence { index: Option<usize> },
    #[error("shift hits an exactly singular pivot at column {column}")]
    SingularShift { column: usize },
    #[error("inverse iteration broke down for eigenvalue {eigenvalue}")]
    InverseIterationBreakdown { eigenvalue: Complex64 },
    #[error("grid with {n} nodes is too small to pick an interior matching node")]
    GridTooSmallForMatching { n: usize },
    #[error("matching node {node} lies on a wall")]
    MatchNodeOnWall { node: usize },
    #[error("shooting solution overflowed near x = {x}")]
    ShootingOverflow { x: f64 },
    #[error("refinement stalled at E = {e} (zero residual derivative)")]
    RefineStalled { e: Complex64 },
    #[error("refinement left the search radius: seed {seed}, reached {e}")]
    RefineDiverged { seed: Complex64, e: Complex64 },
    #[error("refinement converged to E = {e} but the residual {residual:.3e} exceeds tolerance")]
    ResidualAboveTolerance { e: Complex64, residual: f64 },
    #[error("refinement did not converge within {max_iterations} iterations from seed {seed}")]
    RefineMaxIterations {
        seed: Complex64,
        max_iterations: usize,
    },
    #[error(transparent)]
    Potential(#[from] PotentialError),
    #[error(transparent)]
    Discretize(#[from] DiscretizeError),
}

/// Raw output of the matrix route.
#[derive(Debug, Clone)]
pub struct Spectrum {
    /// Eigenvalues sorted by real part, ties by imaginary part.
    pub eigenvalues: Vec<Complex64>,
    /// Unit-2-norm eigenvectors aligned with `eigenvalues`, when requested.
    pub eigenvectors: Option<Vec<Vec<Complex64>>>,
    /// Relative backward errors `‖Mv - Ev‖₂ / ‖M‖∞`, aligned with
    /// `eigenvalues`, when vectors were requested.
    ///
    /// Low-lying (physical) pairs sit at rounding level; strongly
    /// non-normal box modes high in a complex spectrum can carry larger
    /// values because the reported eigenvalue itself has a pseudospectral
    /// forward error. That is a property of the operator, not the solver,
    /// which is why the per-pair numbers are kept instead of one max.
    pub backward_errors: Option<Vec<f64>>,
}

impl Spectrum {
    /// Largest backward error over the computed pairs, when available.
    pub fn max_backward_error(&self) -> Option<f64> {
        self.backward_errors
            .as_ref()
            .map(|es| es.iter().copied().fold(0.0, f64::max))
    }
}

/// Controls for [`dense_eigenvalues`].
#[derive(Debug, Clone)]
pub struct DenseOptions {
    /// Also recover eigenvectors (by banded inverse iteration) and report
    /// the worst backward error.
    pub compute_vectors: bool,
    /// Size cap for the dense O(n³) backend.
    pub dense_cap: usize,
    /// Size cap for the real symmetric tridiagonal O(n²) fast path.
    pub tridiagonal_cap: usize,
}

impl Default for DenseOptions {
    fn default() -> Self {
        Self {
            compute_vectors: false,
            dense_cap: 4000,
            tridiagonal_cap: 16000,
        }
    }
}

impl DenseOptions {
    pub fn with_vectors() -> Self {
        Self {
            compute_vectors: true,
            ..Self::default()
        }
    }
}

/// Full spectrum of a banded Hamiltonian.
///
/// Real symmetric tridiagonal input (3-point stencil, real potential) takes
/// the QL fast path; anything else goes through the dense backend. Both
/// honor their explicit size caps by returning
/// [`SolveError::MatrixTooLarge`].
pub fn dense_eigenvalues(
    m: &ComplexBandedMatrix,
    opts: &DenseOptions,
) -> Result<Spectrum, SolveError> {
    let n = m.n();
    let mut values: Vec<Complex64> = if m.half_bandwidth() == 1 && m.is_real() {
        if n > opts.tridiagonal_cap {
            return Err(SolveError::MatrixTooLarge {
                n,
                cap: opts.tridiagonal_cap,
                route: "symmetric tridiagonal",
            });
        }
        let d: Vec<f64> = m.diagonal().iter().map(|z| z.re).collect();
        let e: Vec<f64> = m.superdiagonal(1).iter().map(|z| z.re).collect();
        tridiagonal::symmetric_tridiagonal_eigenvalues(&d, &e)?
            .into_iter()
            .map(|x| Complex64::new(x, 0.0))
            .collect()
    } else {
        if n > opts.dense_cap {
            return Err(SolveError::MatrixTooLarge {
                n,
                cap: opts.dense_cap,
                route: "dense",
            });
        }
        if m.is_real() {
            dense_backend::real_eigenvalues(m)?
        } else if m.is_pt_symmetric() {
            // Exactly J-symmetric matrices are similar to a real matrix on
            // the fixed subspace of the PT involution; solving there keeps
            // the computed spectrum exactly closed under conjugation.
            dense_backend::pt_folded_eigenvalues(m)?
        } else {
            dense_backend::complex_eigenvalues(m)?
        }
    };
    values.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));

    let (eigenvectors, backward_errors) = if opts.compute_vectors {
        let norm = m.inf_norm().max(f64::MIN_POSITIVE);
        let mut vecs = Vec::with_capacity(values.len());
        let mut errs = Vec::with_capacity(values.len());
        for &lam in &values {
            let v = banded_lu::inverse_iteration(m, lam, 3)?;
            let mv = m.matvec(&v);
            let resid = mv
                .iter()
                .zip(&v)
                .map(|(a, b)| (a - lam * b).norm_sqr())
                .sum::<f64>()
                .sqrt();
            errs.push(resid / norm);
            vecs.push(v);
        }
        (Some(vecs), Some(errs))
    } else {
        (None, None)
    };

    Ok(Spectrum {
        eigenvalues: values,
        eigenvectors,
        backward_errors,
    })
}

/// Assemble and solve on `grid` and its 2n-1 refinement, then Richardson-
/// extrapolate the lowest `count` eigenvalues using the stencil's
/// convergence order. Pairing is by sorted index, which is reliable for the
/// well-separated low end of a spectrum.
pub fn richardson_eigenvalues(
    spec: &PotentialSpec,
    grid: &Grid,
    stencil: Stencil,
    count: usize,
    opts: &DenseOptions,
) -> Result<Vec<Complex64>, SolveError> {
    let coarse_m = assemble_hamiltonian(spec, grid, stencil)?;
    let fine_grid = grid.refined();
    let fine_m = assemble_hamiltonian(spec, &fine_grid, stencil)?;
    let coarse = dense_eigenvalues(&coarse_m, opts)?.eigenvalues;
    let fine = dense_eigenvalues(&fine_m, opts)?.eigenvalues;
    let k = count.min(coarse.len()).min(fine.len());
    let weight = (2.0f64).powi(stencil.order() as i32);
    Ok((0..k)
        .map(|i| (weight * fine[i] - coarse[i]) / (weight - 1.0))
        .collect())
}

/// Fraction of |ψ|² in the outer `fraction` of nodes on each side.
pub fn boundary_mass(vector: &[Complex64], fraction: f64) -> f64 {
    let n = vector.len();
    if n == 0 {
        return 0.0;
    }
    let k = ((fraction * n as f64).ceil() as usize).clamp(1, n / 2);
    let total: f64 = vector.iter().map(|z| z.norm_sqr()).sum();
    if total == 0.0 {
        return 0.0;
    }
    let outer: f64 = vector[..k]
        .iter()
        .chain(&vector[n - k..])
        .map(|z| z.norm_sqr())
        .sum();
    outer / total
}

/// Boundary masses for every vector of a spectrum, in order.
pub fn boundary_masses(spectrum: &Spectrum, fraction: f64) -> Option<Vec<f64>> {
    spectrum
        .eigenvectors
        .as_ref()
        .map(|vs| vs.iter().map(|v| boundary_mass(v, fraction)).collect())
}
