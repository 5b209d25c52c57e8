//! Eigenvalues of real symmetric tridiagonal matrices by the implicit-shift
//! QL algorithm (eigenvalues only, O(n²)).
//!
//! The 3-point discretization of a real potential is exactly this shape, and
//! the O(n³) dense route would dominate the runtime budget at the grid sizes
//! Richardson extrapolation needs; this path has its own (much higher) size
//! cap.

use super::SolveError;

/// Iteration cap per eigenvalue before declaring non-convergence.
const MAX_QL_ITERATIONS: usize = 50;

/// Eigenvalues of the symmetric tridiagonal matrix with diagonal `d` and
/// off-diagonal `e` (`e.len() == d.len() - 1`). Returned sorted ascending.
pub fn symmetric_tridiagonal_eigenvalues(d: &[f64], e: &[f64]) -> Result<Vec<f64>, SolveError> {
    let n = d.len();
    assert!(n >= 1 && e.len() + 1 == n, "inconsistent tridiagonal bands");
    let mut d = d.to_vec();
    // work array with a trailing zero sentinel
    let mut e: Vec<f64> = e.iter().copied().chain(std::iter::once(0.0)).collect();
    let eps = f64::EPSILON;

    for l in 0..n {
        let mut iter = 0usize;
        loop {
            // Find the first negligible off-diagonal element at or after l.
            let mut m = l;
            while m + 1 < n {
                let dd = d[m].abs() + d[m + 1].abs();
                if e[m].abs() <= eps * dd {
                    break;
                }
                m += 1;
            }
            if m == l {
                break; // d[l] has converged
            }
            iter += 1;
            if iter > MAX_QL_ITERATIONS {
                return Err(SolveError::NoConvergence { index: Some(l) });
            }

            // Wilkinson shift from the leading 2x2 of the unreduced block.
            let mut g = (d[l + 1] - d[l]) / (2.0 * e[l]);
            let mut r = g.hypot(1.0);
            g = d[m] - d[l] + e[l] / (g + r.copysign(g));
            let (mut s, mut c) = (1.0f64, 1.0f64);
            let mut p = 0.0f64;

            // Implicit QL sweep, rotations chased from m-1 down to l.
            let mut i = m;
            while i > l {
                i -= 1;
                let mut f = s * e[i];
                let b = c * e[i];
                r = f.hypot(g);
                e[i + 1] = r;
                if r == 0.0 {
                    // Deflate: a rotation annihilated early.
                    d[i + 1] -= p;
                    e[m] = 0.0;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                f = (d[i] - g) * s + 2.0 * c * b;
                p = s * f;
                d[i + 1] = g + p;
                g = c * f - b;
                if i == l {
                    d[l] -= p;
                    e[l] = g;
                    e[m] = 0.0;
                }
            }
        }
    }

    d.sort_by(f64::total_cmp);
    Ok(d)
}
