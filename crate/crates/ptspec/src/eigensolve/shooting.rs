//! Matrix-free shooting engine: RK4 integration of `u'' = (V - E) u` from
//! both walls, matched in the interior by a normalized Wronskian.
//!
//! This is the independent cross-check for the matrix route: it shares no
//! discretization with the banded Hamiltonian (different order, different
//! error constants), so agreement between the two is evidence about the
//! operator, not about one scheme's artifacts.

use num_complex::Complex64;

use crate::discretize::Grid;
use crate::potentials::PotentialSpec;

use super::SolveError;

/// Tuning knobs for the shooting integrator.
#[derive(Debug, Clone)]
pub struct ShootingOptions {
    /// RK4 sub-steps per grid cell (>= 1). Raise for potentials with steep
    /// tails near the walls where one step per cell under-resolves.
    pub substeps: usize,
    /// Matching node as a full-grid index; `None` picks the node with the
    /// smallest `Re V` over the central third of the interior.
    pub match_node: Option<usize>,
}

impl Default for ShootingOptions {
    fn default() -> Self {
        Self {
            substeps: 1,
            match_node: None,
        }
    }
}

/// Controls for Newton refinement of a shooting eigenvalue.
#[derive(Debug, Clone)]
pub struct RefineOptions {
    /// Stop when the Newton step magnitude drops below this.
    pub step_tol: f64,
    /// The converged energy must leave a residual below this, or refinement
    /// reports failure rather than an unreliable value.
    pub residual_tol: f64,
    /// Iteration cap.
    pub max_iterations: usize,
    /// Abort if the iterate wanders further than this from the seed;
    /// `None` means `2·(1 + |E₀|)`.
    pub search_radius: Option<f64>,
    /// Integrator settings used for every residual evaluation.
    pub shooting: ShootingOptions,
}

impl Default for RefineOptions {
    fn default() -> Self {
        Self {
            step_tol: 1e-10,
            residual_tol: 1e-8,
            max_iterations: 50,
            search_radius: None,
            shooting: ShootingOptions::default(),
        }
    }
}

/// Outcome of a successful Newton refinement.
#[derive(Debug, Clone)]
pub struct RefineResult {
    /// Refined eigenvalue.
    pub e: Complex64,
    /// `|F(E)|` at the refined energy.
    pub residual: f64,
    /// Newton iterations consumed.
    pub iterations: usize,
}

/// Node index used to match the two shooting branches: the interior node
/// with the smallest `Re V` restricted to the central third of the grid.
///
/// The restriction matters for inverted-well tails (e.g. quartics opening
/// downward), where the global minimum of `Re V` sits at the walls — matching
/// there would compare two barely-integrated branches and lose all contrast.
pub fn matching_node(spec: &PotentialSpec, grid: &Grid) -> Result<usize, SolveError> {
    if let Some((lo, hi)) = prefer_node_window(grid) {
        let nodes = grid.nodes();
        let center = (grid.n() - 1) / 2;
        let mut best = lo;
        let mut best_val = spec.eval(nodes[lo])?.re;
        for (i, &x) in nodes.iter().enumerate().take(hi + 1).skip(lo + 1) {
            let v = spec.eval(x)?.re;
            // Exact ties resolve toward the grid center so that the choice
            // is reflection-invariant (a flat Re V, e.g. a purely imaginary
            // potential, must match at the central node to keep the
            // residual's conjugation symmetry on symmetric grids).
            let closer = i.abs_diff(center) < best.abs_diff(center);
            if v < best_val || (v == best_val && closer) {
                best_val = v;
                best = i;
            }
        }
        Ok(best)
    } else {
        Err(SolveError::GridTooSmallForMatching { n: grid.n() })
    }
}

/// Central-third window of full-grid indices, excluding the walls.
fn prefer_node_window(grid: &Grid) -> Option<(usize, usize)> {
    let n = grid.n();
    if n < 5 {
        return None;
    }
    let lo = (n / 3).max(1);
    let hi = (2 * n / 3).min(n - 2);
    if lo > hi {
        None
    } else {
        Some((lo, hi))
    }
}

/// Integrate `[u, u']` across `cells` grid cells starting at node `start`,
/// stepping by `dir` (+1 right, -1 left), with `substeps` RK4 sub-steps per
/// cell. Launch data is `u = 0`, `u' = dir·h` at the wall. Both components
/// are rescaled together when they threaten overflow; the normalized
/// Wronskian is invariant under that.
fn integrate_branch(
    spec: &PotentialSpec,
    grid: &Grid,
    e: Complex64,
    start: usize,
    end: usize,
    substeps: usize,
) -> Result<(Complex64, Complex64), SolveError> {
    const RESCALE_LIMIT: f64 = 1e140;
    let nodes = grid.nodes();
    let dir: isize = if end >= start { 1 } else { -1 };
    let h = grid.h();
    let mut u = Complex64::new(0.0, 0.0);
    let mut v = Complex64::new(dir as f64 * h, 0.0);

    let q = |x: f64| -> Result<Complex64, SolveError> { Ok(spec.eval(x)? - e) };

    let mut i = start as isize;
    while i != end as isize {
        let x0 = nodes[i as usize];
        let x1 = nodes[(i + dir) as usize];
        let s = (x1 - x0) / substeps as f64;
        for k in 0..substeps {
            let xa = x0 + s * k as f64;
            let xm = xa + 0.5 * s;
            let xb = if k + 1 == substeps { x1 } else { xa + s };
            let qa = q(xa)?;
            let qm = q(xm)?;
            let qb = q(xb)?;

            // RK4 for u' = v, v' = q(x) u.
            let k1u = v;
            let k1v = qa * u;
            let k2u = v + 0.5 * s * k1v;
            let k2v = qm * (u + 0.5 * s * k1u);
            let k3u = v + 0.5 * s * k2v;
            let k3v = qm * (u + 0.5 * s * k2u);
            let k4u = v + s * k3v;
            let k4v = qb * (u + s * k3u);
            u += s / 6.0 * (k1u + 2.0 * k2u + 2.0 * k3u + k4u);
            v += s / 6.0 * (k1v + 2.0 * k2v + 2.0 * k3v + k4v);
        }
        let mag = u.norm().max(v.norm());
        if !mag.is_finite() {
            return Err(SolveError::ShootingOverflow {
                x: nodes[(i + dir) as usize],
            });
        }
        if mag > RESCALE_LIMIT {
            u /= mag;
            v /= mag;
        }
        i += dir;
    }
    Ok((u, v))
}

/// Normalized Wronskian mismatch of the two branches at the matching node.
///
/// Zero exactly when the left- and right-launched solutions are linearly
/// dependent there, i.e. when `E` is an eigenvalue of the wall-clamped
/// problem. The normalization
/// `(|u_L| + h|v_L|)(|u_R| + h|v_R|)` keeps the value scale-free and finite
/// even when one branch's `u` passes through a node of the eigenfunction.
pub fn shooting_residual(
    spec: &PotentialSpec,
    grid: &Grid,
    e: Complex64,
    opts: &ShootingOptions,
) -> Result<Complex64, SolveError> {
    let n = grid.n();
    let m = match opts.match_node {
        Some(m) => {
            if m == 0 || m >= n - 1 {
                return Err(SolveError::MatchNodeOnWall { node: m });
            }
            m
        }
        None => matching_node(spec, grid)?,
    };
    let substeps = opts.substeps.max(1);
    let (ul, vl) = integrate_branch(spec, grid, e, 0, m, substeps)?;
    let (ur, vr) = integrate_branch(spec, grid, e, n - 1, m, substeps)?;
    let h = grid.h();
    let wronskian = ul * vr - vl * ur;
    let scale = (ul.norm() + h * vl.norm()) * (ur.norm() + h * vr.norm());
    if scale == 0.0 {
        return Err(SolveError::ShootingOverflow { x: grid.nodes()[m] });
    }
    Ok(wronskian / scale)
}

/// Polish an eigenvalue estimate with complex Newton iteration on the
/// shooting residual, using a central finite-difference derivative.
pub fn refine_eigen_shooting(
    spec: &PotentialSpec,
    grid: &Grid,
    e0: Complex64,
    opts: &RefineOptions,
) -> Result<RefineResult, SolveError> {
    let radius = opts
        .search_radius
        .unwrap_or_else(|| 2.0 * (1.0 + e0.norm()));
    let mut e = e0;
    for iteration in 1..=opts.max_iterations {
        let f = shooting_residual(spec, grid, e, &opts.shooting)?;
        let delta = 1e-6 * (1.0 + e.norm());
        let f_plus = shooting_residual(spec, grid, e + delta, &opts.shooting)?;
        let f_minus = shooting_residual(spec, grid, e - delta, &opts.shooting)?;
        let df = (f_plus - f_minus) / (2.0 * delta);
        if df.norm() == 0.0 {
            return Err(SolveError::RefineStalled { e });
        }
        let mut step = -f / df;
        let cap = 0.5 * (1.0 + e.norm());
        if step.norm() > cap {
            step *= cap / step.norm();
        }
        e += step;
        if (e - e0).norm() > radius {
            return Err(SolveError::RefineDiverged { seed: e0, e });
        }
        if step.norm() < opts.step_tol {
            let residual = shooting_residual(spec, grid, e, &opts.shooting)?.norm();
            if residual < opts.residual_tol {
                return Ok(RefineResult {
                    e,
                    residual,
                    iterations: iteration,
                });
            }
            return Err(SolveError::ResidualAboveTolerance { e, residual });
        }
    }
    Err(SolveError::RefineMaxIterations {
        seed: e0,
        max_iterations: opts.max_iterations,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::discretize::build_grid;
    use crate::potentials::PotentialSpec;

    fn harmonic() -> PotentialSpec {
        PotentialSpec::cubic(1.0, 0.0).unwrap()
    }

    #[test]
    fn matching_node_sits_at_well_bottom() {
        let grid = build_grid(-10.0, 10.0, 2001).unwrap();
        let spec = harmonic();
        let m = matching_node(&spec, &grid).unwrap();
        assert_eq!(m, 1000); // x = 0 on the symmetric 2001-node grid
    }

    #[test]
    fn harmonic_residual_small_at_eigenvalue_large_off() {
        let grid = build_grid(-10.0, 10.0, 2001).unwrap();
        let spec = harmonic();
        let opts = ShootingOptions::default();
        let at = shooting_residual(&spec, &grid, Complex64::new(1.0, 0.0), &opts)
            .unwrap()
            .norm();
        let off = shooting_residual(&spec, &grid, Complex64::new(0.0, 0.0), &opts)
            .unwrap()
            .norm();
        assert!(at < 1e-6, "residual at E=1 was {at}");
        assert!(off > 1e-2, "residual at E=0 was {off}");
    }

    #[test]
    fn refine_converges_to_harmonic_ground_state() {
        let grid = build_grid(-10.0, 10.0, 2001).unwrap();
        let spec = harmonic();
        let out = refine_eigen_shooting(
            &spec,
            &grid,
            Complex64::new(0.93, 0.02),
            &RefineOptions::default(),
        )
        .unwrap();
        assert!(
            (out.e - Complex64::new(1.0, 0.0)).norm() < 1e-8,
            "{}",
            out.e
        );
        assert!(out.residual < 1e-8);
    }

    #[test]
    fn refine_rejects_energy_far_from_any_eigenvalue() {
        // Seeded exactly between eigenvalues with a tight leash, Newton
        // either stalls, wanders out, or runs out of iterations.
        let grid = build_grid(-10.0, 10.0, 801).unwrap();
        let spec = harmonic();
        let opts = RefineOptions {
            search_radius: Some(0.4),
            ..RefineOptions::default()
        };
        let out = refine_eigen_shooting(&spec, &grid, Complex64::new(2.0, 0.0), &opts);
        assert!(out.is_err());
    }

    #[test]
    fn wall_matching_node_is_rejected() {
        let grid = build_grid(-10.0, 10.0, 101).unwrap();
        let spec = harmonic();
        let opts = ShootingOptions {
            match_node: Some(0),
            ..ShootingOptions::default()
        };
        let err = shooting_residual(&spec, &grid, Complex64::new(1.0, 0.0), &opts).unwrap_err();
        assert!(matches!(err, SolveError::MatchNodeOnWall { node: 0 }));
    }
}
