//! Claim-level analysis: well profiling, the reality claim check, and SUSY
//! partner isospectrality.
//!
//! The question under test: does a complex potential whose real part forms an
//! attractive well and whose imaginary part is odd (PT-symmetric) still carry
//! a real discrete spectrum? [`claim_check`] answers it per potential by
//! solving the full complex problem and the real-part-only problem on the
//! *identical* grid and solver, classifying both spectra, and reporting a
//! verdict plus the level-by-level shifts the imaginary part induces.
//!
//! [`partner_isospectrality`] checks the complementary structural prediction:
//! SUSY partner potentials `V∓ = W² ∓ W′` share their bound spectrum except
//! for at most one unpaired ground level.

use std::sync::Arc;

use num_complex::Complex64;
use serde::Serialize;
use thiserror::Error;

use crate::discretize::{assemble_hamiltonian, DiscretizeError, Grid, GridKind, Stencil};
use crate::eigensolve::{
    boundary_masses, classify_spectrum, dense_eigenvalues, ClassifyOptions, DenseOptions,
    SolveError, SpectralClass, Spectrum, SpectrumReport,
};
use crate::potentials::{
    symmetry_report, ImSignPattern, PotentialError, PotentialFamily, PotentialSpec, SymmetryReport,
};

/// Errors from the analysis layer (all bubbled up from the stages below).
#[derive(Debug, Error)]
pub enum AnalysisError {
    #[error(transparent)]
    Potential(#[from] PotentialError),
    #[error(transparent)]
    Discretize(#[from] DiscretizeError),
    #[error(transparent)]
    Solve(#[from] SolveError),
}

/// Complex number in serialized reports (`Complex64` itself is kept out of
/// the JSON surface so the schema stays `{re, im}` everywhere).
#[derive(Debug, Clone, Copy, Serialize)]
pub struct SpectralPoint {
    pub re: f64,
    pub im: f64,
}

impl From<Complex64> for SpectralPoint {
    fn from(z: Complex64) -> Self {
        SpectralPoint { re: z.re, im: z.im }
    }
}

/// Shape classification of `Re V` on the solve box.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ProfileClass {
    /// At least one strict interior minimum below the asymptotic value, with
    /// `Re V` flat at the box edge: a genuine well that can trap states.
    Well,
    /// `Re V` still rising at the box edge (e.g. `x²`): the potential
    /// confines by growth, there is no finite asymptote and hence no well
    /// depth in the asymptotic sense.
    Confining,
    /// Neither: no strict interior minimum below the asymptote. Covers
    /// potentials unbounded below at an edge (fall-to-center near a cutoff,
    /// quartics that turn down) and monotone profiles.
    NoWell,
}

/// One strict discrete local minimum of `Re V`.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct WellMinimum {
    pub x: f64,
    pub re_v: f64,
}

/// Profile report for `Re V` on a grid, plus the sign pattern of `Im V`.
///
/// Minima are strict discrete local minima (sign change of the first
/// difference) that lie below [`asymptotic_value`](Self::asymptotic_value);
/// for [`ProfileClass::Confining`] profiles the box edge is not an asymptote,
/// so the minima and depth lists are empty by definition.
#[derive(Debug, Clone, Serialize)]
pub struct WellReport {
    pub class: ProfileClass,
    pub well_minima: Vec<WellMinimum>,
    /// `asymptotic_value − re_v` per minimum, aligned with `well_minima`.
    pub well_depths: Vec<f64>,
    /// `Re V` at the box edge: the right edge on a half-line grid, the lower
    /// of the two edge values on a full-line grid.
    pub asymptotic_value: f64,
    /// Grid node where `Re V` is smallest (walls included) — for singular
    /// families this lands on the cutoff wall, which is the honest answer.
    pub global_min_x: f64,
    pub global_min_re: f64,
    pub im_sign_pattern: ImSignPattern,
}

/// Profile `Re V` over `grid` and classify the well structure.
pub fn well_profile(spec: &PotentialSpec, grid: &Grid) -> Result<WellReport, AnalysisError> {
    let xs = grid.nodes();
    let v = spec.eval_on(xs)?;
    let re: Vec<f64> = v.iter().map(|z| z.re).collect();
    let n = re.len();

    let asymptotic_value = match grid.kind() {
        GridKind::HalfLineCutoff { .. } => re[n - 1],
        GridKind::FullLineBox => re[0].min(re[n - 1]),
    };

    let re_scale = re.iter().fold(0.0f64, |m, &x| m.max(x.abs()));
    // "Still rising at the edge" means the outward first difference exceeds
    // this slope floor; well tails (sech², inverse powers) sit far below it.
    let slope_tol = 1e-6 * grid.h() * (1.0 + re_scale);
    let rising_right = re[n - 1] - re[n - 2] > slope_tol;
    let rising_left = re[0] - re[1] > slope_tol;
    let confining = match grid.kind() {
        GridKind::HalfLineCutoff { .. } => rising_right,
        GridKind::FullLineBox => rising_right && rising_left,
    };

    let depth_tol = 1e-9 * (1.0 + asymptotic_value.abs());
    let mut well_minima = Vec::new();
    if !confining {
        for j in 1..n - 1 {
            let falling_in = re[j] - re[j - 1] < 0.0;
            let rising_out = re[j + 1] - re[j] > 0.0;
            if falling_in && rising_out && re[j] < asymptotic_value - depth_tol {
                well_minima.push(WellMinimum {
                    x: xs[j],
                    re_v: re[j],
                });
            }
        }
    }
    let well_depths: Vec<f64> = well_minima
        .iter()
        .map(|m| asymptotic_value - m.re_v)
        .collect();

    let class = if confining {
        ProfileClass::Confining
    } else if well_minima.is_empty() {
        ProfileClass::NoWell
    } else {
        ProfileClass::Well
    };

    let gmin = (0..n)
        .min_by(|&a, &b| re[a].total_cmp(&re[b]))
        .expect("nonempty grid");
    let im_sign_pattern = symmetry_report(spec, grid)?.im_sign_pattern;

    Ok(WellReport {
        class,
        well_minima,
        well_depths,
        asymptotic_value,
        global_min_x: xs[gmin],
        global_min_re: re[gmin],
        im_sign_pattern,
    })
}

/// Per-family defaults for grid, stencil and classification windows.
///
/// These are working defaults tuned so the dense solve stays tractable while
/// the retained levels carry several converged digits; every CLI entry point
/// lets the user override them.
#[derive(Debug, Clone)]
pub struct AnalysisDefaults {
    pub grid: Grid,
    pub stencil: Stencil,
    pub classify: ClassifyOptions,
    /// RK4 substeps per grid interval for the shooting cross-check (the
    /// shifted quartics oscillate fast in the tails and want 2).
    pub shooting_substeps: usize,
}

/// Defaults for a family. Energy windows: confining families get a trust cap
/// `e_cap` (box levels above it are distorted), scattering-type wells get
/// their continuum edge instead (`μ²/4` for the Pöschl–Teller pair, `0` for
/// the inverse-power pair, whose `Re V → 0` at infinity).
pub fn family_defaults(spec: &PotentialSpec) -> Result<AnalysisDefaults, AnalysisError> {
    let mut classify = ClassifyOptions::raw();
    let (grid, stencil, substeps) = match spec.family() {
        PotentialFamily::PoeschlTeller1 | PotentialFamily::PoeschlTeller2 => {
            let mu = spec.param("mu")?;
            classify.continuum_edge = Some(0.25 * mu * mu);
            (Grid::full_line(15.0, 1501)?, Stencil::FivePoint, 1)
        }
        PotentialFamily::CubicOsc | PotentialFamily::QuarticOsc => {
            classify.e_cap = Some(18.0);
            (Grid::full_line(10.0, 1601)?, Stencil::FivePoint, 1)
        }
        PotentialFamily::ShiftedQuartic1 | PotentialFamily::ShiftedQuartic2 => {
            classify.e_cap = Some(14.0);
            (Grid::full_line(8.0, 1001)?, Stencil::FivePoint, 2)
        }
        PotentialFamily::InversePower1 | PotentialFamily::InversePower2 => {
            classify.continuum_edge = Some(0.0);
            (Grid::half_line(1e-2, 10.0, 801)?, Stencil::FivePoint, 1)
        }
        PotentialFamily::Custom => {
            classify.e_cap = Some(13.0);
            (Grid::full_line(10.0, 1201)?, Stencil::FivePoint, 1)
        }
    };
    Ok(AnalysisDefaults {
        grid,
        stencil,
        classify,
        shooting_substeps: substeps,
    })
}

/// A solved and classified spectrum.
#[derive(Debug, Clone)]
pub struct ClassifiedRun {
    pub spectrum: Spectrum,
    pub report: SpectrumReport,
}

/// Enlarged comparison box for drift scoring. Full-line boxes grow `L`;
/// half-line boxes grow `L` but *keep the cutoff ε fixed* — ε is part of the
/// operator definition there, and the drift test must only probe
/// box-dependence (ε-dependence is reported separately by the cutoff sweep).
fn drift_grid(grid: &Grid, factor: f64) -> Result<Grid, DiscretizeError> {
    match grid.kind() {
        GridKind::FullLineBox => Ok(grid.enlarged(factor)),
        GridKind::HalfLineCutoff { eps } => Grid::half_line(eps, grid.x_max() * factor, grid.n()),
    }
}

/// Assemble, solve and classify one potential on one grid.
///
/// With `drift_factor` set, a second spectrum on the enlarged box (same node
/// count) is computed and every eigenvalue is scored by how far it moves;
/// box artifacts drift, discrete levels do not. Boundary masses are attached
/// whenever `dense.compute_vectors` is on.
pub fn solve_classified(
    spec: &PotentialSpec,
    grid: &Grid,
    stencil: Stencil,
    dense: &DenseOptions,
    classify: &ClassifyOptions,
    drift_factor: Option<f64>,
) -> Result<ClassifiedRun, AnalysisError> {
    let m = assemble_hamiltonian(spec, grid, stencil)?;
    let spectrum = dense_eigenvalues(&m, dense)?;
    let masses = boundary_masses(&spectrum, classify.boundary_fraction);

    let enlarged_values = match drift_factor {
        Some(f) => {
            let big = drift_grid(grid, f)?;
            let mb = assemble_hamiltonian(spec, &big, stencil)?;
            let novec = DenseOptions {
                compute_vectors: false,
                ..dense.clone()
            };
            Some(dense_eigenvalues(&mb, &novec)?.eigenvalues)
        }
        None => None,
    };

    let report = classify_spectrum(
        &spectrum.eigenvalues,
        masses.as_deref(),
        enlarged_values.as_deref(),
        classify,
    );
    Ok(ClassifiedRun { spectrum, report })
}

/// Controls for [`claim_check`].
#[derive(Debug, Clone)]
pub struct ClaimOptions {
    pub dense: DenseOptions,
    pub classify: ClassifyOptions,
    /// Box enlargement for drift scoring; `None` skips the second solve
    /// (classification then rests on boundary mass and energy windows).
    pub drift_factor: Option<f64>,
    /// Cutoff values for the ε-sweep on half-line grids (ignored on
    /// full-line grids). Empty disables the sweep.
    pub sweep_cutoffs: Vec<f64>,
    /// How many of the lowest eigenvalues each sweep entry records.
    pub sweep_levels: usize,
}

impl Default for ClaimOptions {
    fn default() -> Self {
        Self {
            dense: DenseOptions::with_vectors(),
            classify: ClassifyOptions::raw(),
            drift_factor: Some(1.25),
            sweep_cutoffs: vec![1e-1, 1e-2, 1e-3],
            sweep_levels: 12,
        }
    }
}

impl ClaimOptions {
    /// Defaults with the family's energy window filled in.
    pub fn for_family(spec: &PotentialSpec) -> Result<Self, AnalysisError> {
        let defaults = family_defaults(spec)?;
        Ok(Self {
            classify: defaults.classify,
            ..Self::default()
        })
    }
}

/// Grid and stencil echo embedded in serialized reports.
#[derive(Debug, Clone, Serialize)]
pub struct GridSummary {
    pub kind: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub eps: Option<f64>,
    pub x_min: f64,
    pub x_max: f64,
    pub n: usize,
    pub h: f64,
    pub stencil: &'static str,
}

fn grid_summary(grid: &Grid, stencil: Stencil) -> GridSummary {
    let (kind, eps) = match grid.kind() {
        GridKind::FullLineBox => ("full-line-box", None),
        GridKind::HalfLineCutoff { eps } => ("half-line-cutoff", Some(eps)),
    };
    GridSummary {
        kind,
        eps,
        x_min: grid.x_min(),
        x_max: grid.x_max(),
        n: grid.n(),
        h: grid.h(),
        stencil: stencil.label(),
    }
}

/// One matched level of the full vs. real-part-only problem.
#[derive(Debug, Clone, Serialize)]
pub struct LevelShift {
    /// Level index within the retained, Re-ordered lists.
    pub k: usize,
    pub e_full: SpectralPoint,
    pub e_realpart: SpectralPoint,
    /// `e_full − e_realpart`.
    pub shift: SpectralPoint,
}

/// Spectrum at one cutoff value of the ε-sweep (half-line families only).
#[derive(Debug, Clone, Serialize)]
pub struct CutoffSpectrum {
    pub eps: f64,
    /// The lowest eigenvalues by real part — exactly the levels that expose
    /// cutoff dependence when the potential falls to the center.
    pub lowest: Vec<SpectralPoint>,
}

/// The full reality-claim report for one potential. Serializes to JSON.
#[derive(Debug, Clone, Serialize)]
pub struct ClaimReport {
    pub family: String,
    pub grid: GridSummary,
    pub symmetry: SymmetryReport,
    pub well: WellReport,
    pub full_spectrum: SpectrumReport,
    pub realpart_spectrum: SpectrumReport,
    /// True iff every retained (non-spurious, bound) entry of the full
    /// spectrum is classified real.
    pub reality_verdict: bool,
    pub level_shifts: Vec<LevelShift>,
    /// Present for half-line grids when the sweep is enabled.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub cutoff_spectra: Option<Vec<CutoffSpectrum>>,
}

/// Solve the full complex problem and the real-part-only problem on the
/// identical grid/stencil/solver, classify both, and report the verdict and
/// level shifts. On half-line grids the spectrum is additionally recorded at
/// each `sweep_cutoffs` value so cutoff dependence is visible in the report.
pub fn claim_check(
    spec: &PotentialSpec,
    grid: &Grid,
    stencil: Stencil,
    opts: &ClaimOptions,
) -> Result<ClaimReport, AnalysisError> {
    let symmetry = symmetry_report(spec, grid)?;
    let well = well_profile(spec, grid)?;

    let full = solve_classified(
        spec,
        grid,
        stencil,
        &opts.dense,
        &opts.classify,
        opts.drift_factor,
    )?;
    let realpart_spec = spec.real_part();
    let realpart = solve_classified(
        &realpart_spec,
        grid,
        stencil,
        &opts.dense,
        &opts.classify,
        opts.drift_factor,
    )?;

    let reality_verdict = full
        .report
        .retained()
        .all(|e| e.class == SpectralClass::Real);

    let full_levels: Vec<Complex64> = full.report.retained().map(|e| e.value()).collect();
    let real_levels: Vec<Complex64> = realpart.report.retained().map(|e| e.value()).collect();
    let matched = full_levels.len().min(real_levels.len());
    let level_shifts: Vec<LevelShift> = (0..matched)
        .map(|k| LevelShift {
            k,
            e_full: full_levels[k].into(),
            e_realpart: real_levels[k].into(),
            shift: (full_levels[k] - real_levels[k]).into(),
        })
        .collect();

    let cutoff_spectra = match grid.kind() {
        GridKind::HalfLineCutoff { .. } if !opts.sweep_cutoffs.is_empty() => {
            let novec = DenseOptions {
                compute_vectors: false,
                ..opts.dense.clone()
            };
            let mut sweeps = Vec::with_capacity(opts.sweep_cutoffs.len());
            for &eps in &opts.sweep_cutoffs {
                let g = Grid::half_line(eps, grid.x_max(), grid.n())?;
                let m = assemble_hamiltonian(spec, &g, stencil)?;
                let s = dense_eigenvalues(&m, &novec)?;
                let lowest = s
                    .eigenvalues
                    .iter()
                    .take(opts.sweep_levels)
                    .map(|&z| z.into())
                    .collect();
                sweeps.push(CutoffSpectrum { eps, lowest });
            }
            Some(sweeps)
        }
        _ => None,
    };

    Ok(ClaimReport {
        family: spec.describe().to_string(),
        grid: grid_summary(grid, stencil),
        symmetry,
        well,
        full_spectrum: full.report,
        realpart_spectrum: realpart.report,
        reality_verdict,
        level_shifts,
        cutoff_spectra,
    })
}

/// Controls for [`partner_isospectrality`].
#[derive(Debug, Clone)]
pub struct MatchOptions {
    pub dense: DenseOptions,
    pub classify: ClassifyOptions,
    /// Box enlargement for drift scoring, as in [`ClaimOptions`]. Potentials
    /// that fall off toward the walls (the shifted quartics) park many
    /// spurious downhill states below any energy cap, and only drift under
    /// enlargement unmasks them.
    pub drift_factor: Option<f64>,
    /// Levels farther apart than this are never paired; it only needs to sit
    /// well below the level spacing and well above the expected mismatch.
    pub pair_cutoff: f64,
}

impl Default for MatchOptions {
    fn default() -> Self {
        let mut classify = ClassifyOptions::raw();
        classify.e_cap = Some(13.0);
        Self {
            dense: DenseOptions::with_vectors(),
            classify,
            drift_factor: Some(1.25),
            pair_cutoff: 0.5,
        }
    }
}

/// One matched partner level.
#[derive(Debug, Clone, Serialize)]
pub struct MatchedLevel {
    pub e_minus: SpectralPoint,
    pub e_plus: SpectralPoint,
    /// `|e_minus − e_plus|`.
    pub mismatch: f64,
}

/// Greedy pairing of the retained bound levels of a SUSY partner pair.
///
/// Exact SUSY predicts the spectra coincide except for at most one unpaired
/// level on the minus side (the zero mode, when normalizable); the report
/// leaves anything farther than `pair_cutoff` from every partner level in
/// the unpaired lists rather than forcing a bad match.
#[derive(Debug, Clone, Serialize)]
pub struct MatchReport {
    pub pairs: Vec<MatchedLevel>,
    pub unpaired_minus: Vec<SpectralPoint>,
    pub unpaired_plus: Vec<SpectralPoint>,
    pub max_mismatch: f64,
}

/// Solve both partners on the same grid, classify, and greedily match their
/// retained bound levels by complex distance (closest pairs first).
pub fn partner_isospectrality(
    v_minus: &PotentialSpec,
    v_plus: &PotentialSpec,
    grid: &Grid,
    stencil: Stencil,
    opts: &MatchOptions,
) -> Result<MatchReport, AnalysisError> {
    let minus = solve_classified(
        v_minus,
        grid,
        stencil,
        &opts.dense,
        &opts.classify,
        opts.drift_factor,
    )?;
    let plus = solve_classified(
        v_plus,
        grid,
        stencil,
        &opts.dense,
        &opts.classify,
        opts.drift_factor,
    )?;
    let a: Vec<Complex64> = minus.report.retained().map(|e| e.value()).collect();
    let b: Vec<Complex64> = plus.report.retained().map(|e| e.value()).collect();

    let mut candidates: Vec<(f64, usize, usize)> = Vec::new();
    for (i, &ea) in a.iter().enumerate() {
        for (j, &eb) in b.iter().enumerate() {
            let d = (ea - eb).norm();
            if d <= opts.pair_cutoff {
                candidates.push((d, i, j));
            }
        }
    }
    candidates.sort_by(|x, y| x.0.total_cmp(&y.0).then(x.1.cmp(&y.1)).then(x.2.cmp(&y.2)));

    let mut used_a = vec![false; a.len()];
    let mut used_b = vec![false; b.len()];
    let mut pairs = Vec::new();
    for (d, i, j) in candidates {
        if used_a[i] || used_b[j] {
            continue;
        }
        used_a[i] = true;
        used_b[j] = true;
        pairs.push(MatchedLevel {
            e_minus: a[i].into(),
            e_plus: b[j].into(),
            mismatch: d,
        });
    }
    pairs.sort_by(|p, q| p.e_minus.re.total_cmp(&q.e_minus.re));

    let unpaired_minus: Vec<SpectralPoint> = a
        .iter()
        .zip(&used_a)
        .filter(|(_, &u)| !u)
        .map(|(&z, _)| z.into())
        .collect();
    let unpaired_plus: Vec<SpectralPoint> = b
        .iter()
        .zip(&used_b)
        .filter(|(_, &u)| !u)
        .map(|(&z, _)| z.into())
        .collect();
    let max_mismatch = pairs.iter().map(|p| p.mismatch).fold(0.0, f64::max);

    Ok(MatchReport {
        pairs,
        unpaired_minus,
        unpaired_plus,
        max_mismatch,
    })
}

/// Convenience: build the SUSY pair from a superpotential and run the match.
pub fn superpotential_isospectrality(
    w: &Arc<crate::potentials::SuperpotentialSpec>,
    grid: &Grid,
    stencil: Stencil,
    opts: &MatchOptions,
) -> Result<MatchReport, AnalysisError> {
    let (minus, plus) = crate::potentials::susy_partner_pair(w);
    partner_isospectrality(&minus, &plus, grid, stencil, opts)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::potentials::SuperpotentialSpec;

    #[test]
    fn sech_well_profile_has_single_centered_minimum() {
        // μ = 1, λ = 2.5: Re V(0) = 1/4 − (λ̃(λ̃−1) + 1) = 0.25 − 7 = −6.75
        // with λ̃ = 1/2 + λ/μ = 3; the tail tends to μ²/4 = 0.25.
        let spec = PotentialSpec::poeschl_teller_1(1.0, 2.5).unwrap();
        let grid = Grid::full_line(15.0, 1501).unwrap();
        let wp = well_profile(&spec, &grid).unwrap();
        assert_eq!(wp.class, ProfileClass::Well);
        assert_eq!(wp.well_minima.len(), 1);
        assert_eq!(wp.well_minima[0].x, 0.0);
        assert!((wp.well_minima[0].re_v + 6.75).abs() < 1e-12);
        assert!((wp.asymptotic_value - 0.25).abs() < 1e-10);
        assert!((wp.well_depths[0] - 7.0).abs() < 1e-10);
        assert_eq!(
            wp.im_sign_pattern,
            ImSignPattern::NonPositiveOnPositiveHalfLine
        );
    }

    #[test]
    fn harmonic_profile_is_confining_not_well() {
        let spec = PotentialSpec::cubic(1.0, 0.0).unwrap();
        let grid = Grid::full_line(10.0, 801).unwrap();
        let wp = well_profile(&spec, &grid).unwrap();
        assert_eq!(wp.class, ProfileClass::Confining);
        assert!(wp.well_minima.is_empty());
        assert!(wp.well_depths.is_empty());
        assert_eq!(wp.global_min_x, 0.0);
        assert_eq!(wp.global_min_re, 0.0);
        assert_eq!(wp.im_sign_pattern, ImSignPattern::Zero);
    }

    #[test]
    fn inverse_power_2_minimum_sits_on_the_cutoff_wall() {
        // Re V = 2/x² − 1/x⁴ for λ = 1. Its only interior stationary point
        // (x = 1, value 1) is a maximum, so the discrete minimum is the
        // cutoff wall itself. Oracle: brute-force argmin over a 10⁵-point
        // scan of the same interval.
        let spec = PotentialSpec::inverse_power_2(1.0).unwrap();
        let eps = 1e-2;
        let grid = Grid::half_line(eps, 10.0, 801).unwrap();
        let wp = well_profile(&spec, &grid).unwrap();

        let m = 100_000;
        let mut brute_x = eps;
        let mut brute_val = f64::INFINITY;
        for i in 0..m {
            let x = eps + (10.0 - eps) * (i as f64) / ((m - 1) as f64);
            let val = (spec.eval(x).unwrap()).re;
            if val < brute_val {
                brute_val = val;
                brute_x = x;
            }
        }
        assert_eq!(brute_x, eps);
        assert_eq!(wp.global_min_x, eps);
        assert!(wp.global_min_re < -9.0e7);
        // And decisively not at the naive stationary point x = 1.
        assert!((wp.global_min_x - 1.0).abs() > 0.9);
        assert_eq!(wp.class, ProfileClass::NoWell);
        assert!(wp.well_minima.is_empty());
    }

    #[test]
    fn real_potential_claim_has_identically_zero_shifts() {
        // V = x² is real, so the full and real-part problems are the same
        // matrix; the shifts must vanish exactly, not just to tolerance.
        let spec = PotentialSpec::cubic(1.0, 0.0).unwrap();
        let grid = Grid::full_line(10.0, 501).unwrap();
        let report =
            claim_check(&spec, &grid, Stencil::ThreePoint, &ClaimOptions::default()).unwrap();
        assert!(report.reality_verdict);
        assert_eq!(report.well.class, ProfileClass::Confining);
        assert!(!report.level_shifts.is_empty());
        for shift in &report.level_shifts {
            assert_eq!(shift.shift.re, 0.0);
            assert_eq!(shift.shift.im, 0.0);
        }
        // Lowest harmonic levels are 1, 3, 5, ...
        assert!((report.level_shifts[0].e_full.re - 1.0).abs() < 1e-3);
        assert!((report.level_shifts[1].e_full.re - 3.0).abs() < 1e-3);
    }

    #[test]
    fn sech_claim_verdict_true_with_nonzero_shifts() {
        let spec = PotentialSpec::poeschl_teller_1(1.0, 2.5).unwrap();
        let grid = Grid::full_line(15.0, 901).unwrap();
        let mut opts = ClaimOptions::default();
        opts.classify.continuum_edge = Some(0.25);
        let report = claim_check(&spec, &grid, Stencil::FivePoint, &opts).unwrap();

        assert!(report.reality_verdict);
        assert_eq!(report.well.class, ProfileClass::Well);
        assert!(report.full_spectrum.real_count >= 2);
        // Closed form: E_k = μ²/4 − μ²(λ̃ − 1 − k)² with λ̃ = 3.
        let levels: Vec<f64> = report.full_spectrum.real_levels().map(|e| e.re).collect();
        assert!((levels[0] + 3.75).abs() < 2e-3);
        assert!((levels[1] + 0.75).abs() < 2e-3);
        // The imaginary part moves the levels relative to the real-part-only
        // well (a deeper sech² with strength λ̃(λ̃−1) + 1 = 7).
        assert!(!report.level_shifts.is_empty());
        assert!(report.level_shifts[0].shift.re.abs() > 0.1);
        // Report serializes.
        let json = serde_json::to_string(&report).unwrap();
        assert!(json.contains("\"reality_verdict\":true"));
    }

    #[test]
    fn cubic_claim_verdict_true_with_nonzero_shifts() {
        let spec = PotentialSpec::cubic(1.0, 1.0).unwrap();
        let grid = Grid::full_line(10.0, 801).unwrap();
        let mut opts = ClaimOptions::default();
        opts.classify.e_cap = Some(18.0);
        let report = claim_check(&spec, &grid, Stencil::FivePoint, &opts).unwrap();

        assert!(report.reality_verdict);
        let full: Vec<f64> = report.full_spectrum.real_levels().map(|e| e.re).collect();
        assert_eq!(full.len(), 5);
        assert!((full[0] - 1.2918).abs() < 2e-3);
        // Real part alone is the harmonic oscillator: 1, 3, 5, ... — every
        // retained level is shifted upward by the ix³ term.
        assert_eq!(report.level_shifts.len(), 5);
        for shift in &report.level_shifts {
            assert!(shift.shift.re > 0.05, "shift {:?}", shift);
        }
    }

    #[test]
    fn harmonic_partners_pair_up_except_one_ground_level() {
        let w = Arc::new(SuperpotentialSpec::linear());
        let grid = Grid::full_line(10.0, 2001).unwrap();
        let report =
            superpotential_isospectrality(&w, &grid, Stencil::ThreePoint, &MatchOptions::default())
                .unwrap();
        // V∓ = x² ∓ 1: spectra {0, 2, 4, ...} and {2, 4, 6, ...}.
        assert_eq!(report.unpaired_minus.len(), 1);
        assert!(report.unpaired_plus.is_empty());
        assert!(report.unpaired_minus[0].re.abs() < 5e-4);
        assert!(!report.pairs.is_empty());
        assert!(report.max_mismatch < 5e-4, "max {}", report.max_mismatch);
    }

    #[test]
    fn sech_partners_are_isospectral_except_threshold_mode() {
        let w = Arc::new(SuperpotentialSpec::poeschl_teller(1.0, 2.5));
        let grid = Grid::full_line(15.0, 1501).unwrap();
        let mut opts = MatchOptions::default();
        opts.classify.e_cap = None;
        opts.classify.continuum_edge = Some(0.25);
        let report = superpotential_isospectrality(&w, &grid, Stencil::ThreePoint, &opts).unwrap();
        // Minus side holds {−3.75, −0.75, ≈0}; the plus side lacks the
        // near-zero level (its would-be partner sits at the continuum edge).
        assert_eq!(
            report.unpaired_minus.len() + report.unpaired_plus.len(),
            1,
            "unpaired minus {:?} plus {:?}",
            report.unpaired_minus,
            report.unpaired_plus
        );
        assert_eq!(report.pairs.len(), 2);
        assert!(report.max_mismatch < 5e-4, "max {}", report.max_mismatch);
    }

    #[test]
    fn shifted_quartic_partners_match_to_coarser_tolerance() {
        let minus = PotentialSpec::shifted_quartic_1();
        let plus = PotentialSpec::shifted_quartic_2();
        let grid = Grid::full_line(8.0, 801).unwrap();
        let mut opts = MatchOptions::default();
        opts.classify.e_cap = Some(14.0);
        let report =
            partner_isospectrality(&minus, &plus, &grid, Stencil::FivePoint, &opts).unwrap();
        // Both potentials fall to −∞ toward the walls, parking dozens of
        // downhill box states below the cap — drift scoring must have
        // screened them all, or the pairing would drown in artifacts. What
        // survives: one zero mode on the minus side, an almost-degenerate
        // near-zero pair on the plus side, and the shared excited levels, so
        // exactly one level ends up unpaired.
        assert_eq!(report.pairs.len(), 3, "pairs {:?}", report.pairs);
        let unpaired = report.unpaired_minus.len() + report.unpaired_plus.len();
        assert_eq!(
            unpaired, 1,
            "minus {:?} plus {:?}",
            report.unpaired_minus, report.unpaired_plus
        );
        let leftover = report
            .unpaired_minus
            .first()
            .or(report.unpaired_plus.first())
            .unwrap();
        assert!(leftover.re.abs() < 1e-2);
        assert!(report
            .pairs
            .iter()
            .any(|p| (p.e_minus.re - 5.6243).abs() < 5e-3));
        assert!(report
            .pairs
            .iter()
            .any(|p| (p.e_minus.re - 11.5347).abs() < 5e-3));
        assert!(report.max_mismatch < 5e-3, "max {}", report.max_mismatch);
    }

    #[test]
    fn family_defaults_cover_every_family() {
        for spec in [
            PotentialSpec::inverse_power_1(1.0).unwrap(),
            PotentialSpec::inverse_power_2(1.0).unwrap(),
            PotentialSpec::shifted_quartic_1(),
            PotentialSpec::shifted_quartic_2(),
            PotentialSpec::poeschl_teller_1(1.0, 2.5).unwrap(),
            PotentialSpec::poeschl_teller_2(1.0, 3.0).unwrap(),
            PotentialSpec::cubic(1.0, 1.0).unwrap(),
            PotentialSpec::quartic(1.0, 1.0, 1.0, 1.0).unwrap(),
            PotentialSpec::free(),
        ] {
            let d = family_defaults(&spec).unwrap();
            assert!(d.grid.n() >= 801);
            assert_eq!(d.stencil, Stencil::FivePoint);
            let windowed = d.classify.e_cap.is_some() || d.classify.continuum_edge.is_some();
            assert!(windowed, "{} lacks an energy window", spec.describe());
        }
    }

    #[test]
    fn half_line_claim_reports_cutoff_sweep() {
        let spec = PotentialSpec::inverse_power_2(1.0).unwrap();
        let grid = Grid::half_line(1e-2, 10.0, 401).unwrap();
        let mut opts = ClaimOptions::default();
        opts.classify.continuum_edge = Some(0.0);
        opts.sweep_cutoffs = vec![1e-1, 1e-2];
        opts.sweep_levels = 6;
        let report = claim_check(&spec, &grid, Stencil::FivePoint, &opts).unwrap();

        let sweeps = report.cutoff_spectra.as_ref().expect("sweep present");
        assert_eq!(sweeps.len(), 2);
        assert_eq!(sweeps[0].eps, 1e-1);
        assert_eq!(sweeps[1].eps, 1e-2);
        assert_eq!(sweeps[0].lowest.len(), 6);
        // Fall-to-center: the deepest level greatly deepens as ε shrinks,
        // which is exactly what the sweep is meant to expose.
        let d01 = sweeps[0].lowest[0].re;
        let d001 = sweeps[1].lowest[0].re;
        assert!(d001 < 100.0 * d01, "eps 0.1 -> {d01}, eps 0.01 -> {d001}");
        // Full-line grids must not grow a sweep section.
        let box_spec = PotentialSpec::cubic(1.0, 1.0).unwrap();
        let box_grid = Grid::full_line(10.0, 301).unwrap();
        let box_report = claim_check(
            &box_spec,
            &box_grid,
            Stencil::FivePoint,
            &ClaimOptions::default(),
        )
        .unwrap();
        assert!(box_report.cutoff_spectra.is_none());
    }
}
