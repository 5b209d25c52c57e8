//! Command execution and deterministic emission.
//!
//! Every command produces one text artifact (CSV for tables, JSON for
//! reports) plus a one-line summary. CSV files open with comment lines
//! carrying the fully-resolved config; JSON reports embed it as their first
//! field. Floats are written with 17 significant digits, '.' decimal
//! separator and '\n' line endings, so outputs are byte-stable.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use ptspec::analysis::{
    claim_check, partner_isospectrality, solve_classified, ClaimOptions, MatchOptions,
};
use ptspec::discretize::Grid;
use ptspec::dynamics::{crank_nicolson_propagate, gaussian_packet};
use ptspec::eigensolve::{
    refine_eigen_shooting, RefineOptions, ShootingOptions, SpectralClass, SpectrumEntry,
};
use ptspec::potentials::susy_partner_pair;

use crate::config::{
    build_grid, build_potential, build_stencil, build_superpotential, classify_options,
    dense_options, CliError, RunConfig,
};

/// A finished run: the artifact body and the one-line summary.
pub struct Emission {
    pub body: String,
    pub summary: String,
}

fn fmt_float(x: f64) -> String {
    format!("{x:.16e}")
}

fn fmt_opt(x: Option<f64>) -> String {
    x.map(fmt_float).unwrap_or_default()
}

fn class_token(class: &SpectralClass) -> &'static str {
    match class {
        SpectralClass::Real => "real",
        SpectralClass::ConjugatePair { .. } => "pair",
        SpectralClass::Spurious => "spurious",
    }
}

fn csv_header(cfg: &RunConfig, columns: &str) -> Result<String, CliError> {
    let json = serde_json::to_string(cfg)
        .map_err(|e| CliError::Domain(format!("config serialization failed: {e}")))?;
    Ok(format!(
        "# ptspec {}\n# config: {}\n# columns: {}\n",
        cfg.command, json, columns
    ))
}

fn spectrum_row(entry: &SpectrumEntry) -> String {
    format!(
        "{},{},{},{},{},{},{}\n",
        entry.index,
        fmt_float(entry.re),
        fmt_float(entry.im),
        class_token(&entry.class),
        entry.bound,
        fmt_opt(entry.boundary_mass),
        fmt_opt(entry.box_drift),
    )
}

/// JSON report wrapper: resolved config first, then the payload.
#[derive(Serialize)]
struct JsonReport<'a, T: Serialize> {
    config: &'a RunConfig,
    report: &'a T,
}

fn json_body<T: Serialize>(cfg: &RunConfig, report: &T) -> Result<String, CliError> {
    let wrapped = JsonReport {
        config: cfg,
        report,
    };
    let mut text = serde_json::to_string_pretty(&wrapped)
        .map_err(|e| CliError::Domain(format!("report serialization failed: {e}")))?;
    text.push('\n');
    Ok(text)
}

fn family_config(cfg: &RunConfig) -> Result<&crate::config::FamilyConfig, CliError> {
    cfg.family
        .as_ref()
        .ok_or_else(|| CliError::Usage(format!("`{}` requires a potential family", cfg.command)))
}

fn solve_run(
    cfg: &RunConfig,
    spec: &ptspec::potentials::PotentialSpec,
    grid: &Grid,
) -> Result<ptspec::analysis::ClassifiedRun, CliError> {
    let stencil = build_stencil(&cfg.grid.stencil)?;
    Ok(solve_classified(
        spec,
        grid,
        stencil,
        &dense_options(&cfg.solver),
        &classify_options(&cfg.solver),
        cfg.solver.drift_factor,
    )?)
}

fn run_spectrum(cfg: &RunConfig) -> Result<Emission, CliError> {
    let spec = build_potential(family_config(cfg)?)?;
    let grid = build_grid(&cfg.grid)?;
    let run = solve_run(cfg, &spec, &grid)?;

    let mut body = csv_header(cfg, "k,re,im,class,bound,boundary_mass,box_drift")?;
    for entry in &run.report.entries {
        body.push_str(&spectrum_row(entry));
    }
    let summary = format!(
        "spectrum: {} on n={} -> {} eigenvalues ({} real, {} paired, {} spurious)",
        spec.describe(),
        grid.n(),
        run.report.entries.len(),
        run.report.real_count,
        run.report.paired_count,
        run.report.spurious_count,
    );
    Ok(Emission { body, summary })
}

fn run_shoot(cfg: &RunConfig) -> Result<Emission, CliError> {
    let spec = build_potential(family_config(cfg)?)?;
    let grid = build_grid(&cfg.grid)?;
    let run = solve_run(cfg, &spec, &grid)?;

    let seeds: Vec<Complex64> = run
        .report
        .retained()
        .take(cfg.solver.count)
        .map(|e| e.value())
        .collect();
    if seeds.is_empty() {
        return Err(CliError::Domain(
            "no retained matrix eigenvalues to refine".to_string(),
        ));
    }

    let refine = RefineOptions {
        shooting: ShootingOptions {
            substeps: cfg.solver.substeps,
            match_node: None,
        },
        ..RefineOptions::default()
    };
    let mut body = csv_header(cfg, "k,seed_re,seed_im,re,im,residual,iterations")?;
    let mut worst_gap = 0.0f64;
    for (k, &seed) in seeds.iter().enumerate() {
        let refined = refine_eigen_shooting(&spec, &grid, seed, &refine)?;
        worst_gap = worst_gap.max((refined.e - seed).norm());
        body.push_str(&format!(
            "{},{},{},{},{},{},{}\n",
            k,
            fmt_float(seed.re),
            fmt_float(seed.im),
            fmt_float(refined.e.re),
            fmt_float(refined.e.im),
            fmt_float(refined.residual),
            refined.iterations,
        ));
    }
    let summary = format!(
        "shoot: {} -> refined {} levels, max |matrix - shooting| = {:.3e}",
        spec.describe(),
        seeds.len(),
        worst_gap,
    );
    Ok(Emission { body, summary })
}

fn run_propagate(cfg: &RunConfig) -> Result<Emission, CliError> {
    let spec = build_potential(family_config(cfg)?)?;
    let grid = build_grid(&cfg.grid)?;
    let d = &cfg.dynamics;
    let packet = gaussian_packet(&grid, d.packet_center, d.packet_width, d.packet_momentum)?;
    let (series, _) = crank_nicolson_propagate(&spec, &grid, &packet, d.dt, d.steps)?;

    let mut body = csv_header(cfg, "t,norm,dn_dt,sink_integral,max_defect")?;
    for k in 0..series.len() {
        body.push_str(&format!(
            "{},{},{},{},{}\n",
            fmt_float(series.t[k]),
            fmt_float(series.norm[k]),
            fmt_float(series.dn_dt[k]),
            fmt_float(series.sink_integral[k]),
            fmt_float(series.max_defect[k]),
        ));
    }
    let last = series.len() - 1;
    let summary = format!(
        "propagate: {} for {} steps of dt={} -> N({}) = {:.6}",
        spec.describe(),
        d.steps,
        d.dt,
        series.t[last],
        series.norm[last],
    );
    Ok(Emission { body, summary })
}

fn run_check(cfg: &RunConfig) -> Result<Emission, CliError> {
    let spec = build_potential(family_config(cfg)?)?;
    let grid = build_grid(&cfg.grid)?;
    let stencil = build_stencil(&cfg.grid.stencil)?;
    let opts = ClaimOptions {
        dense: dense_options(&cfg.solver),
        classify: classify_options(&cfg.solver),
        drift_factor: cfg.solver.drift_factor,
        sweep_cutoffs: cfg.solver.sweep_cutoffs.clone(),
        ..ClaimOptions::default()
    };
    let report = claim_check(&spec, &grid, stencil, &opts)?;
    let body = json_body(cfg, &report)?;
    let summary = format!(
        "check: {} -> reality_verdict={} ({} retained levels, {} level shifts)",
        spec.describe(),
        report.reality_verdict,
        report.full_spectrum.retained().count(),
        report.level_shifts.len(),
    );
    Ok(Emission { body, summary })
}

fn run_susy(cfg: &RunConfig) -> Result<Emission, CliError> {
    let w_cfg = cfg
        .superpotential
        .as_ref()
        .ok_or_else(|| CliError::Usage("susy requires a superpotential".to_string()))?;
    let w = build_superpotential(w_cfg)?;
    let (minus, plus) = susy_partner_pair(&w);
    let grid = build_grid(&cfg.grid)?;
    let stencil = build_stencil(&cfg.grid.stencil)?;
    let opts = MatchOptions {
        dense: dense_options(&cfg.solver),
        classify: classify_options(&cfg.solver),
        drift_factor: cfg.solver.drift_factor,
        pair_cutoff: cfg.solver.pair_cutoff,
    };
    let report = partner_isospectrality(&minus, &plus, &grid, stencil, &opts)?;
    let body = json_body(cfg, &report)?;
    let summary = format!(
        "susy: {} -> {} pairs (max mismatch {:.3e}), {} unpaired",
        w.describe(),
        report.pairs.len(),
        report.max_mismatch,
        report.unpaired_minus.len() + report.unpaired_plus.len(),
    );
    Ok(Emission { body, summary })
}

fn run_sweep(cfg: &RunConfig) -> Result<Emission, CliError> {
    let fam = family_config(cfg)?;
    let sweep = cfg
        .sweep
        .as_ref()
        .ok_or_else(|| CliError::Usage("sweep requires a sweep range".to_string()))?;
    let grid = build_grid(&cfg.grid)?;

    let values: Vec<f64> = if sweep.count == 1 {
        vec![sweep.from]
    } else {
        (0..sweep.count)
            .map(|i| sweep.from + (sweep.to - sweep.from) * (i as f64) / ((sweep.count - 1) as f64))
            .collect()
    };

    let solve_point = |&value: &f64| -> Result<String, CliError> {
        let mut point_fam = fam.clone();
        point_fam.params.insert(sweep.parameter.clone(), value);
        let spec = build_potential(&point_fam)?;
        let run = solve_run(cfg, &spec, &grid)?;
        let mut block = format!("# {} = {}\n", sweep.parameter, fmt_float(value));
        for entry in run.report.retained() {
            block.push_str(&format!(
                "{},{},{},{},{}\n",
                fmt_float(value),
                entry.index,
                fmt_float(entry.re),
                fmt_float(entry.im),
                class_token(&entry.class),
            ));
        }
        Ok(block)
    };

    // PTSPEC_THREADS caps the fan-out; the ordered collect keeps the output
    // independent of the thread count.
    let blocks: Vec<Result<String, CliError>> = match sweep_threads()? {
        Some(threads) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(threads)
                .build()
                .map_err(|e| CliError::Domain(format!("thread pool: {e}")))?;
            pool.install(|| values.par_iter().map(solve_point).collect())
        }
        None => values.par_iter().map(solve_point).collect(),
    };

    let mut body = csv_header(cfg, &format!("{},k,re,im,class", sweep.parameter))?;
    for block in blocks {
        body.push_str(&block?);
    }
    let summary = format!(
        "sweep: {} {} from {} to {} in {} points",
        fam.name, sweep.parameter, sweep.from, sweep.to, sweep.count,
    );
    Ok(Emission { body, summary })
}

fn sweep_threads() -> Result<Option<usize>, CliError> {
    match std::env::var("PTSPEC_THREADS") {
        Ok(raw) => {
            let threads: usize = raw.parse().map_err(|_| {
                CliError::Usage(format!(
                    "PTSPEC_THREADS must be a positive integer, got `{raw}`"
                ))
            })?;
            if threads == 0 {
                return Err(CliError::Usage(
                    "PTSPEC_THREADS must be a positive integer".to_string(),
                ));
            }
            Ok(Some(threads))
        }
        Err(std::env::VarError::NotPresent) => Ok(None),
        Err(e) => Err(CliError::Usage(format!("PTSPEC_THREADS: {e}"))),
    }
}

fn run_plotdata(cfg: &RunConfig) -> Result<Emission, CliError> {
    let spec = build_potential(family_config(cfg)?)?;
    let grid = build_grid(&cfg.grid)?;
    let v = spec.eval_on(grid.nodes())?;

    let mut body = csv_header(cfg, "x,re_v,im_v")?;
    for (&x, value) in grid.nodes().iter().zip(&v) {
        body.push_str(&format!(
            "{},{},{}\n",
            fmt_float(x),
            fmt_float(value.re),
            fmt_float(value.im),
        ));
    }
    let summary = format!(
        "plotdata: {} tabulated on {} nodes",
        spec.describe(),
        grid.n(),
    );
    Ok(Emission { body, summary })
}

/// Execute a resolved config and return the artifact plus summary.
pub fn execute(cfg: &RunConfig) -> Result<Emission, CliError> {
    match cfg.command.as_str() {
        "spectrum" => run_spectrum(cfg),
        "shoot" => run_shoot(cfg),
        "propagate" => run_propagate(cfg),
        "check" => run_check(cfg),
        "susy" => run_susy(cfg),
        "sweep" => run_sweep(cfg),
        "plotdata" => run_plotdata(cfg),
        other => Err(CliError::Usage(format!(
            "unknown command `{other}` in config"
        ))),
    }
}
