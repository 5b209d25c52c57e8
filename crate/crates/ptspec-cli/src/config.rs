//! Run configuration: the single source of truth for a CLI invocation.
//!
//! Flags resolve into a fully-populated [`RunConfig`] (every default filled
//! in), `--config file.json` loads the same structure directly, and every
//! output embeds the resolved config — so a run can always be reproduced
//! byte-for-byte from its own artifact.

use std::collections::BTreeMap;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use ptspec::analysis::{family_defaults, AnalysisError};
use ptspec::discretize::{Grid, GridKind, Stencil};
use ptspec::eigensolve::{ClassifyOptions, DenseOptions};
use ptspec::potentials::{PotentialFamily, PotentialSpec, SuperpotentialSpec};

/// CLI failure modes, mapped to exit codes: usage errors exit 2, domain and
/// solver errors exit 1.
#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Domain(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Domain(_) => 1,
        }
    }

    pub fn message(&self) -> &str {
        match self {
            CliError::Usage(m) | CliError::Domain(m) => m,
        }
    }
}

impl From<AnalysisError> for CliError {
    fn from(e: AnalysisError) -> Self {
        CliError::Domain(e.to_string())
    }
}

impl From<ptspec::potentials::PotentialError> for CliError {
    fn from(e: ptspec::potentials::PotentialError) -> Self {
        CliError::Domain(e.to_string())
    }
}

impl From<ptspec::discretize::DiscretizeError> for CliError {
    fn from(e: ptspec::discretize::DiscretizeError) -> Self {
        CliError::Domain(e.to_string())
    }
}

impl From<ptspec::eigensolve::SolveError> for CliError {
    fn from(e: ptspec::eigensolve::SolveError) -> Self {
        CliError::Domain(e.to_string())
    }
}

impl From<ptspec::dynamics::DynamicsError> for CliError {
    fn from(e: ptspec::dynamics::DynamicsError) -> Self {
        CliError::Domain(e.to_string())
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Domain(format!("i/o error: {e}"))
    }
}

/// Fully-resolved run description. Serializing it reproduces the run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    pub command: String,
    /// The potential under study; `None` only for `susy`, which works from
    /// the superpotential instead.
    pub family: Option<FamilyConfig>,
    pub superpotential: Option<SuperpotentialConfig>,
    pub grid: GridConfig,
    pub solver: SolverConfig,
    pub dynamics: DynamicsConfig,
    pub sweep: Option<SweepConfig>,
    pub output: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FamilyConfig {
    pub name: String,
    pub params: BTreeMap<String, f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SuperpotentialConfig {
    pub name: String,
    pub params: BTreeMap<String, f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridConfig {
    /// Box half-width (full line) or right edge (half line).
    pub l: f64,
    pub n: usize,
    /// Present selects the half-line grid `[eps, l]`.
    pub eps: Option<f64>,
    /// `"3pt"` or `"5pt"`.
    pub stencil: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolverConfig {
    /// Engine the command routes through: `matrix`, `shooting`, or
    /// `crank-nicolson` (recorded, not user-chosen).
    pub method: String,
    pub tau_real: f64,
    pub dense_cap: usize,
    pub e_cap: Option<f64>,
    pub continuum_edge: Option<f64>,
    /// Box-enlargement factor for drift scoring; `None` disables the second
    /// solve.
    pub drift_factor: Option<f64>,
    /// RK4 substeps per grid interval in the shooting engine.
    pub substeps: usize,
    /// How many retained levels `shoot` refines.
    pub count: usize,
    /// Greedy-pairing distance ceiling for `susy`.
    pub pair_cutoff: f64,
    /// Cutoff values for the half-line ε-sweep in `check`.
    pub sweep_cutoffs: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DynamicsConfig {
    pub dt: f64,
    pub steps: usize,
    pub packet_center: f64,
    pub packet_width: f64,
    pub packet_momentum: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepConfig {
    pub parameter: String,
    pub from: f64,
    pub to: f64,
    pub count: usize,
}

pub const FAMILY_SLUGS: [&str; 8] = [
    "inverse-power-1",
    "inverse-power-2",
    "shifted-quartic-1",
    "shifted-quartic-2",
    "poeschl-teller-1",
    "poeschl-teller-2",
    "cubic",
    "quartic",
];

pub const SUPERPOTENTIAL_SLUGS: [&str; 6] = [
    "linear",
    "inverse-power",
    "inverse-power-conjugate",
    "shifted-quartic-1",
    "shifted-quartic-2",
    "poeschl-teller",
];

/// Parameter names each family accepts (sorted, matching the stored keys).
pub fn family_param_names(family: PotentialFamily) -> &'static [&'static str] {
    match family {
        PotentialFamily::InversePower1 => &["lambda"],
        PotentialFamily::InversePower2 => &["im_sign", "lambda"],
        PotentialFamily::ShiftedQuartic1 | PotentialFamily::ShiftedQuartic2 => &[],
        PotentialFamily::PoeschlTeller1 | PotentialFamily::PoeschlTeller2 => &["lambda", "mu"],
        PotentialFamily::CubicOsc => &["g", "mu"],
        PotentialFamily::QuarticOsc => &["a", "beta", "c", "delta"],
        PotentialFamily::Custom => &[],
    }
}

fn default_params(family: PotentialFamily) -> BTreeMap<String, f64> {
    let pairs: &[(&str, f64)] = match family {
        PotentialFamily::InversePower1 => &[("lambda", 1.0)],
        PotentialFamily::InversePower2 => &[("lambda", 1.0), ("im_sign", -1.0)],
        PotentialFamily::ShiftedQuartic1 | PotentialFamily::ShiftedQuartic2 => &[],
        PotentialFamily::PoeschlTeller1 | PotentialFamily::PoeschlTeller2 => {
            &[("mu", 1.0), ("lambda", 2.5)]
        }
        PotentialFamily::CubicOsc => &[("mu", 1.0), ("g", 1.0)],
        PotentialFamily::QuarticOsc => &[("a", 1.0), ("beta", 1.0), ("c", 1.0), ("delta", 1.0)],
        PotentialFamily::Custom => &[],
    };
    pairs.iter().map(|&(k, v)| (k.to_string(), v)).collect()
}

fn required(params: &BTreeMap<String, f64>, family: &str, name: &str) -> Result<f64, CliError> {
    params
        .get(name)
        .copied()
        .ok_or_else(|| CliError::Usage(format!("family {family} is missing parameter {name}")))
}

/// Build the potential named by `cfg`. Unknown names are usage errors that
/// list the valid slugs; invalid parameter values are domain errors.
pub fn build_potential(cfg: &FamilyConfig) -> Result<PotentialSpec, CliError> {
    let family = PotentialFamily::from_slug(&cfg.name).ok_or_else(|| {
        CliError::Usage(format!(
            "unknown family `{}`; valid families: {}",
            cfg.name,
            FAMILY_SLUGS.join(", ")
        ))
    })?;
    for key in cfg.params.keys() {
        if !family_param_names(family).contains(&key.as_str()) {
            return Err(CliError::Usage(format!(
                "family {} has no parameter `{}`; valid parameters: {}",
                cfg.name,
                key,
                family_param_names(family).join(", ")
            )));
        }
    }
    let p = &cfg.params;
    let name = &cfg.name;
    let spec = match family {
        PotentialFamily::InversePower1 => {
            PotentialSpec::inverse_power_1(required(p, name, "lambda")?)?
        }
        PotentialFamily::InversePower2 => PotentialSpec::inverse_power_2_signed(
            required(p, name, "lambda")?,
            p.get("im_sign").copied().unwrap_or(-1.0),
        )?,
        PotentialFamily::ShiftedQuartic1 => PotentialSpec::shifted_quartic_1(),
        PotentialFamily::ShiftedQuartic2 => PotentialSpec::shifted_quartic_2(),
        PotentialFamily::PoeschlTeller1 => {
            PotentialSpec::poeschl_teller_1(required(p, name, "mu")?, required(p, name, "lambda")?)?
        }
        PotentialFamily::PoeschlTeller2 => {
            PotentialSpec::poeschl_teller_2(required(p, name, "mu")?, required(p, name, "lambda")?)?
        }
        PotentialFamily::CubicOsc => {
            PotentialSpec::cubic(required(p, name, "mu")?, required(p, name, "g")?)?
        }
        PotentialFamily::QuarticOsc => PotentialSpec::quartic(
            required(p, name, "a")?,
            required(p, name, "beta")?,
            required(p, name, "c")?,
            required(p, name, "delta")?,
        )?,
        PotentialFamily::Custom => {
            return Err(CliError::Usage(format!(
                "family `custom` is library-only; valid families: {}",
                FAMILY_SLUGS.join(", ")
            )))
        }
    };
    Ok(spec)
}

/// Build the superpotential named by `cfg`.
pub fn build_superpotential(
    cfg: &SuperpotentialConfig,
) -> Result<Arc<SuperpotentialSpec>, CliError> {
    let p = &cfg.params;
    let name = &cfg.name;
    let w = match cfg.name.as_str() {
        "linear" => SuperpotentialSpec::linear(),
        "inverse-power" => SuperpotentialSpec::inverse_power(required(p, name, "lambda")?),
        "inverse-power-conjugate" => {
            SuperpotentialSpec::inverse_power_conjugate(required(p, name, "lambda")?)
        }
        "shifted-quartic-1" => SuperpotentialSpec::shifted_quartic_1(),
        "shifted-quartic-2" => SuperpotentialSpec::shifted_quartic_2(),
        "poeschl-teller" => SuperpotentialSpec::poeschl_teller(
            required(p, name, "mu")?,
            required(p, name, "lambda")?,
        ),
        other => {
            return Err(CliError::Usage(format!(
                "unknown superpotential `{other}`; valid names: {}",
                SUPERPOTENTIAL_SLUGS.join(", ")
            )))
        }
    };
    Ok(Arc::new(w))
}

pub fn build_grid(cfg: &GridConfig) -> Result<Grid, CliError> {
    let grid = match cfg.eps {
        Some(eps) => Grid::half_line(eps, cfg.l, cfg.n)?,
        None => Grid::full_line(cfg.l, cfg.n)?,
    };
    Ok(grid)
}

pub fn build_stencil(name: &str) -> Result<Stencil, CliError> {
    match name {
        "3pt" => Ok(Stencil::ThreePoint),
        "5pt" => Ok(Stencil::FivePoint),
        other => Err(CliError::Usage(format!(
            "unknown stencil `{other}`; valid stencils: 3pt, 5pt"
        ))),
    }
}

pub fn classify_options(solver: &SolverConfig) -> ClassifyOptions {
    let mut opts = ClassifyOptions::raw();
    opts.tau_real = solver.tau_real;
    opts.e_cap = solver.e_cap;
    opts.continuum_edge = solver.continuum_edge;
    opts
}

pub fn dense_options(solver: &SolverConfig) -> DenseOptions {
    let mut opts = DenseOptions::with_vectors();
    opts.dense_cap = solver.dense_cap;
    opts
}

/// Raw values of the shared flags, prior to resolution. `None` means "use
/// the default"; the struct equals `default()` exactly when no flag was
/// passed, which is how `--config` enforces its exclusivity.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct RawArgs {
    pub family: Option<String>,
    pub lambda: Option<f64>,
    pub mu: Option<f64>,
    pub lambdatilde: Option<f64>,
    pub g: Option<f64>,
    pub a: Option<f64>,
    pub beta: Option<f64>,
    pub c: Option<f64>,
    pub delta: Option<f64>,
    pub im_sign: Option<f64>,
    pub l: Option<f64>,
    pub n: Option<usize>,
    pub eps: Option<f64>,
    pub stencil: Option<String>,
    pub tau_real: Option<f64>,
    pub e_cap: Option<f64>,
    pub continuum_edge: Option<f64>,
    pub drift: Option<f64>,
    pub dense_cap: Option<usize>,
    pub substeps: Option<usize>,
    pub count: Option<usize>,
    pub pair_cutoff: Option<f64>,
    pub cutoffs: Option<String>,
    pub dt: Option<f64>,
    pub steps: Option<usize>,
    pub packet_center: Option<f64>,
    pub packet_width: Option<f64>,
    pub packet_momentum: Option<f64>,
    pub superpotential: Option<String>,
    pub sweep_parameter: Option<String>,
    pub sweep_from: Option<f64>,
    pub sweep_to: Option<f64>,
    pub sweep_points: Option<usize>,
}

fn apply_param_flag(
    params: &mut BTreeMap<String, f64>,
    family: PotentialFamily,
    slug: &str,
    key: &'static str,
    value: Option<f64>,
) -> Result<(), CliError> {
    if let Some(v) = value {
        if !family_param_names(family).contains(&key) {
            return Err(CliError::Usage(format!(
                "family {slug} has no parameter `{key}`; valid parameters: {}",
                family_param_names(family).join(", ")
            )));
        }
        params.insert(key.to_string(), v);
    }
    Ok(())
}

fn resolve_family(command: &str, args: &RawArgs) -> Result<Option<FamilyConfig>, CliError> {
    if command == "susy" {
        return Ok(None);
    }
    let name = args
        .family
        .clone()
        .unwrap_or_else(|| "poeschl-teller-1".to_string());
    let family = PotentialFamily::from_slug(&name).ok_or_else(|| {
        CliError::Usage(format!(
            "unknown family `{name}`; valid families: {}",
            FAMILY_SLUGS.join(", ")
        ))
    })?;
    let mut params = default_params(family);
    apply_param_flag(&mut params, family, &name, "lambda", args.lambda)?;
    apply_param_flag(&mut params, family, &name, "mu", args.mu)?;
    apply_param_flag(&mut params, family, &name, "g", args.g)?;
    apply_param_flag(&mut params, family, &name, "a", args.a)?;
    apply_param_flag(&mut params, family, &name, "beta", args.beta)?;
    apply_param_flag(&mut params, family, &name, "c", args.c)?;
    apply_param_flag(&mut params, family, &name, "delta", args.delta)?;
    apply_param_flag(&mut params, family, &name, "im_sign", args.im_sign)?;
    if let Some(shape) = args.lambdatilde {
        if !matches!(
            family,
            PotentialFamily::PoeschlTeller1 | PotentialFamily::PoeschlTeller2
        ) {
            return Err(CliError::Usage(format!(
                "--lambdatilde only applies to the poeschl-teller families, not {name}"
            )));
        }
        if args.lambda.is_some() {
            return Err(CliError::Usage(
                "--lambda and --lambdatilde are mutually exclusive".to_string(),
            ));
        }
        let mu = params.get("mu").copied().unwrap_or(1.0);
        params.insert("lambda".to_string(), mu * (shape - 0.5));
    }
    Ok(Some(FamilyConfig { name, params }))
}

fn resolve_superpotential(
    command: &str,
    args: &RawArgs,
) -> Result<Option<SuperpotentialConfig>, CliError> {
    if command != "susy" {
        return Ok(None);
    }
    let name = args
        .superpotential
        .clone()
        .unwrap_or_else(|| "linear".to_string());
    if !SUPERPOTENTIAL_SLUGS.contains(&name.as_str()) {
        return Err(CliError::Usage(format!(
            "unknown superpotential `{name}`; valid names: {}",
            SUPERPOTENTIAL_SLUGS.join(", ")
        )));
    }
    let mut params: BTreeMap<String, f64> = match name.as_str() {
        "inverse-power" | "inverse-power-conjugate" => [("lambda".to_string(), 1.0)].into(),
        "poeschl-teller" => [("mu".to_string(), 1.0), ("lambda".to_string(), 2.5)].into(),
        _ => BTreeMap::new(),
    };
    for (key, value) in [("lambda", args.lambda), ("mu", args.mu)] {
        if let Some(v) = value {
            if !params.contains_key(key) {
                return Err(CliError::Usage(format!(
                    "superpotential {name} has no parameter `{key}`"
                )));
            }
            params.insert(key.to_string(), v);
        }
    }
    Ok(Some(SuperpotentialConfig { name, params }))
}

/// Default grid, stencil and energy windows for a superpotential's partner
/// pair (mirrors [`family_defaults`] for the potential families).
fn superpotential_defaults(cfg: &SuperpotentialConfig) -> (GridConfig, Option<f64>, Option<f64>) {
    match cfg.name.as_str() {
        "linear" => (
            GridConfig {
                l: 10.0,
                n: 2001,
                eps: None,
                stencil: "3pt".to_string(),
            },
            Some(13.0),
            None,
        ),
        "poeschl-teller" => {
            let mu = cfg.params.get("mu").copied().unwrap_or(1.0);
            (
                GridConfig {
                    l: 15.0,
                    n: 1501,
                    eps: None,
                    stencil: "3pt".to_string(),
                },
                None,
                Some(0.25 * mu * mu),
            )
        }
        "shifted-quartic-1" | "shifted-quartic-2" => (
            GridConfig {
                l: 8.0,
                n: 801,
                eps: None,
                stencil: "5pt".to_string(),
            },
            Some(14.0),
            None,
        ),
        // inverse-power and conjugate: half-line partners.
        _ => (
            GridConfig {
                l: 10.0,
                n: 801,
                eps: Some(1e-2),
                stencil: "5pt".to_string(),
            },
            None,
            Some(0.0),
        ),
    }
}

fn resolve_sweep(
    command: &str,
    args: &RawArgs,
    family: &Option<FamilyConfig>,
) -> Result<Option<SweepConfig>, CliError> {
    if command != "sweep" {
        return Ok(None);
    }
    let fam = family.as_ref().expect("sweep always has a family");
    let parameter = args.sweep_parameter.clone().ok_or_else(|| {
        CliError::Usage(format!(
            "sweep requires --parameter; valid parameters for {}: {}",
            fam.name,
            fam.params.keys().cloned().collect::<Vec<_>>().join(", ")
        ))
    })?;
    if !fam.params.contains_key(&parameter) {
        return Err(CliError::Usage(format!(
            "family {} has no parameter `{parameter}`; valid parameters: {}",
            fam.name,
            fam.params.keys().cloned().collect::<Vec<_>>().join(", ")
        )));
    }
    let from = args
        .sweep_from
        .ok_or_else(|| CliError::Usage("sweep requires --from".to_string()))?;
    let to = args
        .sweep_to
        .ok_or_else(|| CliError::Usage("sweep requires --to".to_string()))?;
    let count = args.sweep_points.unwrap_or(5);
    if count == 0 {
        return Err(CliError::Usage("--points must be at least 1".to_string()));
    }
    Ok(Some(SweepConfig {
        parameter,
        from,
        to,
        count,
    }))
}

fn parse_cutoffs(raw: &str) -> Result<Vec<f64>, CliError> {
    raw.split(',')
        .map(|tok| {
            tok.trim().parse::<f64>().map_err(|_| {
                CliError::Usage(format!(
                    "--cutoffs expects comma-separated numbers, got `{tok}`"
                ))
            })
        })
        .collect()
}

/// Resolve raw flags into a complete [`RunConfig`] for `command`.
pub fn resolve(
    command: &str,
    args: &RawArgs,
    output: Option<String>,
) -> Result<RunConfig, CliError> {
    let family = resolve_family(command, args)?;
    let superpotential = resolve_superpotential(command, args)?;

    // Family (or superpotential) defaults for grid and energy windows.
    let (grid_default, e_cap_default, edge_default) = match (&family, &superpotential) {
        (Some(f), _) => {
            let spec = build_potential(f)?;
            let d = family_defaults(&spec)?;
            let (eps, l) = match d.grid.kind() {
                GridKind::HalfLineCutoff { eps } => (Some(eps), d.grid.x_max()),
                GridKind::FullLineBox => (None, d.grid.x_max()),
            };
            (
                GridConfig {
                    l,
                    n: d.grid.n(),
                    eps,
                    stencil: d.stencil.label().to_string(),
                },
                d.classify.e_cap,
                d.classify.continuum_edge,
            )
        }
        (None, Some(w)) => superpotential_defaults(w),
        (None, None) => unreachable!("every command resolves a family or superpotential"),
    };

    let mut grid = grid_default;
    if let Some(l) = args.l {
        grid.l = l;
    }
    if let Some(n) = args.n {
        grid.n = n;
    }
    if let Some(eps) = args.eps {
        grid.eps = Some(eps);
    }
    if let Some(st) = &args.stencil {
        build_stencil(st)?;
        grid.stencil = st.clone();
    }

    let drift_factor = match args.drift {
        None => Some(1.25),
        Some(0.0) => None,
        Some(f) if f > 1.0 => Some(f),
        Some(f) => {
            return Err(CliError::Usage(format!(
                "--drift must be 0 (off) or a factor above 1, got {f}"
            )))
        }
    };

    let method = match command {
        "shoot" => "shooting",
        "propagate" => "crank-nicolson",
        _ => "matrix",
    };

    let solver = SolverConfig {
        method: method.to_string(),
        tau_real: args.tau_real.unwrap_or(1e-4),
        dense_cap: args.dense_cap.unwrap_or(4000),
        e_cap: args.e_cap.or(e_cap_default),
        continuum_edge: args.continuum_edge.or(edge_default),
        drift_factor,
        substeps: args.substeps.unwrap_or(1),
        count: args.count.unwrap_or(8),
        pair_cutoff: args.pair_cutoff.unwrap_or(0.5),
        sweep_cutoffs: match &args.cutoffs {
            Some(raw) => parse_cutoffs(raw)?,
            None => vec![1e-1, 1e-2, 1e-3],
        },
    };

    let packet_center = args.packet_center.unwrap_or(match grid.eps {
        Some(eps) => 0.5 * (eps + grid.l),
        None => 0.0,
    });
    let dynamics = DynamicsConfig {
        dt: args.dt.unwrap_or(1e-3),
        steps: args.steps.unwrap_or(1000),
        packet_center,
        packet_width: args.packet_width.unwrap_or(1.0),
        packet_momentum: args.packet_momentum.unwrap_or(0.0),
    };

    let sweep = resolve_sweep(command, args, &family)?;

    Ok(RunConfig {
        command: command.to_string(),
        family,
        superpotential,
        grid,
        solver,
        dynamics,
        sweep,
        output,
    })
}

/// Load a config file written by a previous run (or by hand).
pub fn load(path: &str, command: &str) -> Result<RunConfig, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Usage(format!("cannot read config {path}: {e}")))?;
    let cfg: RunConfig = serde_json::from_str(&text)
        .map_err(|e| CliError::Usage(format!("config {path} is not valid: {e}")))?;
    if cfg.command != command {
        return Err(CliError::Usage(format!(
            "config {path} is for `{}`, but the `{command}` subcommand was invoked",
            cfg.command
        )));
    }
    Ok(cfg)
}
