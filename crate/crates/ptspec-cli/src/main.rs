//! `ptspec` — spectra, shooting cross-checks, propagation, claim reports,
//! SUSY matching, parameter sweeps and plot tables for 1D Schrödinger
//! operators with complex PT-symmetric potentials.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

mod config;
mod run;

use config::{CliError, RawArgs};

#[derive(Parser)]
#[command(
    name = "ptspec",
    version,
    about = "Bound-state spectra of 1D Schrödinger operators with complex PT-symmetric potentials"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Solve one potential on a Dirichlet box and classify every eigenvalue.
    Spectrum(CommonArgs),
    /// Refine the retained matrix eigenvalues with the shooting engine.
    Shoot(CommonArgs),
    /// Crank–Nicolson propagation of a Gaussian packet with norm diagnostics.
    Propagate(CommonArgs),
    /// Full reality-claim report (JSON): symmetry, well, both spectra, verdict.
    Check(CommonArgs),
    /// SUSY partner isospectrality report (JSON) from a superpotential.
    Susy(SusyArgs),
    /// Scan one family parameter linearly, one spectrum block per value.
    Sweep(SweepArgs),
    /// Tabulate (x, Re V, Im V) over the grid for plotting.
    Plotdata(CommonArgs),
}

#[derive(Args, Clone, Default)]
struct CommonArgs {
    /// Load a fully-resolved JSON config (from a previous run's header)
    /// instead of flags; only --output may be combined with it.
    #[arg(long)]
    config: Option<PathBuf>,

    /// Potential family slug (see `--help` tail for the list).
    #[arg(long)]
    family: Option<String>,
    #[arg(long)]
    lambda: Option<f64>,
    #[arg(long)]
    mu: Option<f64>,
    /// Pöschl–Teller shape parameter λ̃ = 1/2 + λ/μ (alternative to --lambda).
    #[arg(long)]
    lambdatilde: Option<f64>,
    #[arg(long)]
    g: Option<f64>,
    #[arg(long)]
    a: Option<f64>,
    #[arg(long)]
    beta: Option<f64>,
    #[arg(long)]
    c: Option<f64>,
    #[arg(long)]
    delta: Option<f64>,
    /// Sign (+1/-1) of the imaginary term of inverse-power-2.
    #[arg(long = "im-sign")]
    im_sign: Option<f64>,

    /// Box half-width (full line) or right edge (half line).
    #[arg(long = "L")]
    l: Option<f64>,
    /// Total node count, Dirichlet walls included.
    #[arg(long)]
    n: Option<usize>,
    /// Half-line cutoff; picking it selects the half-line grid [eps, L].
    #[arg(long)]
    eps: Option<f64>,
    /// Finite-difference stencil: 3pt or 5pt.
    #[arg(long)]
    stencil: Option<String>,

    /// Base reality tolerance for classification.
    #[arg(long = "tau-real")]
    tau_real: Option<f64>,
    /// Trust ceiling on Re E; higher levels are flagged unbound.
    #[arg(long = "e-cap")]
    e_cap: Option<f64>,
    /// Continuum edge; levels at or above it are flagged unbound.
    #[arg(long = "continuum-edge")]
    continuum_edge: Option<f64>,
    /// Box-enlargement factor for drift scoring (0 disables).
    #[arg(long)]
    drift: Option<f64>,
    /// Size cap for the dense eigensolver.
    #[arg(long = "dense-cap")]
    dense_cap: Option<usize>,
    /// RK4 substeps per grid interval in the shooting engine.
    #[arg(long)]
    substeps: Option<usize>,
    /// How many retained levels `shoot` refines.
    #[arg(long)]
    count: Option<usize>,
    /// Greedy-pairing distance ceiling for `susy`.
    #[arg(long = "pair-cutoff")]
    pair_cutoff: Option<f64>,
    /// Comma-separated ε values for the half-line sweep in `check`.
    #[arg(long)]
    cutoffs: Option<String>,

    /// Propagation time step.
    #[arg(long)]
    dt: Option<f64>,
    /// Propagation step count.
    #[arg(long)]
    steps: Option<usize>,
    #[arg(long = "packet-center")]
    packet_center: Option<f64>,
    #[arg(long = "packet-width")]
    packet_width: Option<f64>,
    #[arg(long = "packet-momentum")]
    packet_momentum: Option<f64>,

    /// Write the artifact here instead of stdout.
    #[arg(long, short = 'o')]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct SusyArgs {
    #[command(flatten)]
    common: CommonArgs,
    /// Superpotential slug: linear, inverse-power, inverse-power-conjugate,
    /// shifted-quartic-1, shifted-quartic-2, poeschl-teller.
    #[arg(long = "w")]
    superpotential: Option<String>,
}

#[derive(Args)]
struct SweepArgs {
    #[command(flatten)]
    common: CommonArgs,
    /// Family parameter to vary.
    #[arg(long)]
    parameter: Option<String>,
    /// First parameter value.
    #[arg(long)]
    from: Option<f64>,
    /// Last parameter value.
    #[arg(long)]
    to: Option<f64>,
    /// Number of linearly spaced sweep points.
    #[arg(long)]
    points: Option<usize>,
}

fn to_raw(common: &CommonArgs) -> RawArgs {
    RawArgs {
        family: common.family.clone(),
        lambda: common.lambda,
        mu: common.mu,
        lambdatilde: common.lambdatilde,
        g: common.g,
        a: common.a,
        beta: common.beta,
        c: common.c,
        delta: common.delta,
        im_sign: common.im_sign,
        l: common.l,
        n: common.n,
        eps: common.eps,
        stencil: common.stencil.clone(),
        tau_real: common.tau_real,
        e_cap: common.e_cap,
        continuum_edge: common.continuum_edge,
        drift: common.drift,
        dense_cap: common.dense_cap,
        substeps: common.substeps,
        count: common.count,
        pair_cutoff: common.pair_cutoff,
        cutoffs: common.cutoffs.clone(),
        dt: common.dt,
        steps: common.steps,
        packet_center: common.packet_center,
        packet_width: common.packet_width,
        packet_momentum: common.packet_momentum,
        superpotential: None,
        sweep_parameter: None,
        sweep_from: None,
        sweep_to: None,
        sweep_points: None,
    }
}

fn dispatch(command: &str, common: &CommonArgs, raw: RawArgs) -> Result<(), CliError> {
    let output = common
        .output
        .as_ref()
        .map(|p| p.to_string_lossy().into_owned());
    let cfg = match &common.config {
        Some(path) => {
            if raw != RawArgs::default() {
                return Err(CliError::Usage(
                    "--config replaces all other flags (only --output may accompany it)"
                        .to_string(),
                ));
            }
            let mut cfg = config::load(&path.to_string_lossy(), command)?;
            if output.is_some() {
                cfg.output = output;
            }
            cfg
        }
        None => config::resolve(command, &raw, output)?,
    };

    let emission = run::execute(&cfg)?;
    match &cfg.output {
        Some(path) => {
            std::fs::write(path, &emission.body)?;
            println!("{} -> {}", emission.summary, path);
        }
        None => {
            print!("{}", emission.body);
            eprintln!("{}", emission.summary);
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Spectrum(c) => dispatch("spectrum", c, to_raw(c)),
        Command::Shoot(c) => dispatch("shoot", c, to_raw(c)),
        Command::Propagate(c) => dispatch("propagate", c, to_raw(c)),
        Command::Check(c) => dispatch("check", c, to_raw(c)),
        Command::Susy(args) => {
            let mut raw = to_raw(&args.common);
            raw.superpotential = args.superpotential.clone();
            dispatch("susy", &args.common, raw)
        }
        Command::Sweep(args) => {
            let mut raw = to_raw(&args.common);
            raw.sweep_parameter = args.parameter.clone();
            raw.sweep_from = args.from;
            raw.sweep_to = args.to;
            raw.sweep_points = args.points;
            dispatch("sweep", &args.common, raw)
        }
        Command::Plotdata(c) => dispatch("plotdata", c, to_raw(c)),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {}", err.message());
            ExitCode::from(err.exit_code() as u8)
        }
    }
}
