//! `esqpt-lab`: one entry point for every computation of the lab.
//!
//! Each subcommand writes CSV files (first line `# esqpt-lab v1 config=<hash>`)
//! into `--out` through temp-file-and-rename, plus a
//! `<command>.manifest.json` with the full configuration and wall time.
//! Exit status is 0 on success, 2 for configuration errors and 1 for
//! failures during computation.

use std::ffi::OsString;
use std::path::PathBuf;
use std::time::Instant;

use clap::{ArgGroup, Args, Parser, Subcommand};
use esqpt_core::Exec;
use serde_json::json;

pub mod commands;
pub mod config;
pub mod output;
mod validate;

use config::{ParamArgs, RunConfig};
use output::OutputDir;

#[derive(Debug, Clone, PartialEq)]
pub enum Failure {
    /// Bad flags, config file or parameters.
    Config(String),
    /// Anything that goes wrong once computing has started.
    Compute(String),
}

impl From<esqpt_core::Error> for Failure {
    fn from(e: esqpt_core::Error) -> Self {
        Failure::Compute(e.to_string())
    }
}

impl Failure {
    pub fn exit_code(&self) -> i32 {
        match self {
            Failure::Config(_) => 2,
            Failure::Compute(_) => 1,
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "esqpt-lab", version, about = "Semiclassical and exact spectra of the Dicke and Tavis-Cummings models")]
pub struct Cli {
    #[command(flatten)]
    pub params: ParamArgs,
    /// Output directory.
    #[arg(long, env = "ESQPT_OUT", default_value = "esqpt-out", global = true)]
    pub out: PathBuf,
    /// Worker threads; 1 runs every loop sequentially.
    #[arg(long, env = "ESQPT_THREADS", global = true)]
    pub threads: Option<usize>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Classical stationary points with their stability.
    FixedPoints,
    /// Energy surface over the pseudo-spin sphere, for contour plots.
    EnergySurface(SurfaceArgs),
    /// Classical ground energy as a function of the coupling.
    GroundEnergy(GroundArgs),
    /// Density of states: semiclassical curve, Monte-Carlo bins or binned
    /// quantum spectrum.
    Dos(DosArgs),
    /// Quantum spectrum of the chosen model.
    Spectrum(SpectrumArgs),
    /// Binned quantum density against the semiclassical curve.
    Compare(CompareArgs),
    /// Run the oracle checks and print a pass/fail table.
    Validate(ValidateArgs),
    /// Data bundles fig1..fig5 at the reference parameters.
    ReproduceAll(ReproduceArgs),
}

#[derive(Debug, Clone, Args)]
pub struct SurfaceArgs {
    #[arg(long, default_value_t = 101)]
    pub n_theta: usize,
    #[arg(long, default_value_t = 128)]
    pub n_phi: usize,
}

#[derive(Debug, Clone, Args)]
pub struct GroundArgs {
    /// Couplings `γ/γc` as lo:hi:n.
    #[arg(long, default_value = "0:3:301", allow_hyphen_values = true)]
    pub ratios: String,
}

#[derive(Debug, Clone, Args)]
pub struct QuantumArgs {
    /// Scaled energy up to which the spectrum must be complete
    /// (default 3 for tc, 1.2 for dicke).
    #[arg(long, allow_hyphen_values = true)]
    pub eps_ref: Option<f64>,
    /// Fixed number of excitation blocks for tc (default: doubled until complete).
    #[arg(long)]
    pub lambda_max: Option<u32>,
    /// First photon truncation tried for dicke.
    #[arg(long, default_value_t = 20)]
    pub nmax_start: usize,
    /// Largest truncation-edge weight accepted for a dicke state.
    #[arg(long, env = "ESQPT_TOLERANCE", default_value_t = esqpt_core::dicke::DEFAULT_TOLERANCE)]
    pub tolerance: f64,
    /// Largest dicke basis dimension attempted.
    #[arg(long, default_value_t = esqpt_core::dicke::DEFAULT_DIMENSION_LIMIT)]
    pub dimension_limit: usize,
}

#[derive(Debug, Clone, Args)]
pub struct WindowArgs {
    /// Levels per averaging window (default 600 for tc, 20 for dicke).
    #[arg(long)]
    pub window: Option<usize>,
    /// Overlapping windows; smoother, not used for comparisons by default.
    #[arg(long)]
    pub sliding: bool,
}

#[derive(Debug, Clone, Args)]
#[command(group(ArgGroup::new("mode").required(true).args(["semiclassical", "mc", "quantum"])))]
pub struct DosArgs {
    #[arg(long)]
    pub semiclassical: bool,
    #[arg(long)]
    pub mc: bool,
    #[arg(long)]
    pub quantum: bool,
    /// Energy grid lo:hi:n (Monte Carlo: n bins).
    #[arg(long, allow_hyphen_values = true)]
    pub grid: Option<String>,
    /// Finite-difference step for the Dicke derivative.
    #[arg(long, default_value_t = esqpt_core::dos::DEFAULT_DERIVATIVE_STEP)]
    pub h: f64,
    #[arg(long, env = "ESQPT_SEED", default_value_t = 1)]
    pub seed: u64,
    #[arg(long, default_value_t = 1_000_000)]
    pub samples: usize,
    #[command(flatten)]
    pub window: WindowArgs,
    #[command(flatten)]
    pub quantum_args: QuantumArgs,
}

#[derive(Debug, Clone, Args)]
pub struct SpectrumArgs {
    #[command(flatten)]
    pub quantum: QuantumArgs,
    /// Also write the dicke eigenvector coefficients (states.csv).
    #[arg(long)]
    pub dump_states: bool,
}

#[derive(Debug, Clone, Args)]
pub struct CompareArgs {
    #[command(flatten)]
    pub quantum: QuantumArgs,
    #[command(flatten)]
    pub window: WindowArgs,
    /// Half-width of the excluded zones around ε = ±1.
    #[arg(long, default_value_t = esqpt_core::analysis::DEFAULT_EXCLUSION)]
    pub exclusion: f64,
}

#[derive(Debug, Clone, Args)]
pub struct ValidateArgs {
    #[arg(long, env = "ESQPT_SEED", default_value_t = 20_240_917)]
    pub seed: u64,
}

#[derive(Debug, Clone, Args)]
pub struct ReproduceArgs {
    /// Atom number for the Tavis-Cummings bundles.
    #[arg(long, default_value_t = 200)]
    pub tc_j2: u32,
    /// Atom number for the Dicke bundle.
    #[arg(long, default_value_t = 80)]
    pub dicke_j2: u32,
    /// Leave out the Dicke spectra (the slow part).
    #[arg(long)]
    pub skip_dicke: bool,
    #[arg(long, default_value_t = 40)]
    pub nmax_start: usize,
    #[arg(long, env = "ESQPT_SEED", default_value_t = 1)]
    pub seed: u64,
}

fn setup_exec(threads: Option<usize>) -> Result<Exec, Failure> {
    match threads {
        Some(0) => Err(Failure::Config("--threads must be at least 1".into())),
        Some(1) => Ok(Exec::Sequential),
        Some(n) => {
            #[cfg(feature = "parallel")]
            if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
                log::warn!("thread pool already configured: {e}");
            }
            #[cfg(not(feature = "parallel"))]
            log::warn!("built without the parallel feature; ignoring --threads {n}");
            Ok(Exec::Parallel)
        }
        None => Ok(Exec::default()),
    }
}

fn execute(cli: Cli) -> Result<(), Failure> {
    let exec = setup_exec(cli.threads)?;
    let start = Instant::now();
    let mut out = OutputDir::create(&cli.out)?;
    let name = match &cli.command {
        Command::FixedPoints => "fixed-points",
        Command::EnergySurface(_) => "energy-surface",
        Command::GroundEnergy(_) => "ground-energy",
        Command::Dos(_) => "dos",
        Command::Spectrum(_) => "spectrum",
        Command::Compare(_) => "compare",
        Command::Validate(_) => "validate",
        Command::ReproduceAll(_) => "reproduce-all",
    };
    let needs_params = !matches!(cli.command, Command::Validate(_) | Command::ReproduceAll(_));
    let params = if needs_params { Some(cli.params.resolve()?) } else { None };
    let p = params.as_ref();
    let (cfg, summary): (RunConfig, serde_json::Value) = match &cli.command {
        Command::FixedPoints => commands::fixed_points(p.unwrap(), &mut out)?,
        Command::EnergySurface(a) => commands::energy_surface(p.unwrap(), a, exec, &mut out)?,
        Command::GroundEnergy(a) => commands::ground_energy(p.unwrap(), a, &mut out)?,
        Command::Dos(a) => commands::dos(p.unwrap(), a, exec, &mut out)?,
        Command::Spectrum(a) => commands::spectrum(p.unwrap(), a, exec, &mut out)?,
        Command::Compare(a) => commands::compare(p.unwrap(), a, exec, &mut out)?,
        Command::Validate(a) => validate::run(a, exec, &mut out)?,
        Command::ReproduceAll(a) => commands::reproduce_all(a, exec, &mut out)?,
    };
    let failed = summary.get("failed").and_then(|v| v.as_u64()).unwrap_or(0);
    let manifest = json!({
        "tool": "esqpt-lab",
        "version": env!("CARGO_PKG_VERSION"),
        "config": cfg.to_json(),
        "config_hash": cfg.hash(),
        "outputs": out.written(),
        "summary": summary,
        "threads": cli.threads,
        "parallel": exec.is_parallel(),
        "wall_time_s": start.elapsed().as_secs_f64(),
    });
    out.json(&format!("{name}.manifest.json"), &manifest)?;
    if failed > 0 {
        return Err(Failure::Compute(format!("{failed} validation checks failed")));
    }
    Ok(())
}

/// Parses `argv`, runs the subcommand and returns the process exit code.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    let _ = env_logger::Builder::from_env(env_logger::Env::default().filter_or("ESQPT_LOG", "info"))
        .format_timestamp(None)
        .try_init();
    match execute(cli) {
        Ok(()) => 0,
        Err(f) => {
            match &f {
                Failure::Config(m) => eprintln!("configuration error: {m}"),
                Failure::Compute(m) => eprintln!("error: {m}"),
            }
            f.exit_code()
        }
    }
}
