//! Command-line entry point for the multi-site radar simulation toolkit.
//!
//! Three subcommands: `simulate` writes a side-by-side trajectory CSV for one
//! seeded scene, `montecarlo` runs the configured trial sweep, and `report`
//! prints an RMSE summary table from previous run outputs.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use vsatrack::montecarlo::{presets, ExperimentConfig};

mod config;
mod output;

/// Exit codes: 1 config/schema, 2 data/manifest, 3 I/O.
#[derive(Debug)]
pub enum CliError {
    Parse(String),
    Schema(String),
    Data(String),
    Io(String),
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Parse(m) => write!(f, "parse error: {m}"),
            CliError::Schema(m) => write!(f, "schema error: {m}"),
            CliError::Data(m) => write!(f, "data error: {m}"),
            CliError::Io(m) => write!(f, "io error: {m}"),
        }
    }
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Parse(_) | CliError::Schema(_) => 1,
            CliError::Data(_) => 2,
            CliError::Io(_) => 3,
        }
    }
}

#[derive(Parser)]
#[command(
    name = "vsatrack",
    version,
    about = "Multi-site FMCW radar positioning and tracking simulator"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct RunArgs {
    /// JSON configuration file.
    #[arg(long, value_name = "PATH")]
    config: Option<PathBuf>,
    /// Named preset (fig5, fig6a..fig6e, table1-rhombus/circle/star).
    #[arg(long, value_name = "NAME")]
    preset: Option<String>,
    /// Overrides the configured base seed.
    #[arg(long, value_name = "U64")]
    seed: Option<u64>,
    /// Output directory.
    #[arg(long, value_name = "DIR", default_value = "runs/out")]
    out: PathBuf,
    /// Overrides the configured trial count.
    #[arg(long, value_name = "N")]
    trials: Option<usize>,
    /// Worker threads (falls back to VSA_RADAR_JOBS, then all cores).
    #[arg(long, value_name = "N")]
    jobs: Option<usize>,
    /// Also write the pooled per-frame error CDF.
    #[arg(long)]
    emit_cdf: bool,
}

#[derive(Subcommand)]
enum Command {
    /// One seeded scene through trilateration, the EKF baseline, and the VSA
    /// tracker; writes trajectory.csv.
    Simulate(RunArgs),
    /// Monte Carlo trials over the configured methods and sweep axis; writes
    /// sweep.csv.
    Montecarlo(RunArgs),
    /// Summary RMSE table from one or more run directories.
    Report {
        /// Run directories containing manifest.json.
        dirs: Vec<PathBuf>,
    },
}

fn load_config(args: &RunArgs) -> Result<ExperimentConfig, CliError> {
    let mut config = match (&args.config, &args.preset) {
        (Some(path), None) => config::parse_config(path)?,
        (None, Some(name)) => presets::by_name(name).ok_or_else(|| {
            CliError::Schema(format!(
                "unknown preset \"{name}\"; available: {}",
                presets::NAMES.join(", ")
            ))
        })?,
        (Some(_), Some(_)) => {
            return Err(CliError::Schema(
                "--config and --preset are mutually exclusive".into(),
            ))
        }
        (None, None) => {
            return Err(CliError::Schema(
                "either --config or --preset is required".into(),
            ))
        }
    };
    if let Some(seed) = args.seed {
        config.base_seed = seed;
    }
    if let Some(trials) = args.trials {
        config.n_trials = trials;
    }
    config
        .validated()
        .map_err(|e| CliError::Schema(e.to_string()))
}

fn worker_count(args: &RunArgs) -> Option<usize> {
    args.jobs.or_else(|| {
        std::env::var("VSA_RADAR_JOBS")
            .ok()
            .and_then(|v| v.parse().ok())
    })
}

fn with_pool<T>(jobs: Option<usize>, run: impl FnOnce() -> T + Send) -> T
where
    T: Send,
{
    match jobs {
        Some(n) if n > 0 => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .expect("thread pool")
            .install(run),
        _ => run(),
    }
}

fn run() -> Result<(), CliError> {
    let cli = Cli::parse();
    match cli.command {
        Command::Simulate(args) => {
            let config = load_config(&args)?;
            let jobs = worker_count(&args);
            with_pool(jobs, || output::cmd_simulate(&config, &args.out))?;
            println!("wrote {}", args.out.join("trajectory.csv").display());
            Ok(())
        }
        Command::Montecarlo(args) => {
            let config = load_config(&args)?;
            let jobs = worker_count(&args);
            with_pool(jobs, || {
                output::cmd_montecarlo(&config, &args.out, args.emit_cdf)
            })?;
            println!("wrote {}", args.out.join("sweep.csv").display());
            Ok(())
        }
        Command::Report { dirs } => output::cmd_report(&dirs),
    }
}

fn main() -> ExitCode {
    match run() {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("{err}");
            ExitCode::from(err.exit_code())
        }
    }
}
