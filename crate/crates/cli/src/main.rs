//! `qcapax`: capacities and dynamical maps of phase-covariant qubit channels.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

mod commands;
mod format;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use qcapax_core::Error;

#[derive(Parser, Debug)]
#[command(
    name = "qcapax",
    version,
    about = "Classical capacities of phase-covariant qubit channels and their dynamics"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Capacity bounds and structure of a single channel.
    Capacity(CapacityArgs),
    /// Capacities along a GADC trajectory λ(t) as CSV or JSON.
    Trajectory(TrajectoryArgs),
    /// Build a memory kernel from a JSON recipe and optionally solve it.
    Kernel(KernelArgs),
    /// Compare capacity formulas against brute-force oracles on a grid.
    Verify(VerifyArgs),
    /// Time windows where χ of the GADC exceeds C_E of the unital map.
    Cross(CrossArgs),
    /// Compare map, generator and kernel mixtures of the extreme GADC maps.
    Mixcheck(MixcheckArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Method {
    Formula,
    Oracle,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ReportFormat {
    Text,
    Json,
}

#[derive(Args, Debug)]
pub struct CapacityArgs {
    /// GADC damping parameter λ (use with --p).
    #[arg(long, conflicts_with_all = ["lambda1", "lambda3", "lambda_star"])]
    pub lambda: Option<f64>,
    /// GADC non-unitality parameter p.
    #[arg(long, requires = "lambda", allow_hyphen_values = true)]
    pub p: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub lambda1: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub lambda3: Option<f64>,
    #[arg(long = "lambda-star", allow_hyphen_values = true)]
    pub lambda_star: Option<f64>,
    #[arg(long, value_enum, default_value_t = Method::Formula)]
    pub method: Method,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Ensemble size cap for the χ oracle.
    #[arg(long, default_value_t = qcapax_core::oracle::DEFAULT_MAX_STATES)]
    pub max_states: usize,
    #[arg(long, value_enum, default_value_t = ReportFormat::Text)]
    pub format: ReportFormat,
}

/// Profile and sweep settings shared by the time-dependent commands.
#[derive(Args, Debug, Clone)]
pub struct RunConfig {
    /// `exp` for e^{−t}, `cos` for cos t, or a path to a `t,lambda` CSV on a uniform grid.
    #[arg(long, default_value = "exp")]
    pub profile: String,
    #[arg(long, default_value_t = 1.0, allow_hyphen_values = true)]
    pub p: f64,
    #[arg(long = "t-max", default_value_t = 10.0)]
    pub t_max: f64,
    #[arg(long, default_value_t = 1e-3)]
    pub dt: f64,
}

#[derive(Args, Debug)]
pub struct TrajectoryArgs {
    #[command(flatten)]
    pub run: RunConfig,
    #[arg(long, default_value_t = 501)]
    pub steps: usize,
    #[arg(long, short)]
    pub output: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = OutputFormat::Csv)]
    pub format: OutputFormat,
}

#[derive(Args, Debug)]
pub struct KernelArgs {
    /// JSON recipe file, or `-` for stdin.
    pub recipe: PathBuf,
    /// Solve the kernel equation and emit the trajectories.
    #[arg(long)]
    pub solve: bool,
    #[arg(long = "t-max", default_value_t = 10.0)]
    pub t_max: f64,
    #[arg(long, default_value_t = 1e-3)]
    pub dt: f64,
    /// Keep every n-th solver step in the output.
    #[arg(long, default_value_t = 1)]
    pub stride: usize,
    #[arg(long, short)]
    pub output: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct VerifyArgs {
    /// Grid points `lambda:p`, comma separated. Defaults to λ ∈ {0.1..0.9} × p ∈ {0, 1/3, 2/3, 1}.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub grid: Vec<String>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = qcapax_core::oracle::DEFAULT_MAX_STATES)]
    pub max_states: usize,
    #[arg(long, short)]
    pub output: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = OutputFormat::Csv)]
    pub format: OutputFormat,
}

#[derive(Args, Debug)]
pub struct CrossArgs {
    #[command(flatten)]
    pub run: RunConfig,
}

#[derive(Args, Debug)]
pub struct MixcheckArgs {
    #[command(flatten)]
    pub run: RunConfig,
}

/// Failure modes mapped onto exit codes.
#[derive(Debug)]
pub enum CliError {
    /// Bad flags, parameters or shapes: exit 2.
    Invalid(String),
    /// Numerical or I/O failure, or a failed verification: exit 1.
    Runtime(String),
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::NonFinite { .. }
            | Error::OutOfRange { .. }
            | Error::InvalidChannel { .. }
            | Error::InvalidState(_)
            | Error::BadWeights(_)
            | Error::LengthMismatch(..)
            | Error::Ordering(_)
            | Error::NotGadc(_)
            | Error::Recipe(_) => CliError::Invalid(e.to_string()),
            _ => CliError::Runtime(e.to_string()),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Runtime(e.to_string())
    }
}

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> Self {
        CliError::Runtime(e.to_string())
    }
}

fn configure_threads() -> Result<(), CliError> {
    let Ok(raw) = std::env::var("QCAPAX_THREADS") else {
        return Ok(());
    };
    let n: usize = raw.trim().parse().map_err(|_| {
        CliError::Invalid(format!(
            "QCAPAX_THREADS must be a non-negative integer, got {raw:?}"
        ))
    })?;
    if n > 0 {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| CliError::Runtime(e.to_string()))?;
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = configure_threads().and_then(|()| match cli.command {
        Command::Capacity(a) => commands::capacity(&a),
        Command::Trajectory(a) => commands::trajectory(&a),
        Command::Kernel(a) => commands::kernel(&a),
        Command::Verify(a) => commands::verify(&a),
        Command::Cross(a) => commands::cross(&a),
        Command::Mixcheck(a) => commands::mixcheck(&a),
    });
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(CliError::Invalid(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(CliError::Runtime(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}
