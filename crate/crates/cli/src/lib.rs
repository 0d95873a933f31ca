//! Command-line front end: parameter tables, verification suites, burst
//! simulations and permutation export.
//!
//! Exit codes: `0` success, `1` a check failed or I/O failed, `2` usage error.

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

pub mod commands;
pub mod format;

use format::OutputFormat;

/// Seed used when `--seed` is not given.
pub const DEFAULT_SEED: u64 = 0;

#[derive(Debug, Parser)]
#[command(
    name = "lee-toric",
    version,
    about = "Toric quantum codes from perfect Lee codes, with burst-error interleaving"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Toric-code and interleaved-code parameters for one dimension.
    Params(ParamsArgs),
    /// Run the construction checks (determinant, packing, distances, bijections).
    Verify(VerifyArgs),
    /// Reproduce the rate/gain tables, with published values where available.
    Tables(TablesArgs),
    /// Monte Carlo burst-error simulation through the deinterleaver.
    Simulate(SimulateArgs),
    /// Stream the interleaving permutation to a file.
    ExportMap(ExportArgs),
}

#[derive(Debug, Args)]
pub struct OutputArgs {
    #[arg(long, value_enum, default_value_t = OutputFormat::Text)]
    pub format: OutputFormat,
    /// Write to this file instead of stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Decimal digits for rational values.
    #[arg(long, default_value_t = 5)]
    pub precision: u32,
}

#[derive(Debug, Args)]
pub struct ParamsArgs {
    #[arg(long)]
    pub n: usize,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum VerifyMode {
    Exhaustive,
    Sampled,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[arg(long)]
    pub n: usize,
    #[arg(long, value_enum, default_value_t = VerifyMode::Sampled)]
    pub mode: VerifyMode,
    /// Sample count for sampled sweeps.
    #[arg(long, default_value_t = 1_000_000)]
    pub samples: u64,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    pub seed: u64,
    /// Include per-check wall time in JSON output.
    #[arg(long)]
    pub timing: bool,
    /// Perturb generator v2 before checking (exercises the failure path).
    #[arg(long, hide = true)]
    pub corrupt_generator: bool,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct TablesArgs {
    /// Dimensions to tabulate.
    #[arg(long, value_delimiter = ',', default_values_t = [5usize, 6, 7, 8])]
    pub rows: Vec<usize>,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    #[arg(long)]
    pub n: usize,
    /// aligned | translate | multi-translate | uniform-random
    #[arg(long)]
    pub model: String,
    /// Error count for `uniform-random`.
    #[arg(long)]
    pub count: Option<u64>,
    #[arg(long, default_value_t = 1000)]
    pub trials: u64,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    pub seed: u64,
    /// Exit with status 1 unless every trial was corrected.
    #[arg(long)]
    pub expect_perfect: bool,
    /// Worker threads (default: all cores). Results do not depend on it.
    #[arg(long)]
    pub threads: Option<usize>,
    /// Include wall time in JSON output.
    #[arg(long)]
    pub timing: bool,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MapFormat {
    Csv,
    Binary,
}

#[derive(Debug, Args)]
pub struct ExportArgs {
    #[arg(long)]
    pub n: usize,
    #[arg(long)]
    pub out: PathBuf,
    #[arg(long, value_enum, default_value_t = MapFormat::Csv)]
    pub format: MapFormat,
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Check(String),
    #[error("i/o error: {0}")]
    Io(#[from] io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Check(_) | CliError::Io(_) => 1,
        }
    }
}

impl From<lee_toric::Error> for CliError {
    fn from(e: lee_toric::Error) -> Self {
        CliError::Usage(e.to_string())
    }
}

/// Rendered command output plus whether the command's checks passed.
pub struct Report {
    pub body: String,
    pub passed: bool,
    pub failure: Option<String>,
}

impl Report {
    pub fn ok(body: String) -> Self {
        Report { body, passed: true, failure: None }
    }
}

pub fn emit(output: &OutputArgs, body: &str) -> Result<(), CliError> {
    match &output.out {
        Some(path) => {
            let mut w = BufWriter::new(File::create(path)?);
            w.write_all(body.as_bytes())?;
            w.flush()?;
        }
        None => {
            let stdout = io::stdout();
            let mut lock = stdout.lock();
            lock.write_all(body.as_bytes())?;
            lock.flush()?;
        }
    }
    Ok(())
}

pub fn run(cli: Cli) -> Result<(), CliError> {
    let (report, output) = match &cli.command {
        Command::Params(a) => (commands::params::run(a)?, &a.output),
        Command::Verify(a) => (commands::verify::run(a)?, &a.output),
        Command::Tables(a) => (commands::tables::run(a)?, &a.output),
        Command::Simulate(a) => (commands::simulate::run(a)?, &a.output),
        Command::ExportMap(a) => return commands::export::run(a),
    };
    emit(output, &report.body)?;
    if report.passed {
        Ok(())
    } else {
        Err(CliError::Check(report.failure.unwrap_or_else(|| "check failed".into())))
    }
}
