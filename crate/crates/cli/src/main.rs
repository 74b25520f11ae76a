//! `frontlab`: simulation runs, oracle consistency sweeps, analysis tables
//! and verification suites.
//!
//! Exit codes: 0 success, 1 usage or configuration error, 2 numerical
//! abort, 3 verification failure.

mod analyze;
mod output;
mod run;
mod verify;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use frontlab::FrontError;

#[derive(Debug, Parser)]
#[command(name = "frontlab", version, about = "Sharp fronts in the generalized SQG family")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Integrate the cubic front equation from a JSON config.
    Simulate {
        config: PathBuf,
        /// Write the manifest and stop before integrating.
        #[arg(long)]
        dry_run: bool,
        /// Override `output_dir` from the config.
        #[arg(long)]
        output_dir: Option<PathBuf>,
    },
    /// Compare the cubic equation with the full contour equation over an
    /// amplitude sweep.
    Consistency {
        config: PathBuf,
        #[arg(long)]
        output_dir: Option<PathBuf>,
    },
    /// Closed-form and semi-analytic quantities.
    Analyze {
        #[command(subcommand)]
        what: analyze::Analysis,
    },
    /// Bound and conservation checks.
    Verify {
        #[command(subcommand)]
        suite: verify::Suite,
    },
}

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Numerical(String),
    Verification(String),
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 1,
            CliError::Numerical(_) => 2,
            CliError::Verification(_) => 3,
        }
    }

    fn message(&self) -> &str {
        match self {
            CliError::Usage(m) | CliError::Numerical(m) | CliError::Verification(m) => m,
        }
    }
}

impl From<FrontError> for CliError {
    fn from(e: FrontError) -> Self {
        match e {
            FrontError::NumericalAbort { .. } => CliError::Numerical(e.to_string()),
            other => CliError::Usage(other.to_string()),
        }
    }
}

pub type CliResult<T> = Result<T, CliError>;

/// Sizes the global rayon pool from `FRONTLAB_THREADS`.
fn configure_threads() -> CliResult<()> {
    let Ok(raw) = std::env::var("FRONTLAB_THREADS") else {
        return Ok(());
    };
    let n: usize = raw
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| CliError::Usage(format!("FRONTLAB_THREADS = {raw:?} is not a positive integer")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| CliError::Usage(format!("thread pool: {e}")))
}

fn dispatch(cli: Cli) -> CliResult<()> {
    configure_threads()?;
    match cli.command {
        Command::Simulate {
            config,
            dry_run,
            output_dir,
        } => run::simulate(&config, dry_run, output_dir),
        Command::Consistency { config, output_dir } => run::consistency(&config, output_dir),
        Command::Analyze { what } => analyze::run(what),
        Command::Verify { suite } => verify::run(suite),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match dispatch(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {}", e.message());
            ExitCode::from(e.code())
        }
    }
}
