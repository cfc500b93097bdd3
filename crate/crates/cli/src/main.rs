mod config;
mod converge;
mod limits;
mod output;
mod simulate;
mod verify;

use std::process::ExitCode;

use clap::{Parser, Subcommand};
use thiserror::Error;

/// Failures, each mapped to a stable exit code.
#[derive(Debug, Error)]
pub enum CliError {
    #[error("config error: {0}")]
    Config(String),
    #[error("i/o error: {0}")]
    Io(String),
    #[error("verification failed: {0}")]
    Verification(String),
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::Config(_) => 1,
            CliError::Io(_) => 2,
            CliError::Verification(_) => 3,
        }
    }
}

impl From<rrtlab_core::Error> for CliError {
    fn from(e: rrtlab_core::Error) -> Self {
        match e {
            rrtlab_core::Error::Verification(m) => CliError::Verification(m),
            other => CliError::Config(other.to_string()),
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "rrtlab", version, about = "Random recursive trees and Kingman's coalescent")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
#[allow(clippy::large_enum_variant)]
enum Command {
    /// Grow trees or run coalescents and stream per-replicate observables.
    Simulate(simulate::SimulateArgs),
    /// Check the exact small-size identities by enumeration.
    Verify(verify::VerifyArgs),
    /// Run a convergence experiment and report goodness of fit.
    Converge(converge::ConvergeArgs),
    /// Print limiting constants and laws.
    Limits(limits::LimitsArgs),
}

fn set_threads(threads: Option<usize>) -> Result<(), CliError> {
    if let Some(t) = threads {
        if t == 0 {
            return Err(CliError::Config("threads must be positive".into()));
        }
        rayon::ThreadPoolBuilder::new().num_threads(t).build_global().map_err(|e| CliError::Config(e.to_string()))?;
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Simulate(a) => simulate::run(a),
        Command::Verify(a) => verify::run(a),
        Command::Converge(a) => converge::run(a),
        Command::Limits(a) => limits::run(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("rrtlab: {e}");
            ExitCode::from(e.code())
        }
    }
}
