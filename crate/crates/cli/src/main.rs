//! `pvfilter`: tables and verification reports for the regularisation library.
//!
//! Exit codes: 0 success, 1 verification failure, 2 input or configuration
//! error.

mod commands;
mod config;

use std::fs;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use config::RunConfig;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("config error: {0}")]
    Config(String),
    #[error(transparent)]
    Library(#[from] pvfilter::Error),
    #[error("{0}")]
    Io(String),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Library(pvfilter::Error::OracleMismatch { .. })
            | CliError::Library(pvfilter::Error::QuadratureFailure { .. }) => 1,
            _ => 2,
        }
    }
}

/// Text produced by a command and the exit code it calls for. A failed
/// check or a bad input row still produces the table.
pub struct Outcome {
    pub output: String,
    pub code: u8,
}

impl Outcome {
    pub fn checked(output: String, passed: bool) -> Self {
        Self {
            output,
            code: if passed { 0 } else { 1 },
        }
    }
}

#[derive(Parser)]
#[command(name = "pvfilter", version, about = "Pauli-Villars filter algebra, propagators and checks")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Common {
    /// Configuration file of key = value lines.
    #[arg(long, value_name = "PATH")]
    config: Option<PathBuf>,
    /// Write the table or report here instead of stdout.
    #[arg(long, value_name = "PATH")]
    out: Option<PathBuf>,
    /// Tolerance override; also settable as `tol` in the config.
    #[arg(long, value_name = "X")]
    tol: Option<f64>,
    /// Extra configuration entries, applied after the file.
    #[arg(value_name = "KEY=VALUE")]
    overrides: Vec<String>,
}

#[derive(Subcommand)]
enum Command {
    /// Partial-fraction coefficients, signs and weights of a mass ladder.
    Decompose(Common),
    /// Time-domain propagator G^(0,N)(tau) on a contour, as CSV.
    Prop {
        #[command(flatten)]
        common: Common,
        /// Cross-check every row against direct numerical integration.
        #[arg(long)]
        oracle: bool,
    },
    /// Linear response of the toy filter against the Kubo commutator.
    Respond(Common),
    /// Born series of the in/out vacuum amplitude.
    Born(Common),
    /// Superficial degrees and minimal regulator counts of diagrams.
    Count(Common),
    /// Gamma-matrix checks of the regularised fermion filter.
    DiracVerify(Common),
    /// The full invariant suite.
    Verify {
        #[command(flatten)]
        common: Common,
        /// Run a single module's checks.
        #[arg(long, value_name = "NAME")]
        only: Option<String>,
    },
}

fn load(common: &Common) -> Result<RunConfig, CliError> {
    let text = match &common.config {
        Some(path) => fs::read_to_string(path)
            .map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?,
        None => String::new(),
    };
    let mut cfg = RunConfig::parse(&text, &common.overrides)?;
    if let Some(tol) = common.tol {
        cfg.tol = Some(tol);
    }
    if let Some(tol) = cfg.tol {
        if !(tol > 0.0 && tol.is_finite()) {
            return Err(CliError::Config(format!("tol must be positive, got {tol}")));
        }
    }
    Ok(cfg)
}

fn dispatch(command: &Command) -> Result<(Outcome, Option<PathBuf>), CliError> {
    let (common, outcome) = match command {
        Command::Decompose(c) => (c, commands::decompose(&load(c)?)?),
        Command::Prop { common, oracle } => (common, commands::prop(&load(common)?, *oracle)?),
        Command::Respond(c) => (c, commands::respond(&load(c)?)?),
        Command::Born(c) => (c, commands::born(&load(c)?)?),
        Command::Count(c) => (c, commands::count(&load(c)?)?),
        Command::DiracVerify(c) => (c, commands::verify(&load(c)?, Some("dirac_algebra"))?),
        Command::Verify { common, only } => (common, commands::verify(&load(common)?, only.as_deref())?),
    };
    Ok((outcome, common.out.clone()))
}

fn emit(output: &str, out: Option<PathBuf>) -> Result<(), CliError> {
    match out {
        Some(path) => fs::write(&path, output).map_err(|e| CliError::Io(format!("cannot write {}: {e}", path.display()))),
        None => std::io::stdout()
            .lock()
            .write_all(output.as_bytes())
            .map_err(|e| CliError::Io(e.to_string())),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = dispatch(&cli.command).and_then(|(outcome, out)| {
        emit(&outcome.output, out)?;
        Ok(outcome.code)
    });
    match result {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("pvfilter: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
