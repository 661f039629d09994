//! `hsle` — command-line access to the disconnection-exponent toolkit:
//! closed-form exponent tables, analytic-vs-Monte-Carlo survival
//! cross-checks, a numerical self-check battery, and driven-trace
//! sampling.
//!
//! Exit codes: 0 success, 2 failed self-checks in `verify`, 3 input or
//! range errors (including I/O problems), 4 numerical failures.

mod commands;
mod manifest;
mod table;

use std::fmt;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use hsle_core::Error as CoreError;

/// Errors surfaced by the command layer.
#[derive(Debug)]
pub enum CliError {
    /// Bad or inconsistent command-line input.
    Input(String),
    /// Error propagated from the numerical core.
    Core(CoreError),
    /// Filesystem error, with the path that caused it.
    Io {
        /// Path being read or written.
        path: PathBuf,
        /// Underlying error.
        source: std::io::Error,
    },
}

impl CliError {
    /// Wraps an I/O error with its path context.
    pub fn io(path: &Path, source: std::io::Error) -> Self {
        CliError::Io {
            path: path.to_path_buf(),
            source,
        }
    }

    /// Process exit code for this error: 3 for input/range/I/O
    /// problems, 4 for numerical failures.
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Input(_) => 3,
            CliError::Core(CoreError::OutOfRange(_)) => 3,
            CliError::Core(_) => 4,
            CliError::Io { .. } => 3,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Input(msg) => write!(f, "{msg}"),
            CliError::Core(e) => write!(f, "{e}"),
            CliError::Io { path, source } => {
                write!(f, "{}: {source}", path.display())
            }
        }
    }
}

impl From<CoreError> for CliError {
    fn from(e: CoreError) -> Self {
        CliError::Core(e)
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "hsle",
    version,
    about = "Disconnection-exponent toolkit: exponent tables, survival \
             cross-checks, self-checks, and trace sampling",
    after_help = "Tables are written as RFC-4180 CSV with a JSON manifest \
                  alongside. Without --out, tables go to stdout (or to \
                  $HSLE_OUT_DIR if set)."
)]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Debug, Subcommand)]
enum Cmd {
    /// Closed-form table of exponents, decay rates, and expansion
    /// coefficients
    Exponent(commands::exponent::ExponentArgs),
    /// Analytic survival series against a Monte Carlo estimate
    Survival(commands::survival::SurvivalArgs),
    /// Numerical self-check battery across a diffusivity grid
    Verify(commands::verify::VerifyArgs),
    /// Sample one driven path and export its trace
    Trace(commands::trace::TraceArgs),
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 3,
            };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let result = match &cli.command {
        Cmd::Exponent(args) => commands::exponent::run(args),
        Cmd::Survival(args) => commands::survival::run(args),
        Cmd::Verify(args) => commands::verify::run(args),
        Cmd::Trace(args) => commands::trace::run(args),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
