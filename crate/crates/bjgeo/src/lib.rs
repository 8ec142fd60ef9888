//! File formats and the command-line front end for `bjgeo-core`.

pub mod cli;
pub mod io;
pub mod output;

use thiserror::Error;

pub use cli::{run, Cli, Command, Format, ModeArg, Outcome, VectorArg};

/// Bad input: unreadable files, malformed JSON, invalid spaces or arguments.
#[derive(Debug, Error)]
pub enum InputError {
    #[error("cannot read {path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("{origin}:{line}:{column}: {}{message}", field.as_ref().map(|f| format!("field `{f}`: ")).unwrap_or_default())]
    Parse { origin: String, line: usize, column: usize, field: Option<String>, message: String },
    #[error(transparent)]
    Core(#[from] bjgeo_core::Error),
    #[error("{0}")]
    Usage(String),
}

/// Why a command did not finish with status 0.
#[derive(Debug, Error)]
pub enum CliError {
    /// Exit status 2.
    #[error(transparent)]
    Input(#[from] InputError),
    /// Exit status 1: a solver gave up or disagreed with itself.
    #[error("{0}")]
    Failed(bjgeo_core::Error),
}

impl CliError {
    pub fn status(&self) -> u8 {
        match self {
            CliError::Input(_) => 2,
            CliError::Failed(_) => 1,
        }
    }
}

impl From<bjgeo_core::Error> for CliError {
    fn from(e: bjgeo_core::Error) -> Self {
        use bjgeo_core::Error as E;
        match e {
            E::InternalInconsistency(_) | E::NoConvergence | E::NotInMaxSet { .. } | E::NotInMinSet { .. } => {
                CliError::Failed(e)
            }
            other => CliError::Input(InputError::Core(other)),
        }
    }
}
