use std::fmt;

use singlab_core::Error;

/// A failure with its process exit code.
#[derive(Debug, Clone, PartialEq)]
pub enum CliError {
    /// Usage or configuration error (exit 1).
    Validation(String),
    /// A solver did not converge (exit 2).
    NoConvergence(String),
    /// A verdict failed (exit 3).
    Verification(String),
    /// Reading or writing a file failed (exit 4).
    Io(String),
}

impl CliError {
    pub fn code(&self) -> u8 {
        match self {
            CliError::Validation(_) => 1,
            CliError::NoConvergence(_) => 2,
            CliError::Verification(_) => 3,
            CliError::Io(_) => 4,
        }
    }

    /// A core error raised while checking a configuration.
    pub fn validation(e: Error) -> Self {
        CliError::Validation(e.to_string())
    }

    /// A core error raised by a solver.
    pub fn from_core(e: Error) -> Self {
        match e {
            Error::NoConvergence { .. }
            | Error::BranchCollapse { .. }
            | Error::NumericalFault(_)
            | Error::StiffnessFault { .. }
            | Error::FiniteTimeBlowup { .. } => CliError::NoConvergence(e.to_string()),
            _ => CliError::Validation(e.to_string()),
        }
    }

    pub fn io(path: &std::path::Path, e: impl fmt::Display) -> Self {
        CliError::Io(format!("{}: {e}", path.display()))
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Validation(s) => write!(f, "invalid input: {s}"),
            CliError::NoConvergence(s) => write!(f, "no convergence: {s}"),
            CliError::Verification(s) => write!(f, "verification failed: {s}"),
            CliError::Io(s) => write!(f, "i/o error: {s}"),
        }
    }
}

impl std::error::Error for CliError {}
