//! Command-line front end and file formats for qubonet constraint models.
//!
//! The command logic lives here as a library so the formats and sweeps are
//! testable without spawning the binary; `main.rs` is a thin shell mapping
//! arguments to these functions and errors to exit codes.

use std::fmt;

pub mod commands;
pub mod formats;
pub mod sweep;
pub mod threads;

/// CLI failure classes, one per exit code.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CliError {
    /// Invalid spec, flags, or file content (exit 2).
    Invalid(String),
    /// Filesystem failure (exit 3).
    Io(String),
    /// Verification found counterexamples (exit 4).
    Verification(String),
}

impl CliError {
    pub fn invalid(msg: String) -> Self {
        CliError::Invalid(msg)
    }

    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Invalid(_) => 2,
            CliError::Io(_) => 3,
            CliError::Verification(_) => 4,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Invalid(msg) => write!(f, "{msg}"),
            CliError::Io(msg) => write!(f, "{msg}"),
            CliError::Verification(msg) => write!(f, "{msg}"),
        }
    }
}

impl std::error::Error for CliError {}
