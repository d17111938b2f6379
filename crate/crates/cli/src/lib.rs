//! Command-line front end for the `exact-series` solvers.
//!
//! Commands read and write [`document::CoefficientDocument`] JSON files, emit
//! [`report::VerifyReport`] JSON, and write grid evaluations as CSV. The exit
//! status is 0 on success, 1 on any input error and 2 when a verification
//! fails or is inconclusive.

pub mod args;
mod commands;
pub mod document;
pub mod profile;
pub mod report;

use std::io::Write;
use std::path::Path;

use thiserror::Error;

pub use args::Cli;
pub use commands::run;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Input(String),
    #[error("cannot write {path}: {source}")]
    Write {
        path: String,
        source: std::io::Error,
    },
}

impl CliError {
    pub fn input(e: impl std::fmt::Display) -> Self {
        CliError::Input(e.to_string())
    }
}

/// Non-error outcome of a command.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Outcome {
    Success,
    /// A residual was nonzero, could not be trusted, or an oracle tolerance was missed.
    CheckFailed,
}

impl Outcome {
    pub fn from_pass(pass: bool) -> Self {
        if pass {
            Outcome::Success
        } else {
            Outcome::CheckFailed
        }
    }

    pub fn exit_code(self) -> i32 {
        match self {
            Outcome::Success => 0,
            Outcome::CheckFailed => 2,
        }
    }
}

pub const EXIT_INPUT_ERROR: i32 = 1;

/// Writes `text` to `path`, or to `stdout` when no path is given.
pub fn emit(path: Option<&Path>, text: &str, stdout: &mut dyn Write) -> Result<(), CliError> {
    match path {
        Some(p) => std::fs::write(p, text).map_err(|source| CliError::Write {
            path: p.display().to_string(),
            source,
        }),
        None => stdout.write_all(text.as_bytes()).map_err(|source| CliError::Write {
            path: "<stdout>".into(),
            source,
        }),
    }
}
