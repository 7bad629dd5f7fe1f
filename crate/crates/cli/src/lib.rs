//! Library side of the `uiscatter` command-line tool: spec files, tables,
//! argument parsing and the command implementations.

pub mod commands;
pub mod complex;
pub mod specfile;
pub mod table;

use std::fmt;
use std::process::ExitCode;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorKind {
    /// Design, solver or verification failure (exit 1).
    Failure,
    /// Unreadable or malformed input, or unwritable output (exit 2).
    Io,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CliError {
    pub kind: ErrorKind,
    pub message: String,
}

impl CliError {
    pub fn failure(message: impl Into<String>) -> Self {
        Self { kind: ErrorKind::Failure, message: message.into() }
    }

    pub fn io(message: impl Into<String>) -> Self {
        Self { kind: ErrorKind::Io, message: message.into() }
    }

    pub fn exit_code(&self) -> ExitCode {
        match self.kind {
            ErrorKind::Failure => ExitCode::from(1),
            ErrorKind::Io => ExitCode::from(2),
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.message)
    }
}

impl std::error::Error for CliError {}

impl From<uiscatter::Error> for CliError {
    fn from(e: uiscatter::Error) -> Self {
        CliError::failure(e.to_string())
    }
}
