//! Command-line front end for `eloop-core`: argument parsing, the JSON and
//! CSV report formats, and the verification suites.
//!
//! Exit codes: 0 when the command's claim is verified or true, 1 when it is
//! falsified or a counterexample was found, 2 for usage and precondition
//! errors, 3 for internal errors.

pub mod commands;
pub mod dto;
pub mod suites;

use std::fmt;

pub use commands::{run, Cli, Output};

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Lib(eloop_core::Error),
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        use eloop_core::Error::*;
        match self {
            CliError::Lib(DegenerateSum | Internal(_) | HenselDiverged | OrderBoundExceeded { .. }) => 3,
            _ => 2,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(s) | CliError::Io(s) => f.write_str(s),
            CliError::Lib(e) => e.fmt(f),
        }
    }
}

impl std::error::Error for CliError {}

impl From<eloop_core::Error> for CliError {
    fn from(e: eloop_core::Error) -> CliError {
        CliError::Lib(e)
    }
}
