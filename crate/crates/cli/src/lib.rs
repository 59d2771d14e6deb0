//! Batch front end for `htl-core`: experiment configs in, JSON and CSV
//! reports out.

use std::fmt;

pub mod config;
pub mod experiments;
pub mod sources;

pub use config::{ExperimentConfig, Kind};
pub use experiments::{run, write_report, Report};

pub const EXIT_INVALID: u8 = 1;
pub const EXIT_NUMERICAL: u8 = 2;
pub const EXIT_RESOURCE: u8 = 3;

/// Failure with its process exit code.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CliError {
    pub code: u8,
    pub message: String,
}

impl CliError {
    pub fn invalid(message: impl Into<String>) -> Self {
        Self { code: EXIT_INVALID, message: message.into() }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.message)
    }
}

impl std::error::Error for CliError {}

impl From<htl_core::Error> for CliError {
    fn from(e: htl_core::Error) -> Self {
        let code = match e {
            htl_core::Error::InvalidArgument(_) => EXIT_INVALID,
            htl_core::Error::Numerical(_) => EXIT_NUMERICAL,
            htl_core::Error::Resource(_) => EXIT_RESOURCE,
        };
        Self { code, message: e.to_string() }
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;
