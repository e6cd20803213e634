//! Command-line driver for `weilmot-core`: single-record commands, quadratic
//! form certificates and an idempotent batch runner.

pub mod batch;
pub mod commands;
pub mod input;
pub mod matrix;
pub mod report;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("malformed input: {0}")]
    Malformed(String),
    #[error("{}: {}", .0.name(), .0)]
    Domain(weilmot_core::Error),
    #[error("i/o error: {0}")]
    Io(String),
}

impl From<weilmot_core::Error> for CliError {
    fn from(e: weilmot_core::Error) -> Self {
        match e {
            weilmot_core::Error::Malformed(m) => CliError::Malformed(m),
            other => CliError::Domain(other),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e.to_string())
    }
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Domain(_) => 1,
            CliError::Malformed(_) => 2,
            CliError::Io(_) => 3,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            CliError::Domain(e) => e.name(),
            CliError::Malformed(_) => "Malformed",
            CliError::Io(_) => "Io",
        }
    }
}
