//! Scenario files, sweep pipelines and report writers for the `hetnet` tool.

#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::needless_range_loop)]

pub mod config;
pub mod output;
pub mod pipeline;
pub mod presets;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("config error: {0}")]
    Config(#[from] config::ConfigError),
    #[error(transparent)]
    Core(#[from] hetnet_core::Error),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
    #[error("{0}")]
    Usage(String),
}

impl CliError {
    /// Process exit status: 2 for bad input, 1 for everything else.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) | CliError::Usage(_) => 2,
            CliError::Core(hetnet_core::Error::Config(_)) => 2,
            CliError::Core(_) | CliError::Io(_) => 1,
        }
    }
}

/// Exit status when every computation succeeded but a validation check failed.
pub const EXIT_VALIDATION_FAILED: i32 = 3;
