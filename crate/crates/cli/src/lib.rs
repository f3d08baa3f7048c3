//! Command-line front end for the `eitkerr` simulator: configuration,
//! parameter sweeps and CSV output for every figure-class quantity.

pub mod commands;
pub mod config;
pub mod output;
pub mod sweep;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("config error: {0}")]
    Config(String),
    #[error(transparent)]
    Model(#[from] eitkerr::Error),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    /// 2 for configuration and input errors, 3 for numerical failures,
    /// 1 for i/o.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => 2,
            CliError::Model(e) if e.is_numerical() => 3,
            CliError::Model(_) => 2,
            CliError::Io(_) => 1,
        }
    }
}

pub use commands::{run, Command, CommandOutput};
pub use config::Config;
