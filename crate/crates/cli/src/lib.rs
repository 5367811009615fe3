//! Verification suites, result cache and report emission behind the
//! `cuspidal` binary.

pub mod cache;
pub mod output;
pub mod report;
pub mod suites;

pub use cache::Cache;
pub use report::{CaseResult, Status, VerifyReport};

/// Environment variable overriding the default cache directory.
pub const CACHE_ENV: &str = "CUSPIDAL_CACHE_DIR";

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("configuration error: {0}")]
    Config(String),
    #[error(transparent)]
    Core(#[from] cuspidal::Error),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
    #[error("output error: {0}")]
    Output(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => 2,
            _ => 1,
        }
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;
