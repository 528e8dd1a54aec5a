use thiserror::Error;

use crate::config::ConfigError;

/// Anything that can stop a scenario run.
#[derive(Debug, Error)]
pub enum RunError {
    /// Invalid configuration (CLI exit code 2).
    #[error("config error: {0}")]
    Config(#[from] ConfigError),

    /// Numerical failure surfaced from the simulation library (exit code 3).
    #[error("numeric error: {0}")]
    Numeric(#[from] biphoton_fourier::Error),

    /// Artifact I/O failure (exit code 3).
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}
