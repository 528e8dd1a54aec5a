use thiserror::Error;

/// Errors produced by the simulation library.
///
/// Every fallible operation reports which contract was violated; the CLI
/// maps [`Error`] onto its numeric-failure exit code.
#[derive(Debug, Clone, Error)]
pub enum Error {
    /// A precondition on the arguments was violated.
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// A field or mask cannot be represented on the requested grid.
    #[error("resolution error: {0}")]
    Resolution(String),

    /// Input and output grids do not satisfy the lens sampling relation.
    #[error("sampling error: {0}")]
    Sampling(String),

    /// A lattice sum was truncated too aggressively to be meaningful.
    #[error("truncation error: {0}")]
    Truncation(String),

    /// Numerical quadrature did not converge.
    #[error("quadrature error: {0}")]
    Quadrature(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidArgument(msg.into())
    }

    pub(crate) fn resolution(msg: impl Into<String>) -> Self {
        Error::Resolution(msg.into())
    }

    pub(crate) fn sampling(msg: impl Into<String>) -> Self {
        Error::Sampling(msg.into())
    }
}
