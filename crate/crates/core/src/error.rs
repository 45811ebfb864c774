use thiserror::Error;

/// Errors raised across the library.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// An argument violated the documented precondition of an operation.
    #[error("precondition violated: {0}")]
    Precondition(String),

    /// An argument lies outside the mathematical domain of an operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// An iterative numerical routine failed to reach the requested accuracy.
    #[error("numerical failure: {message} (best estimate {best_estimate})")]
    Numerical { message: String, best_estimate: f64 },

    /// Two eigenvalues of T_2 are closer than the separation threshold.
    #[error("degenerate T_2 spectrum at weight {weight}: eigenvalue gap {gap:e} below {threshold:e}")]
    DegenerateSpectrum { weight: u32, gap: f64, threshold: f64 },

    #[error("cache error: {0}")]
    Cache(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn precondition<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Precondition(msg.into()))
}

pub(crate) fn domain<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Domain(msg.into()))
}
