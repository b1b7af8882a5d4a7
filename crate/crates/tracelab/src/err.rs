//! Error taxonomy shared by all numerical kernels.
//!
//! Domain violations (arguments outside a function's validity region, such as
//! a hypergeometric argument on or beyond the unit circle) are reported as
//! recoverable errors rather than silently degraded results, so callers can
//! dispatch to an alternative evaluation route.

use thiserror::Error;

/// Common result type for fallible operations in this crate.
pub type Result<T> = std::result::Result<T, Error>;

/// All error conditions surfaced by the library.
#[derive(Debug, Error)]
pub enum Error {
    /// The requested decimal precision is below the supported minimum.
    #[error("precision context requires at least 30 decimal digits, got {0}")]
    PrecisionTooLow(usize),

    /// The quadrature tolerance must be a positive finite number.
    #[error("quadrature tolerance must be positive and finite, got {0}")]
    InvalidTolerance(f64),

    /// An argument lies outside the validity domain of the requested operation.
    #[error("domain: {0}")]
    Domain(String),

    /// The requested value sits on a pole of the function.
    #[error("pole: {0}")]
    Pole(String),

    /// The result underflows the representable range and is reported rather
    /// than silently returned as zero.
    #[error("underflow: {0}")]
    Underflow(String),

    /// An iterative scheme failed to reach its target accuracy.
    #[error("no convergence: {0}")]
    NoConvergence(String),

    /// A persisted cache entry is missing, corrupt, or incompatible.
    #[error("cache: {0}")]
    Cache(String),

    /// Malformed input data (CLI arguments, report files).
    #[error("input: {0}")]
    Input(String),

    /// Underlying I/O failure.
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    /// Convenience constructor for domain errors.
    pub fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    /// Convenience constructor for convergence failures.
    pub fn no_convergence(msg: impl Into<String>) -> Self {
        Error::NoConvergence(msg.into())
    }

    /// Convenience constructor for pole reports.
    pub fn pole(msg: impl Into<String>) -> Self {
        Error::Pole(msg.into())
    }
}
