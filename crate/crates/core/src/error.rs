use thiserror::Error;

/// Errors raised by the numerical routines.
///
/// Each variant maps onto one failure category so front ends can turn it
/// into an exit status without string matching.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An argument lies outside the mathematical domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// The caller violated a documented precondition (sizes, ranges, shapes).
    #[error("usage error: {0}")]
    Usage(String),

    /// An iterative or quadrature routine did not reach its tolerance.
    #[error("numerical error: {message} (estimate {estimate:e})")]
    Numerical { message: String, estimate: f64 },

    /// A consistency check on computed output failed.
    #[error("integrity error: {0}")]
    Integrity(String),

    /// An internal invariant was broken; indicates a bug.
    #[error("internal error: {0}")]
    Internal(String),
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn usage(msg: impl Into<String>) -> Self {
        Error::Usage(msg.into())
    }

    pub(crate) fn numerical(msg: impl Into<String>, estimate: f64) -> Self {
        Error::Numerical {
            message: msg.into(),
            estimate,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
