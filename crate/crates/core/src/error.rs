use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// An argument outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    #[error("root finder did not converge after {iterations} iterations (residual {residual:e})")]
    RootsNotConverged { iterations: u32, residual: f64 },

    /// Local Satake data violating one of its invariants.
    #[error("invalid local data at p = {p}: {reason}")]
    InvalidLocal { p: u64, reason: String },

    #[error("no local data for prime {0}")]
    MissingPrime(u64),

    /// A coefficient table too short for the requested truncation.
    #[error("coefficient table covers m <= {available}, but m <= {required} is needed")]
    InsufficientTable { required: u64, available: u64 },

    #[error("series truncation not reached: tail estimate {tail:e} exceeds target {target:e}")]
    TruncationNotReached { tail: f64, target: f64 },

    #[error("integer capacity exceeded: {0}")]
    Capacity(String),

    #[error("numeric failure: {0}")]
    Numeric(String),
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }
}
