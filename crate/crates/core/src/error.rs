use thiserror::Error;

/// Library-wide error type.
#[derive(Debug, Error)]
pub enum Error {
    /// A precondition on an argument was violated.
    #[error("domain error: {0}")]
    Domain(String),

    /// A quadrature could not meet the requested tolerance.
    #[error("accuracy budget exceeded: estimated error {estimate:.3e} > tolerance {tolerance:.3e} ({context})")]
    Accuracy {
        estimate: f64,
        tolerance: f64,
        context: String,
    },

    /// Profile space tag did not match the operation.
    #[error("space mismatch: expected {expected} profile, got {got}")]
    SpaceMismatch {
        expected: &'static str,
        got: &'static str,
    },

    /// Unknown phase name requested from the registry.
    #[error("unknown phase '{0}' (expected one of: {1})")]
    UnknownPhase(String, String),

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),

    #[error("malformed file {path}: {reason}")]
    Parse { path: String, reason: String },
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }
}
