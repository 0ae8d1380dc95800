use thiserror::Error;

/// Errors produced anywhere in the library.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("dimension mismatch in {context}: expected {expected}, found {found}")]
    DimensionMismatch {
        context: String,
        expected: usize,
        found: usize,
    },

    #[error("point is not in the set")]
    PointNotInSet,

    #[error("point is outside the domain of the function")]
    OutsideDomain,

    #[error("set is empty")]
    EmptySet,

    #[error("function domain is empty; the function would not be proper")]
    EmptyDomain,

    #[error("function needs at least one affine piece")]
    NoPieces,

    #[error("D ∩ dom f is empty")]
    InfeasibleProblem,

    #[error("problem has no solution")]
    NoSolution,

    #[error("dimension {dim} exceeds the enumeration limit {limit}")]
    ScaleExceeded { dim: usize, limit: usize },

    #[error("epigraph representation rejected: {0}")]
    NotEpigraph(String),

    #[error("invalid rational {text:?}: {reason}")]
    InvalidRational { text: String, reason: String },

    #[error("parse error at {location}: {message}")]
    Parse { location: String, message: String },

    /// An internally produced certificate failed exact re-verification.
    #[error("certificate violation: {0}")]
    CertificateViolation(String),

    /// Two routes that must agree did not.
    #[error("internal cross-check failed: {0}")]
    Inconsistent(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn check_dim(context: &str, expected: usize, found: usize) -> Result<()> {
    if expected == found {
        Ok(())
    } else {
        Err(Error::DimensionMismatch {
            context: context.to_string(),
            expected,
            found,
        })
    }
}
