use thiserror::Error;

/// Errors raised by the library. Numerical residual failures are reported
/// through [`crate::report::Report`] values instead, so callers can inspect them.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("malformed input: {0}")]
    Malformed(String),
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("axiom violated: {0}")]
    Axiom(String),
    #[error("algebra is not semisimple: {0}")]
    NotSemisimple(String),
    #[error("decomposition is ill-conditioned: {0}")]
    Conditioning(String),
    #[error("domain error: {0}")]
    Domain(String),
    #[error("no convergence: {0}")]
    Convergence(String),
    #[error("input too large: {0}")]
    TooLarge(String),
    #[error("not an idempotent-state-like object: {0}")]
    NotIdempotent(String),
    #[error("not a group-like projection: {0}")]
    NotGroupLike(String),
    #[error("not conditionally positive: {0}")]
    NotConditionallyPositive(String),
    #[error("no root found at level {level}: {reason}")]
    RootSearch { level: usize, reason: String },
    #[error("hypothesis failed: {0}")]
    Hypothesis(String),
}

pub type Result<T> = std::result::Result<T, Error>;
