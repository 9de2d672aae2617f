use thiserror::Error;

/// Errors produced anywhere in the library.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid signature: {0}")]
    InvalidSignature(String),

    #[error("invalid structure: {0}")]
    InvalidStructure(String),

    #[error("signature mismatch: {left} vs {right}")]
    SignatureMismatch { left: String, right: String },

    #[error("expected a digraph (exactly one binary relation), got signature {0}")]
    NotDigraph(String),

    #[error("wrong signature shape: {0}")]
    WrongShape(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("size guard exceeded: {what} is {size}, limit is {limit}")]
    GuardExceeded {
        what: &'static str,
        size: usize,
        limit: usize,
    },

    #[error("homomorphism search exceeded its work budget of {0} nodes")]
    BudgetExceeded(u64),

    #[error("strategy error: {0}")]
    Strategy(String),

    #[error("step cap of {0} queries exceeded")]
    StepCapExceeded(usize),

    #[error("internal invariant violated: {0}")]
    Internal(String),

    #[error("datalog: {0}")]
    Datalog(String),

    #[error("format: {0}")]
    Format(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
