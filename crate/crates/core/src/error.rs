use thiserror::Error;

/// Errors produced anywhere in the library.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("invalid field: {0}")]
    InvalidField(String),

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("invalid multi-index {indices:?}: {reason}")]
    InvalidIndex { indices: Vec<usize>, reason: String },

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("matrix is singular")]
    Singular,

    #[error("operation requires a finite field")]
    InfiniteField,

    #[error("search budget of {budget} projective points exceeded")]
    BudgetExceeded { budget: u64 },

    #[error("enumeration cap exceeded: {needed} items, cap {cap}")]
    CapExceeded { needed: u128, cap: u128 },

    #[error("witness does not satisfy the vanishing condition")]
    WitnessFails,

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("search failed: {0}")]
    NotFound(String),

    #[error("assertion failed: {0}")]
    AssertionFailed(String),

    #[error("internal consistency failure: {0}")]
    Internal(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
