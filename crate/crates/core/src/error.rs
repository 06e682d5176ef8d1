use thiserror::Error;

/// Errors raised by constructors, verifiers and file loaders.
#[derive(Debug, Error)]
pub enum Error {
    #[error("zero denominator")]
    ZeroDenominator,

    #[error("expected a positive value, got {0}")]
    NotPositive(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("expected a {expected} code, got {found}")]
    WrongKind { expected: String, found: String },

    #[error("radicand of b_l is not positive at l = {l}")]
    NegativeRadicand { l: u32 },

    #[error("matrix is not special unitary (deviation {0})")]
    NotSpecialUnitary(String),

    #[error("supports are not staggered: indices {0} and {1} are closer than 2t+1")]
    NotStaggered(u32, u32),

    #[error("codespace is not covariant under the generator (residual {0})")]
    NotCovariant(String),

    #[error("search produced a code that fails verification: {0}")]
    SearchVerification(String),

    #[error("malformed code file: {0}")]
    Format(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
