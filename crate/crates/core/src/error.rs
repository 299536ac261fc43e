use thiserror::Error;

/// Errors raised by the library. Verdict-level failures (a `No` answer, a
/// failed verification) are ordinary values, not errors.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse { line: usize, column: usize, message: String },
    #[error("address `{0}` is not valid for this term")]
    BadAddress(String),
    #[error("space does not have exactly one limit point")]
    NotSingleLimit,
    #[error("glued witnesses disagree at the shared point: {0} vs {1}")]
    GlueMismatch(String, String),
    #[error("function is not continuous at {0}")]
    NotContinuous(String),
    #[error("unsupported domain: {0}")]
    UnsupportedDomain(String),
    #[error("unknown codomain embedding `{0}`")]
    UnknownEmbedding(String),
    #[error("function is not locally constant")]
    NotLocallyConstant,
    #[error("labels do not support the given image map: {0}")]
    LabelMismatch(String),
    #[error("invalid witness: {0}")]
    InvalidWitness(String),
    #[error("space has finitely many limit points")]
    TooFewLimitPoints,
    #[error("sets are not disjoint")]
    NotDisjoint,
    #[error("unsupported function: {0}")]
    UnsupportedFn(String),
    #[error("bound exceeded: {0} > {1}")]
    BoundExceeded(u32, u32),
    #[error("search budget exhausted: {0}")]
    SearchBudget(String),
    #[error("value `{0}` does not belong to codomain {1}")]
    BadValue(String, String),
    #[error("function shape does not match its domain: {0}")]
    ShapeMismatch(String),
}

pub type Result<T> = std::result::Result<T, Error>;
