use thiserror::Error;

/// Errors raised across the crate.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("matrix typing mismatch: {0}")]
    TypingMismatch(String),
    #[error("matrix must be square, got {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },
    #[error("-inf + +inf is undefined")]
    UndefinedInfinitySum,
    #[error("Kleene star diverges: a cycle of positive weight exists")]
    DivergentStar,
    #[error("{side} node {index} has no outgoing arc")]
    IsolatedNode { side: &'static str, index: usize },
    #[error("invalid strategy: {0}")]
    InvalidStrategy(String),
    #[error("reduction is infeasible: row {row} needs b <= d")]
    InfeasibleReduction { row: usize },
    #[error("alcoved feasibility precondition violated: {0}")]
    FeasibilityViolated(String),
    #[error("integer mode requires integer data")]
    ModeMismatch,
    #[error("illegal infinity: {0}")]
    IllegalInfinity(String),
    #[error("malformed JSON: {0}")]
    MalformedJson(String),
    #[error("bad rational literal {0:?}")]
    BadRational(String),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("weights too large for the integer game solver")]
    Overflow,
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
