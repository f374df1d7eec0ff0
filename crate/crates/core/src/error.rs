use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },

    #[error("line {line}: unknown attribute `{name}`")]
    UnknownAttribute { line: usize, name: String },

    #[error("rounds {rounds} out of range [1, {max}]")]
    RoundsOutOfRange { rounds: usize, max: usize },

    #[error("attribute {attr} out of range for universe of size {n}")]
    AttributeOutOfRange { attr: usize, n: usize },

    #[error("instance is infeasible: targets cannot be derived within {rounds} rounds")]
    Infeasible { rounds: usize },

    #[error("universe too large for exhaustive search: {size} > {limit}")]
    TooLarge { size: usize, limit: usize },

    #[error("functional dependencies are not simple")]
    NotSimple,

    #[error("operation requires {expected} rounds of inference, instance has {actual}")]
    UnsupportedRounds { expected: usize, actual: usize },

    #[error("elements {0:?} cannot be covered by any set")]
    Uncoverable(Vec<usize>),

    #[error("maximum degree {degree} exceeds bound {bound}")]
    DegreeExceeded { degree: usize, bound: usize },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("linear program is infeasible")]
    LpInfeasible,

    #[error("linear program is unbounded")]
    LpUnbounded,

    #[error("solver error: {0}")]
    Internal(String),
}
