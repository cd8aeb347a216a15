use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum MoeaError {
    #[error("objective vectors have different lengths ({left} vs {right})")]
    LengthMismatch { left: usize, right: usize },

    #[error("objective value at index {index} is not finite")]
    NonFinite { index: usize },

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("knee exceeds worst value on objective {objective}")]
    KneeBeyondWorst { objective: usize },

    #[error("comparison set is not mutually non-dominated")]
    NotNonDominated,

    #[error("unknown problem `{0}`")]
    UnknownProblem(String),

    #[error("decision vector out of bounds at variable {index}")]
    OutOfBounds { index: usize },

    #[error("empty input")]
    Empty,
}

pub type Result<T> = std::result::Result<T, MoeaError>;
