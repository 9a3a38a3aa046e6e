use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("unsupported dimension {0} (expected 2, 3 or 4)")]
    UnsupportedDimension(usize),

    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },

    #[error("state is not normalized (norm² = {norm_sqr})")]
    NotNormalized { norm_sqr: f64 },

    #[error("non-finite amplitude")]
    NonFinite,

    #[error("both arguments are all-zero")]
    DegenerateInput,

    #[error("state is not one of the nine qutrit directions")]
    NotADirection,

    #[error("unknown label `{0}`")]
    UnknownLabel(String),

    #[error("product {row}·{col} matches no group element up to phase")]
    ClosureViolation { row: char, col: char },

    #[error("invalid ensemble weights: {0}")]
    InvalidWeights(String),

    #[error("invalid density matrix: {0}")]
    InvalidDensityMatrix(String),

    #[error("state is orthogonal to every basis state")]
    InvalidState,

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}
