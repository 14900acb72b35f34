use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum LandscapeError {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("invalid vector: {0}")]
    InvalidVector(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("selection matrix is not a valid sign selection: {0}")]
    InvalidSelection(String),

    #[error("point is not stationary")]
    NotStationary,

    #[error("point is a ground truth, expected a spurious stationary point")]
    GroundTruthPoint,

    #[error("point is not a spurious stationary point")]
    NotSpurious,

    #[error("ground truth must be nonzero")]
    ZeroGroundTruth,

    #[error("numerical failure: {0}")]
    NumericalFailure(String),

    #[error("bisection failed to converge after {iterations} iterations (residual {residual:e})")]
    BisectionFailure { iterations: usize, residual: f64 },

    #[error("curvature {found} does not match the expected value {expected}")]
    CurvatureMismatch { expected: f64, found: f64 },

    #[error("unsupported instance: {0}")]
    UnsupportedInstance(String),
}

pub type Result<T> = std::result::Result<T, LandscapeError>;

pub(crate) fn check_dims(expected: usize, found: usize) -> Result<()> {
    if expected == found {
        Ok(())
    } else {
        Err(LandscapeError::DimensionMismatch { expected, found })
    }
}
