use thiserror::Error;

/// Errors produced by the numerical core.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("invalid distribution: {0}")]
    InvalidDist(String),

    #[error("invalid truth function: {0}")]
    InvalidTruth(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("length mismatch: {0}")]
    LengthMismatch(String),

    #[error("degenerate truth function: {0}")]
    DegenerateTruth(String),

    #[error("support mismatch: {0}")]
    SupportMismatch(String),

    #[error("label {0} is never emitted under the given source distribution")]
    ZeroLabel(usize),

    #[error("parametric fit failed: {0}")]
    FitFailure(String),

    #[error("numerical degeneracy: {0}")]
    NumericalDegeneracy(String),

    #[error("infeasible target: {0}")]
    Infeasible(String),

    #[error("out of range: {0}")]
    OutOfRange(String),
}

pub type Result<T> = std::result::Result<T, Error>;
