use thiserror::Error;

/// Errors produced by the library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// A point was evaluated outside the declared domain of a map.
    #[error("point {point:?} lies outside the map domain (coordinate {coordinate} off by {excess:e})")]
    OutsideDomain {
        point: Vec<f64>,
        coordinate: usize,
        excess: f64,
    },

    #[error("inner iteration for c = {c} did not converge within {iterations} iterations")]
    InnerNonConvergence { c: f64, iterations: usize },

    #[error("grid has {points} points, more than the limit of {limit}")]
    GridTooLarge { points: u128, limit: u128 },
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::InvalidArgument(msg.into()))
}

pub(crate) fn check_dims(expected: usize, found: usize) -> Result<()> {
    if expected == found {
        Ok(())
    } else {
        Err(Error::DimensionMismatch { expected, found })
    }
}
