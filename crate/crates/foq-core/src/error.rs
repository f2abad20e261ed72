//! Error type shared by every module in the crate.

use thiserror::Error;

/// Errors reported by coefficient construction, quadrature, and the
/// verification oracle.
#[derive(Debug, Error)]
pub enum Error {
    /// An argument was outside the domain of the operation (non-finite
    /// weight parameter, zero interval count, degenerate interval, ...).
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// Two objects that must share a grid were built on different grids.
    #[error("grid mismatch: {0}")]
    GridMismatch(String),

    /// Sampled data contained a NaN or infinity.
    #[error("non-finite data: {0}")]
    NonFiniteData(String),

    /// Adaptive integration hit its refinement budget before the
    /// stopping rule was satisfied.
    #[error(
        "integration over [{a}, {b}] did not converge within {levels} dyadic refinements \
         (last delta {last_delta:.3e}, tolerance {tolerance:.3e})"
    )]
    IntegrationDidNotConverge {
        a: f64,
        b: f64,
        levels: u32,
        last_delta: f64,
        tolerance: f64,
    },

    /// Gaussian elimination met a pivot too small to divide by safely.
    #[error("linear system is numerically singular at elimination step {step} (pivot {pivot:.3e})")]
    SingularSystem { step: usize, pivot: f64 },
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn argument(msg: impl Into<String>) -> Self {
        Error::InvalidArgument(msg.into())
    }
}
