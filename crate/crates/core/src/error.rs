use thiserror::Error;

/// Errors raised by the linear algebra kernels and the filters built on them.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum FilterError {
    #[error("series too short: need at least {min} observations, got {got}")]
    TooShort { min: usize, got: usize },

    #[error("dimension mismatch: expected length {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("smoothing parameter must be finite and non-negative, got {0}")]
    InvalidSmoothing(f64),

    #[error("iteration count must be at least 1")]
    ZeroIterations,

    #[error("matrix is not positive definite")]
    NotPositiveDefinite,

    #[error("first-stage cycle has zero l1 norm; the stopping index is undefined")]
    DegenerateCycle,

    #[error("eigenvalue iteration did not converge")]
    NoConvergence,
}

pub type Result<T> = std::result::Result<T, FilterError>;

pub(crate) fn check_smoothing(smoothing: f64) -> Result<()> {
    if smoothing.is_finite() && smoothing >= 0.0 {
        Ok(())
    } else {
        Err(FilterError::InvalidSmoothing(smoothing))
    }
}

pub(crate) fn check_len(got: usize, min: usize) -> Result<()> {
    if got < min {
        Err(FilterError::TooShort { min, got })
    } else {
        Ok(())
    }
}
