use crate::heating::LambdaEffResult;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, thiserror::Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// The requested frequency lies above the dispersion's supremum.
    #[error("frequency {omega} rad/s is above the dispersion supremum {supremum} rad/s")]
    OutOfRange { omega: f64, supremum: f64 },

    #[error("format error: {0}")]
    Format(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("validation error: {message} (offending indices: {indices:?})")]
    Validation {
        message: String,
        indices: Vec<usize>,
    },

    /// Tolerance not reached; `best` holds the estimate at the point of giving up.
    #[error(
        "quadrature did not converge: estimate {} with error {} after {} evaluations",
        best.value, best.error_estimate, best.evaluations
    )]
    Convergence { best: Box<LambdaEffResult> },

    #[error("undefined ratio: {0}")]
    UndefinedRatio(String),

    #[error("internal consistency error: {0}")]
    InternalConsistency(String),

    #[error("check failed: {message} (residuals: {residuals:?})")]
    CheckFailure {
        message: String,
        residuals: Vec<f64>,
    },
}

pub(crate) fn ensure_finite(name: &str, value: f64) -> Result<()> {
    if value.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidArgument(format!(
            "{name} must be finite, got {value}"
        )))
    }
}

pub(crate) fn ensure_positive(name: &str, value: f64) -> Result<()> {
    if value.is_finite() && value > 0.0 {
        Ok(())
    } else {
        Err(Error::InvalidArgument(format!(
            "{name} must be positive and finite, got {value}"
        )))
    }
}
