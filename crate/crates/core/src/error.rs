use thiserror::Error;

pub type Result<T> = std::result::Result<T, QposError>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum QposError {
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("dimension mismatch: expected {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },

    #[error("size limit exceeded: {0}")]
    SizeLimit(String),

    #[error("no usable runs to estimate from")]
    NoUsableRuns,

    #[error("no root of {0} in the search interval")]
    NoRoot(&'static str),
}

impl QposError {
    pub(crate) fn param(name: &'static str, reason: impl Into<String>) -> Self {
        QposError::InvalidParameter {
            name,
            reason: reason.into(),
        }
    }
}

pub(crate) fn check_eta(eta: f64) -> Result<()> {
    if eta.is_finite() && eta > 0.0 && eta <= 1.0 {
        Ok(())
    } else {
        Err(QposError::param("eta", format!("must lie in (0, 1], got {eta}")))
    }
}

pub(crate) fn check_positive(name: &'static str, value: f64) -> Result<()> {
    if value.is_finite() && value > 0.0 {
        Ok(())
    } else {
        Err(QposError::param(name, format!("must be positive and finite, got {value}")))
    }
}

pub(crate) fn check_count(name: &'static str, value: usize, min: usize) -> Result<()> {
    if value >= min {
        Ok(())
    } else {
        Err(QposError::param(name, format!("must be at least {min}, got {value}")))
    }
}
