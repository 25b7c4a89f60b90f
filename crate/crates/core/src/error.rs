use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// A physical parameter is outside its domain, or a derived quantity is not finite.
    #[error("parameter domain error: {0}")]
    Domain(String),

    #[error("pulse train must contain at least one pulse")]
    EmptyTrain,

    /// Inconsistent combination of inputs (dimension, shape, step count, lengths).
    #[error("configuration error: {0}")]
    Config(String),

    /// An operator failed a unitarity or dimension check.
    #[error("validation error: {0}")]
    Validation(String),

    #[error("statistics error: {0}")]
    Statistics(String),
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn config(msg: impl Into<String>) -> Self {
        Error::Config(msg.into())
    }
}

/// Returns `value` if finite and a domain error naming `what` otherwise.
pub(crate) fn finite(value: f64, what: &str) -> Result<f64> {
    if value.is_finite() {
        Ok(value)
    } else {
        Err(Error::domain(format!("{what} is not finite ({value})")))
    }
}

pub(crate) fn positive(value: f64, what: &str) -> Result<f64> {
    if value.is_finite() && value > 0.0 {
        Ok(value)
    } else {
        Err(Error::domain(format!("{what} must be positive and finite, got {value}")))
    }
}
