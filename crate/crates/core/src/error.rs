use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// A decomposition or model violates one of its invariants.
    #[error("validation failed: {0}")]
    Validation(String),

    /// A numeric argument lies outside its admissible range.
    #[error("argument `{name}` = {value} is outside {range}")]
    OutOfRange {
        name: &'static str,
        value: f64,
        range: &'static str,
    },

    /// An argument is in range but the requested quantity is not defined there.
    #[error("{0}")]
    Domain(String),

    #[error("model file: {0}")]
    Format(String),
}

impl Error {
    pub(crate) fn validation(msg: impl Into<String>) -> Self {
        Error::Validation(msg.into())
    }

    /// True for errors caused by bad caller-supplied parameters rather than bad data.
    pub fn is_argument_error(&self) -> bool {
        matches!(self, Error::OutOfRange { .. } | Error::Domain(_))
    }
}

/// Checks `value` lies in `[lo, hi]` (a 1e-12 slack is absorbed and clamped away).
pub(crate) fn check_range(
    name: &'static str,
    value: f64,
    lo: f64,
    hi: f64,
    range: &'static str,
) -> Result<f64> {
    const SLACK: f64 = 1e-12;
    if !value.is_finite() || value < lo - SLACK || value > hi + SLACK {
        return Err(Error::OutOfRange { name, value, range });
    }
    Ok(value.clamp(lo, hi))
}
