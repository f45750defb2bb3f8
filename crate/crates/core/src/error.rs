use thiserror::Error;

/// Errors raised while building protocols or estimating security parameters.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum QkdError {
    #[error("configuration error: {0}")]
    Config(String),

    /// No Ψ± clicks were recorded for the settings an estimator needs.
    #[error("estimation error: no Bell-state clicks for {0}")]
    NoClicks(String),

    #[error("estimation error: count table is missing settings for {0}")]
    MissingSettings(String),

    #[error("domain error: {name} = {value} is outside {range}")]
    Domain {
        name: &'static str,
        value: f64,
        range: &'static str,
    },

    /// Statistics that no physical state can produce, e.g. v > 1 in the
    /// RFI key-rate bound.
    #[error("inconsistent statistics: {0}")]
    Inconsistent(String),
}

impl QkdError {
    /// True for errors that originate in the estimation / security math
    /// rather than in the configuration.
    pub fn is_estimation(&self) -> bool {
        !matches!(self, QkdError::Config(_))
    }
}

pub type Result<T> = std::result::Result<T, QkdError>;
