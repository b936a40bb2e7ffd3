use crate::model::OperatingRegion;

/// Errors produced by the identification toolkit.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// An input-gain map or regressor was evaluated outside the operating
    /// regions it was identified on.
    #[error("region {region} is outside the domain of {context}")]
    Domain {
        region: OperatingRegion,
        context: &'static str,
    },

    #[error("insufficient data: {0}")]
    InsufficientData(String),

    #[error("numerical failure: {0}")]
    Numerical(String),

    #[error("simulation diverged at step {step} (|nu| = {norm:.3e})")]
    Diverged { step: usize, norm: f64 },
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidArgument(msg.into())
}

pub(crate) fn ensure_finite(name: &str, value: f64) -> Result<()> {
    if value.is_finite() {
        Ok(())
    } else {
        Err(invalid(format!("{name} must be finite, got {value}")))
    }
}
