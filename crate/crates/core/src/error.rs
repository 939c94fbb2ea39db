use thiserror::Error;

/// Errors raised by the simulation kernel, the analysis layer and the protocol builder.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("invalid state: {0}")]
    InvalidState(String),

    #[error("invalid timeline: {0}")]
    InvalidTimeline(String),

    #[error("infeasible timing: {0}")]
    InfeasibleTiming(String),

    #[error("protocol misconfiguration: {0}")]
    ProtocolMisconfiguration(String),

    #[error("indeterminate readout: excitation probability {0} sits on the decision threshold")]
    Indeterminate(f64),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn ensure_finite(name: &str, value: f64) -> Result<()> {
    if value.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidArgument(format!("{name} must be finite, got {value}")))
    }
}
