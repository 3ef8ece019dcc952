use thiserror::Error;

/// Errors raised by the simulation library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid parameter `{name}` = {value}: {reason}")]
    InvalidParameter {
        name: &'static str,
        value: f64,
        reason: &'static str,
    },

    #[error("time must be non-negative, got {0}")]
    NegativeTime(f64),

    #[error("step {step} is too coarse; at most {max} is required to resolve the oscillation")]
    StepTooCoarse { step: f64, max: f64 },

    #[error("operation requires strong coupling (lambda < 2W), got lambda/W = {lambda_over_w}")]
    RequiresStrongCoupling { lambda_over_w: f64 },

    #[error("invalid partition: {0}")]
    InvalidPartition(String),

    #[error("not a valid density matrix: {0}")]
    InvalidDensityMatrix(String),

    #[error("eigenvalue iteration did not converge after {0} sweeps")]
    NoConvergence(usize),

    #[error("numeric scan is under-resolved: {0}")]
    UnderResolved(String),

    #[error("ordering is not applicable: {0}")]
    NotApplicable(&'static str),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
