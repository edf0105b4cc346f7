use rug::Integer;
use thiserror::Error;

/// Errors shared by every module in the crate.
///
/// Each variant carries a stable machine-readable code (see [`Error::code`])
/// so that frontends can map failures without parsing messages.
#[derive(Error, Debug)]
pub enum Error {
    #[error("dimension mismatch: expected {expected} coordinates, got {got}")]
    Dimension { expected: usize, got: usize },

    #[error("invalid equation: {reason}")]
    InvalidEquation { reason: String },

    #[error("invalid point: {reason}")]
    InvalidPoint { reason: String },

    #[error("invalid word at position {position}: {reason}")]
    InvalidWord { position: usize, reason: String },

    #[error("invalid argument: {reason}")]
    InvalidArgument { reason: String },

    #[error("point is not a solution (residual {residual})")]
    NotASolution { residual: Integer },

    #[error("mutation in direction {direction} is not integral (remainder {remainder})")]
    NonIntegralRoot { direction: usize, remainder: Integer },

    #[error("mutation in direction {direction} leaves the positive orthant (value {value})")]
    DeadEnd { direction: usize, value: Integer },

    #[error("descent stuck at a non-root point (max coordinate {max} did not decrease)")]
    NonDecreasingStep { point: Vec<Integer>, max: Integer },

    #[error("resource limit exceeded: {what} {got} > {cap}")]
    ResourceLimit {
        what: &'static str,
        got: u64,
        cap: u64,
    },

    #[error("deformation schedule exhausted: step {needed} requested, {available} available")]
    ScheduleExhausted { needed: usize, available: usize },

    #[error("division by zero in coordinate {index}")]
    DivisionByZero { index: usize },

    #[error("step {step} failed: {source}")]
    StepFailed {
        step: usize,
        #[source]
        source: Box<Error>,
    },

    #[error("internal consistency check failed: {what} deviated by {deviation:e}")]
    ConsistencyCheck { what: &'static str, deviation: f64 },
}

impl Error {
    /// Stable machine-readable error code, suitable for scripting.
    pub fn code(&self) -> &'static str {
        match self {
            Error::Dimension { .. } => "DimensionError",
            Error::InvalidEquation { .. } => "InvalidEquation",
            Error::InvalidPoint { .. } => "InvalidPoint",
            Error::InvalidWord { .. } => "InvalidWord",
            Error::InvalidArgument { .. } => "InvalidArgument",
            Error::NotASolution { .. } => "NotASolution",
            Error::NonIntegralRoot { .. } => "NonIntegralRoot",
            Error::DeadEnd { .. } => "DeadEnd",
            Error::NonDecreasingStep { .. } => "NonDecreasingStep",
            Error::ResourceLimit { .. } => "ResourceLimit",
            Error::ScheduleExhausted { .. } => "ScheduleError",
            Error::DivisionByZero { .. } => "DivisionByZero",
            Error::StepFailed { source, .. } => source.code(),
            Error::ConsistencyCheck { .. } => "ConsistencyCheck",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
