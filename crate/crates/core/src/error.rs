use thiserror::Error;

/// Errors produced by the model, the solvers and the simulators.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid parameter `{field}`: {reason}")]
    InvalidParameter { field: String, reason: String },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("theta = {theta} is not a root (|h| = {residual:e})")]
    NotARoot { theta: f64, residual: f64 },

    #[error("({y}, {z}) is not a fixed point of the flow (|f| + |g| = {residual:e})")]
    NotAFixedPoint { y: f64, z: f64, residual: f64 },

    #[error("no sign change of the reduced equation on [0, 2)")]
    NoRoots,

    #[error("stability mismatch at theta = {theta}: h' = {h_prime:e}, det(J) = {determinant:e}")]
    StabilityMismatch {
        theta: f64,
        h_prime: f64,
        determinant: f64,
    },

    #[error("step rejected at t = {t}: stage left the admissible box (dt = {dt} too large?)")]
    StepRejected { t: f64, dt: f64 },

    #[error("total event rate underflowed at t = {t} in state ({n_plus}, {n_minus})")]
    RateUnderflow { t: f64, n_plus: u32, n_minus: u32 },

    #[error("config: {0}")]
    Config(String),
}

impl Error {
    pub(crate) fn invalid(field: impl Into<String>, reason: impl Into<String>) -> Self {
        Error::InvalidParameter {
            field: field.into(),
            reason: reason.into(),
        }
    }

    /// True for errors signalling that two independent stability
    /// criteria disagreed.
    pub fn is_consistency(&self) -> bool {
        matches!(self, Error::StabilityMismatch { .. })
    }
}

pub type Result<T> = std::result::Result<T, Error>;
