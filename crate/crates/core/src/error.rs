use thiserror::Error;

/// Errors raised by the numerical routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("fractional order must satisfy 0 < alpha <= 1, got {0}")]
    InvalidOrder(f64),

    #[error("invalid solver configuration: {0}")]
    InvalidConfig(String),

    #[error("invalid model parameter: {0}")]
    InvalidParams(String),

    #[error("non-finite state encountered at step {step}")]
    NonFiniteState { step: usize },

    #[error("series did not converge within {terms} terms")]
    ConvergenceFailure { terms: usize },

    #[error("iteration did not converge after {iterations} iterations (residual {residual:e})")]
    NoConvergence { iterations: usize, residual: f64 },

    #[error("need at least {needed} inter-spike intervals, got {got}")]
    InsufficientSpikes { needed: usize, got: usize },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T> = std::result::Result<T, Error>;
