use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("fields live on different eigenbases")]
    BasisMismatch,

    #[error("value out of floating-point range: {0}")]
    Range(String),

    #[error("overflow in mode {mode} (mu = {mu}) at t = {t}")]
    Overflow { mode: usize, mu: f64, t: f64 },

    #[error("time-stepper unstable at t = {t}: energy {energy:e} exceeds 10x envelope {envelope:e}")]
    Unstable { t: f64, energy: f64, envelope: f64 },

    #[error("picard iteration diverging in window ending at t = {t} (iteration {iteration})")]
    Divergence { t: f64, iteration: usize },

    #[error("assumption violated: {0}")]
    Assumption(String),
}

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidArgument(msg.into())
}
