use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("non-finite value {value} at x = {x}")]
    Sampling { x: f64, value: f64 },
    #[error("non-finite value {value} at (x, y) = ({x}, {y})")]
    Sampling2D { x: f64, y: f64, value: f64 },
    #[error("index {index} out of range 0..={max}")]
    Index { index: usize, max: usize },
    #[error("sweep could not resolve cell {0}")]
    Sweep(usize),
    #[error("singular system in dense solve")]
    Singular,
    #[error("non-finite solution at step {step}")]
    Diverged { step: usize },
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::InvalidArgument(msg.into()))
}
