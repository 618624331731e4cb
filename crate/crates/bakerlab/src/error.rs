use crate::comb::Rep;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum BakerError {
    #[error("operation requires the {expected:?} representation, got {got:?}")]
    RepMismatch { expected: Rep, got: Rep },
    #[error("mixed representations in one comb state")]
    MixedRep,
    #[error("states built for different N ({0} vs {1})")]
    ParamsMismatch(u32, u32),
    #[error("basis index {index} out of range for dimension {dim}")]
    IndexOutOfRange { index: usize, dim: usize },
    #[error("N must be even (got N={0})")]
    OddDimension(u32),
    #[error("N must be odd (got N={0})")]
    EvenDimension(u32),
    #[error("zero-norm state")]
    ZeroNorm,
    #[error("negative residual norm squared beyond rounding tolerance: {0:e}")]
    NegativeResidual(f64),
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, BakerError>;
