use thiserror::Error;

/// Crate-wide error type.
#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("unknown label: {0}")]
    UnknownLabel(String),

    #[error("{0} requires a normed space")]
    NormedSpaceRequired(&'static str),

    #[error("norm not differentiable at {context}; a subgradient sample is available as fallback")]
    NonDifferentiable { context: String },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("infeasible transport instance: {0}")]
    Infeasible(String),

    #[error("zero mass: {0}")]
    ZeroMass(String),

    #[error("non-finite cost: {0}")]
    NonFiniteCost(String),

    #[error("numerical failure: {0}")]
    Numerical(String),

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
