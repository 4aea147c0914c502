use thiserror::Error;

/// Errors produced by the algebra, Peirce, operator and cone routines.
#[derive(Debug, Error)]
pub enum Error {
    #[error("elements or operators belong to different algebras")]
    DescriptorMismatch,

    #[error("invalid algebra descriptor: {0}")]
    InvalidAlgebra(String),

    #[error("expected {expected} coordinates, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("element is not an idempotent (residual {residual:.3e})")]
    InvalidIdempotent { residual: f64 },

    #[error("invalid Jordan frame: {0}")]
    InvalidFrame(String),

    #[error("operator is not self-adjoint (asymmetry {asymmetry:.3e})")]
    NotSelfAdjoint { asymmetry: f64 },

    #[error("generators outside the symmetric cone at positions {offenders:?}")]
    InvalidGenerator { offenders: Vec<usize> },

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("hypothesis violated: {0}")]
    HypothesisViolation(String),

    #[error("numerical failure: {0}")]
    NumericalFailure(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
