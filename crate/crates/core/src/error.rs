use thiserror::Error;

/// Errors raised by the linear-algebra, structure and LMI layers.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("non-finite entry in {0}")]
    NonFinite(String),

    #[error("eigenvalue iteration did not converge")]
    NoConvergence,

    #[error("invalid structure: {0}")]
    InvalidStructure(String),

    /// The structure-set nullspace maps one Q to several distinct Λ.
    #[error("degenerate structure set: {0}")]
    DegenerateStructure(String),

    #[error("matrix inequality program has no constraints")]
    EmptyProgram,

    #[error("{0} is not positive definite")]
    NotPositiveDefinite(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
