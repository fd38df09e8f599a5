use thiserror::Error;

pub type Result<T> = core::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(&'static str),

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    /// A pivot fell below the positive definiteness threshold.
    #[error("matrix is not positive definite (pivot {pivot:e} at index {index})")]
    NotPositiveDefinite { index: usize, pivot: f64 },

    /// The Schur complement recursion produced a block that is not positive definite.
    #[error("Schur complement S_{stage} is not positive definite")]
    SchurNotPositiveDefinite { stage: usize },

    #[error("matrix is not symmetric (max asymmetry {asymmetry:e})")]
    NotSymmetric { asymmetry: f64 },

    #[error("eigenvalue iteration did not converge")]
    NoConvergence,

    #[error("Lanczos breakdown at iteration {iteration}")]
    Breakdown { iteration: usize },

    #[error("geometry map is degenerate (det J = {det:e})")]
    DegenerateGeometry { det: f64 },

    #[error("dense size cap exceeded: {size} > {cap}")]
    DenseCapExceeded { size: usize, cap: usize },

    #[error("point {0} lies outside [0, 1]")]
    OutOfDomain(f64),
}
