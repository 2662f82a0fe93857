//! Exact scalar arithmetic over the Gaussian rationals and exact dense
//! linear algebra — the substrate every other module computes on.

mod matrix;
mod scalar;
mod subspace;

pub use matrix::Matrix;
pub use scalar::Scalar;
pub use subspace::Subspace;

use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ExactNumError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("matrix is {rows}x{cols}, expected square")]
    NotSquare { rows: usize, cols: usize },
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("cannot parse scalar {0:?}")]
    BadScalar(String),
}
