use thiserror::Error;

use crate::normalize::Obstruction;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("matrix is not square ({rows} rows, row of length {cols})")]
    NotSquare { rows: usize, cols: usize },

    #[error("tolerance must be finite and non-negative, got {0}")]
    InvalidTolerance(f64),

    #[error("expected dimension {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("generator {index} is not invertible (|det| = {det:e})")]
    NotInvertible { index: usize, det: f64 },

    #[error("generator {index} has a non-finite entry")]
    NonFinite { index: usize },

    #[error("subset-sum enumeration needs n <= {max} for non-monomial matrices, got n = {n}")]
    DimensionTooLarge { n: usize, max: usize },

    #[error("generator {index} is not monomial")]
    NotMonomial { index: usize },

    #[error("no positive diagonal scaling exists: {0}")]
    UnboundedGroup(Box<Obstruction>),

    #[error("expected a positive input, got {0}")]
    NonPositiveInput(f64),

    #[error("scale base must exceed 1, got {0}")]
    InvalidBase(f64),

    #[error("eta profile violates eta(b) = b * eta(1): residual {residual:e} exceeds tolerance {tol:e}")]
    EndpointViolation { residual: f64, tol: f64 },

    #[error("invalid eta profile: {0}")]
    InvalidProfile(String),

    #[error("{points} points exceed the limit of {max}")]
    SizeExceeded { points: u128, max: usize },

    #[error("invalid permutation: {0}")]
    InvalidPermutation(String),

    #[error("actions carry {left} and {right} generators; they must be parallel lists")]
    GeneratorCountMismatch { left: usize, right: usize },

    #[error("{what}: expected {expected} values, got {found}")]
    CountMismatch { what: &'static str, expected: usize, found: usize },

    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
}
