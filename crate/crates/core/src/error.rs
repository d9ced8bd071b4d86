use crate::field::FieldTag;

/// Errors shared by every module of the crate.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("field mismatch: {0} vs {1}")]
    FieldMismatch(FieldTag, FieldTag),
    #[error("division by zero")]
    DivisionByZero,
    #[error("no promotion from {from} to {to}")]
    CannotWiden { from: FieldTag, to: FieldTag },
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("matrix is singular")]
    SingularMatrix,
    #[error("exceptional self-intersection must be a nonzero integer")]
    ZeroExceptionalCube,
    #[error("`{0}` is not a root of unity")]
    NotRootOfUnity(String),
    #[error("zero class is not a candidate")]
    ZeroPoint,
    #[error("invalid certificate: {0}")]
    InvalidCertificate(String),
    #[error("invalid model: {0}")]
    InvalidModel(String),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
