use thiserror::Error;

use crate::field::FieldError;
use crate::linalg::LinalgError;
use crate::poly::PolyError;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error("generator is not homogeneous: {0}")]
    NotHomogeneous(String),
    #[error("index out of range: {0}")]
    Range(String),
    #[error("{what} did not stabilize within the degree cap {cap}")]
    Truncation { what: String, cap: u32 },
    #[error("hypothesis not satisfied: {0}")]
    Hypothesis(String),
    #[error("dimension error: {0}")]
    Dimension(String),
    #[error("no generic choice found after {attempts} attempts: {what}")]
    Genericity { what: String, attempts: usize },
    #[error("line {line}: {msg}")]
    Format { line: usize, msg: String },
    #[error("wrong monomial order: {0}")]
    Order(String),
    #[error("undefined for the unit ideal: {0}")]
    UnitIdeal(String),
}

pub type Result<T> = std::result::Result<T, Error>;
