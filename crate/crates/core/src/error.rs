//! Error type shared by every module.

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,
    #[error("parse error: {0}")]
    Parse(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("operator is not self-adjoint: {0}")]
    NotSelfAdjoint(String),
    #[error("units have mixed parity: orders {0:?}")]
    MixedParity(Vec<usize>),
    #[error("invalid intertwiner: {0}")]
    InvalidIntertwiner(String),
    #[error("reducible tower: remainder vanished at step {step} with running order {order}")]
    ReducibleTower { step: usize, order: usize },
    #[error("insufficient terms: {required} required, {available} available")]
    InsufficientTerms { required: usize, available: usize },
    #[error("module dimension {dim} exceeds cap {cap}")]
    DimensionCap { dim: usize, cap: usize },
    #[error("degenerate: {0}")]
    Degenerate(String),
    #[error("template mismatch: {0}")]
    TemplateMismatch(String),
    #[error("denominator vanishes at the expansion point")]
    NotExpandable,
    #[error("unknown fixture: {0}")]
    UnknownFixture(String),
    #[error("relation failed: {0}")]
    RelationFailed(String),
    #[error("io error: {0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, Error>;
