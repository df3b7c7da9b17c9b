use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("generator index {index} out of range 1..={ngens}")]
    IndexOutOfRange { index: i64, ngens: usize },
    #[error("invalid presentation: {0}")]
    InvalidPresentation(String),
    #[error("inconsistent presentation: {0}")]
    Inconsistent(String),
    #[error("parse error on line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("subgroup belongs to a different group")]
    ForeignSubgroup,
    #[error("subgroup is not normal")]
    NotNormal,
    #[error("generator count mismatch: expected {expected}, got {got}")]
    GeneratorCountMismatch { expected: usize, got: usize },
    #[error("images do not define a homomorphism")]
    NotHomomorphism,
    #[error("group order {order_log} exceeds the bound p^{bound}")]
    OrderBound { order_log: usize, bound: usize },
    #[error("generator bound exceeded: d = {d}, bound {bound}")]
    GeneratorBound { d: usize, bound: usize },
    #[error("{0}")]
    Precondition(String),
    #[error("unknown label {label:?}; valid labels: {valid}")]
    UnknownLabel { label: String, valid: String },
    #[error("{0}")]
    Input(String),
}

pub type Result<T> = std::result::Result<T, Error>;
