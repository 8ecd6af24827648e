use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GmkError {
    #[error("generator index {index} out of range for rank {rank}")]
    SymbolOutOfRange { index: usize, rank: usize },
    #[error("rank mismatch: expected {expected}, got {got}")]
    RankMismatch { expected: usize, got: usize },
    #[error("invalid parameters: {0}")]
    InvalidParameters(String),
    #[error("invalid generator name {0:?}")]
    InvalidName(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("relator {index} has length {len}, expected 4")]
    RelatorLength { index: usize, len: usize },
    #[error("matrix shape error: {0}")]
    Shape(String),
    #[error("matrix is not unipotent")]
    NotUnipotent,
    #[error("not supported: {0}")]
    Unsupported(String),
    #[error("unknown label {0}")]
    UnknownLabel(usize),
    #[error("action does not satisfy relator {0}")]
    RelatorFails(usize),
    #[error("enumeration guard exceeded: {0} candidate words")]
    GuardExceeded(u128),
}

pub type Result<T> = std::result::Result<T, GmkError>;
