use thiserror::Error;

/// Errors raised by the engine.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("no assignment for variable {0}")]
    MissingAssignment(String),
    #[error("not invertible: {0}")]
    NotInvertible(String),
    #[error("exact division failed: {0}")]
    NotDivisible(String),
    #[error("order bounds differ: {lhs:?} vs {rhs:?}")]
    OrderMismatch { lhs: Option<u32>, rhs: Option<u32> },
    #[error("constant term must be 1, found {0}")]
    ConstantTermNotOne(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("invalid direction ({0}, {1}): expected a coprime pair of positive integers")]
    InvalidDirection(i64, i64),
    #[error("edge is not on this path")]
    EdgeNotOnPath,
    #[error("the requested set of gradings is infinite")]
    InfiniteEnumeration,
    #[error("inconsistent loop product: {0}")]
    Inconsistent(String),
    #[error("endpoint is not generic: {0}")]
    NotGeneric(String),
    #[error("normalization failed: {0}")]
    Normalization(String),
    #[error("basis expansion did not terminate within {0} steps")]
    ExpansionDiverged(usize),
    #[error("parse error at position {pos}: {msg}")]
    Parse { pos: usize, msg: String },
}

pub type Result<T> = std::result::Result<T, Error>;
