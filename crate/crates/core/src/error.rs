use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

/// Errors surfaced by the library. Diagnostic validation uses
/// [`crate::model::Violation`] lists instead and never aborts.
#[derive(Debug, Error)]
pub enum Error {
    #[error("base station index {index} out of range (n = {n})")]
    BsIndex { index: usize, n: usize },

    #[error("scoring a transfer requires two distinct base stations (both {0})")]
    SameNode(usize),

    #[error("no drone docked at base station {bs}, slot {slot}")]
    AbsentDrone { bs: usize, slot: usize },

    #[error("trace needs at least two present values, found {0}")]
    InsufficientTraceData(usize),

    #[error("trace file line {line}: {msg}")]
    TraceParse { line: usize, msg: String },

    #[error("trace shape mismatch: {0}")]
    TraceShape(String),

    #[error("plan text line {line}: {msg}")]
    PlanParse { line: usize, msg: String },

    #[error("instance exceeds exhaustive search bounds: {0}")]
    OracleBound(String),

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("simulation horizon exhausted at hour {0}")]
    EndOfHorizon(usize),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
