use thiserror::Error;

use crate::kb::ParseError;

pub type Result<T, E = IncaError> = std::result::Result<T, E>;

#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum IncaError {
    #[error("{0}")]
    Parse(#[from] ParseError),

    #[error("formula is not ground: {0}")]
    Groundedness(String),

    #[error("capacity exceeded: {what} is {actual}, cap is {cap}")]
    Capacity {
        what: &'static str,
        actual: usize,
        cap: usize,
    },

    #[error("environmental knowledge base is inconsistent (no distribution satisfies it)")]
    InconsistentKb,

    #[error("evidence makes the environmental model inconsistent; conflicting formulas: {}", conflict.join("; "))]
    InconsistentEvidence { conflict: Vec<String> },

    #[error("invalid world distribution: {0}")]
    Distribution(String),

    #[error("sort error: {0}")]
    Sort(String),

    #[error("invalid probabilistic formula: {0}")]
    InvalidProbability(String),

    #[error("invalid knowledge base: {0}")]
    Invalid(String),

    #[error("internal inconsistency: {0}")]
    InternalInconsistency(String),
}
