use thiserror::Error;

use crate::coalition::Coalition;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("agent count {0} exceeds the supported maximum of {max}", max = crate::MAX_AGENTS)]
    TooManyAgents(usize),

    #[error("agent count must be at least 1")]
    NoAgents,

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("malformed game: {0}")]
    MalformedGame(String),

    #[error("weight {0} is outside [0, 1]")]
    WeightOutOfRange(String),

    #[error("not a permutation of the agents: {0:?}")]
    NotAPermutation(Vec<usize>),

    #[error("grand-coalition values differ: {0} vs {1}")]
    EfficiencyMismatch(String, String),

    #[error("malformed linear program: {0}")]
    MalformedLp(String),

    #[error("{first} is not a subset of {second}")]
    NotSubset { first: Coalition, second: Coalition },

    #[error("invalid instance: {0}")]
    InvalidInstance(String),

    #[error("the problem does not expose per-agent payoffs for its moves")]
    NoPayoffShares,

    #[error("witness allocation violates the anti-core constraint of coalition {0}")]
    WitnessOutsideAntiCore(Coalition),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),

    #[error("internal consistency check failed: {0}")]
    Internal(String),
}
