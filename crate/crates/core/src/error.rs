use thiserror::Error;

use crate::syntax::ParseError;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error("{count} distinct atoms exceed the limit of {limit}")]
    AtomLimit { count: usize, limit: usize },
    #[error("search space limit of {limit} candidates exceeded")]
    SearchLimit { limit: usize },
    #[error("cannot decide symbolically: {0}")]
    UnsupportedSymbolic(String),
    #[error("invalid constant specification: {0}")]
    ConstantSpec(String),
    #[error("invalid model: {0}")]
    InvalidModel(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Resource limits shared by the decision procedures.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Limits {
    /// Maximum number of distinct abstract atoms in an entailment check.
    pub atoms: usize,
    /// Maximum number of candidates a bounded search may visit.
    pub search: usize,
}

impl Default for Limits {
    fn default() -> Self {
        Limits { atoms: 24, search: 1 << 20 }
    }
}
