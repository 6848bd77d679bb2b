use thiserror::Error;

use crate::poly::VarId;
use crate::split::SplitTree;

pub type Result<T> = std::result::Result<T, Error>;

/// Which split limit was hit.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Limit {
    MaxLeaves(usize),
    MaxDepth(usize),
}

impl std::fmt::Display for Limit {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Limit::MaxLeaves(n) => write!(f, "max_leaves={n}"),
            Limit::MaxDepth(n) => write!(f, "max_depth={n}"),
        }
    }
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("integer overflow in coefficient arithmetic")]
    Overflow,
    #[error("variable {0} is in the support but not bound by the assignment")]
    UnboundVariable(VarId),
    #[error("polynomial has no variables to split on")]
    EmptySupport,
    #[error("split limit exceeded ({limit})")]
    LimitExceeded {
        limit: Limit,
        /// Tree built so far, when the caller asked for a materialized tree.
        partial: Option<Box<SplitTree>>,
    },
    #[error("degree too high for QUBO export: monomial {0} has order > 2")]
    DegreeTooHigh(String),
    #[error("syntax error at line {line}, column {column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("malformed polynomial document: {0}")]
    Malformed(String),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error("{count} variables exceed the exhaustive-search limit of {limit}")]
    TooManyVariables { count: usize, limit: usize },
    #[error("variables must be pairwise distinct")]
    DuplicateVariables,
    #[error("auxiliary variable {0} already occurs in the polynomial")]
    NonFreshAux(VarId),
    #[error("auxiliary budget of {0} variables exceeded")]
    AuxBudgetExceeded(usize),
    #[error("d-sequence is empty")]
    EmptySequence,
    #[error("expansion would produce more than {0} raw terms")]
    ExpansionTooLarge(usize),
    #[error("invalid options: {0}")]
    InvalidOptions(String),
}
