use thiserror::Error;

/// Errors surfaced by the engine, strategies, oracle and harness.
///
/// `NeedBranch` is not a failure: the enumerating random source returns it
/// when a replay script runs out at a fresh choice point, and the oracle
/// catches it to expand the branch. Real game runs never observe it.
#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum GameError {
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("strategy contract violation: {0}")]
    ContractViolation(String),

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("refused: {0}")]
    Refused(String),

    #[error("branch point with {options} options")]
    NeedBranch { options: usize },

    #[error("internal error: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, GameError>;
