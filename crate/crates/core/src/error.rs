use thiserror::Error;

/// Errors raised across the crate.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid puzzle spec (n={gods}, m={random}, k={truthful}): {reason}")]
    InvalidSpec {
        gods: usize,
        random: usize,
        truthful: usize,
        reason: &'static str,
    },

    #[error("assignment {assignment} does not match spec {spec}")]
    AssignmentMismatch { assignment: String, spec: String },

    #[error("invalid assignment string {0:?}")]
    InvalidAssignment(String),

    #[error("god g{god} is out of range for a {gods}-god puzzle")]
    GodOutOfRange { god: usize, gods: usize },

    #[error("syntax error at column {column}: {message}")]
    Syntax { column: usize, message: String },

    #[error("strategy format error at line {line}, column {column}: {message}")]
    StrategyFormat {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("strategy error at node {path}: {message}")]
    Strategy { path: String, message: String },

    #[error("unknown built-in strategy {0:?}")]
    UnknownBuiltin(String),

    #[error("unknown word {0:?}; expected 'χ' or '_'")]
    UnknownWord(String),

    #[error(
        "puzzle {spec} is unsolvable: {random} random gods is not strictly less than {non_random} non-random gods"
    )]
    Unsolvable {
        spec: String,
        random: usize,
        non_random: usize,
    },

    #[error("search budget of {budget} nodes exceeded")]
    BudgetExceeded { budget: u64 },

    #[error("{0}")]
    Domain(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
