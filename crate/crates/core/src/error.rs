use thiserror::Error;

/// Position-annotated error from the loop DSL parser.
#[derive(Clone, Debug, PartialEq, Eq, Error)]
#[error("{line}:{column}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum Error {
    #[error("parse error at {0}")]
    Parse(#[from] ParseError),
    #[error("invalid loop program: {0}")]
    InvalidProgram(String),
    #[error("initial vector has {got} entries, loop has {expected} variables")]
    ArityMismatch { expected: usize, got: usize },
    #[error("power needed for non-degeneracy is {required}, above the cap {cap}")]
    PowerCap { required: u64, cap: u64 },
    #[error("division by zero")]
    DivisionByZero,
    #[error("budget exceeded: {0}")]
    Budget(String),
}

pub type Result<T> = std::result::Result<T, Error>;
