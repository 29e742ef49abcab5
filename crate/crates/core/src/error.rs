use thiserror::Error;

/// Errors raised while parsing inputs or running the decision procedures.
#[derive(Debug, Error)]
pub enum Error {
    #[error("syntax error at {line}:{column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("variable `{var}` is controlled by both `{first}` and `{second}`")]
    DuplicateVariable {
        var: String,
        first: String,
        second: String,
    },

    #[error("module `{module}` is declared twice")]
    DuplicateModule { module: String },

    #[error("module `{module}` assigns `{var}`, which it does not control")]
    ForeignAssignment { module: String, var: String },

    #[error("module `{module}` assigns `{var}` twice in one command")]
    ConflictingAssignment { module: String, var: String },

    #[error("unknown variable `{var}` in module `{module}`")]
    UnknownVariable { module: String, var: String },

    #[error("invalid arena: {0}")]
    Arena(String),

    #[error("limit of {cap} states exceeded while building {what}")]
    StateCapExceeded { cap: usize, what: &'static str },

    #[error("invalid strategy: {0}")]
    InvalidStrategy(String),

    #[error("initial state is outside the punishment region of a loser")]
    InitialStateEliminated,

    #[error("refusing to synthesise: {0}")]
    Refused(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
