use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("syntax error at {line}:{column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("duplicate symbol `{0}`")]
    DuplicateSymbol(String),

    #[error("negative arity {arity} for symbol `{name}`")]
    NegativeArity { name: String, arity: i64 },

    #[error("unknown identifier `{0}`")]
    UnknownIdentifier(String),

    #[error("symbol `{name}` expects {expected} arguments, got {found}")]
    ArityMismatch {
        name: String,
        expected: usize,
        found: usize,
    },

    #[error("invalid variable set: {0}")]
    InvalidVariables(String),

    #[error("invalid operation table for `{symbol}`: {message}")]
    InvalidTable { symbol: String, message: String },

    #[error("capacity exceeded: {what} needs {needed}, limit is {limit}")]
    Capacity {
        what: &'static str,
        needed: u128,
        limit: u64,
    },

    #[error("unresolved {kind} `{name}`")]
    Unresolved { kind: &'static str, name: String },

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("map is not a homomorphism: {0}")]
    NotHomomorphism(String),

    #[error("partition is not a congruence: {0}")]
    IncompatiblePartition(String),

    #[error("term map image leaves the target set at point {point:?}")]
    ImageEscapes { point: Vec<u32> },
}

impl Error {
    pub(crate) fn capacity(what: &'static str, needed: u128, limit: u64) -> Self {
        Error::Capacity {
            what,
            needed,
            limit,
        }
    }

    pub(crate) fn precondition(msg: impl Into<String>) -> Self {
        Error::Precondition(msg.into())
    }
}
