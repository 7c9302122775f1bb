use thiserror::Error;

/// Errors raised by the library.
#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum Error {
    #[error("operands use different symbol tables")]
    TableMismatch,

    #[error("sign undecided at {bits} bits of working precision (opaque data cannot resolve the comparison)")]
    PrecisionExhausted { bits: u32 },

    #[error("search budget of {budget} nodes exhausted while refining {inputs} lengths")]
    SearchBudgetExceeded { budget: u64, inputs: usize },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("ambient multirectangles differ")]
    AmbientMismatch,

    #[error("unknown symbol `{0}`")]
    UnknownSymbol(String),

    #[error("invalid symbol table: {0}")]
    InvalidSymbols(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("invalid map: {0}")]
    InvalidMap(String),

    #[error("parse error at {location}: {message}")]
    Parse { location: String, message: String },
}

impl Error {
    pub(crate) fn pre(msg: impl Into<String>) -> Self {
        Error::Precondition(msg.into())
    }

    pub(crate) fn parse(location: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Parse {
            location: location.into(),
            message: message.into(),
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
