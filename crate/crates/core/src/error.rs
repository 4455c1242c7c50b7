use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("syntax error at position {pos}: {msg}")]
    Syntax { pos: usize, msg: String },

    #[error("unknown letter `{0}`")]
    UnknownLetter(String),

    #[error("alphabet mismatch: {0}")]
    AlphabetMismatch(String),

    #[error("resource limit exceeded: {what} (cap {cap})")]
    Limit { what: &'static str, cap: usize },

    #[error("time budget exhausted")]
    Budget,

    #[error("invalid monoid: {0}")]
    InvalidMonoid(String),

    #[error("invalid input: {0}")]
    Invalid(String),

    #[error("internal invariant violated: {0}")]
    Invariant(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// Resource exhaustion (caps and deadlines) as opposed to bad input.
    pub fn is_resource(&self) -> bool {
        matches!(self, Error::Limit { .. } | Error::Budget)
    }
}
