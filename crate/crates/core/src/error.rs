use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    Parameter(String),

    #[error("search budget of {budget} nodes exhausted")]
    Budget { budget: u64 },

    #[error("construction undefined: {0}")]
    ConstructionUndefined(String),

    #[error("parse error on line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("multiplicity {0} does not fit the 31-bit serialization field")]
    MultiplicityOverflow(u64),

    /// An emitted object failed independent re-verification. Always a bug.
    #[error("verification failed: {0}")]
    Verification(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn param<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Parameter(msg.into()))
}
