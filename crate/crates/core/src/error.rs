use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("malformed group spec `{spec}`: {reason}")]
    Parse { spec: String, reason: String },

    #[error("group order {order} exceeds the configured cap {cap}")]
    ResourceCap { order: u128, cap: u64 },

    #[error("{classes} conjugacy classes exceed the character-table cap {cap}")]
    ClassCap { classes: usize, cap: usize },

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("character table: {0}")]
    CharacterTable(String),

    #[error("exponential needs division by {0}!, which is not invertible mod p")]
    UnsupportedExponent(u32),
}

impl Error {
    pub(crate) fn parse(spec: &str, reason: impl Into<String>) -> Self {
        Error::Parse { spec: spec.to_string(), reason: reason.into() }
    }

    pub(crate) fn pre(msg: impl Into<String>) -> Self {
        Error::Precondition(msg.into())
    }
}
