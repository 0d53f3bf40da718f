use thiserror::Error;

use crate::fock::BlockKey;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("block (N={n}, m={m}) is empty: |m| must not exceed N")]
    EmptyBlock { n: u32, m: i32 },

    /// A caller broke a documented precondition (wrong scope, bad label, ...).
    #[error("contract violation: {0}")]
    Contract(String),

    #[error("numerical failure in block {block:?}: {reason}")]
    Numerical {
        block: Option<BlockKey>,
        reason: String,
    },

    #[error("full-basis dimension {required} exceeds the dense cap {allowed}")]
    Resource { required: usize, allowed: usize },

    #[error("config error in `{field}`: {reason}")]
    Config { field: String, reason: String },

    #[error("i/o error: {0}")]
    Io(String),
}

impl Error {
    pub(crate) fn contract(msg: impl Into<String>) -> Self {
        Error::Contract(msg.into())
    }

    pub(crate) fn config(field: impl Into<String>, reason: impl Into<String>) -> Self {
        Error::Config {
            field: field.into(),
            reason: reason.into(),
        }
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
