use std::path::PathBuf;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid partition: {0}")]
    InvalidPartition(String),

    #[error("contract violation: {0}")]
    Contract(String),

    /// A request exceeded a configured size bound (oracle degree, affine truncation, ...).
    #[error("size limit exceeded: {what} is {value}, limit is {limit}")]
    SizeLimit {
        what: &'static str,
        value: usize,
        limit: usize,
    },

    #[error("cache I/O error at {path}: {source}")]
    CacheIo {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("parse error: {0}")]
    Parse(String),
}

impl Error {
    /// Short machine-readable tag used in structured error output.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::InvalidPartition(_) => "invalid_partition",
            Error::Contract(_) => "contract_violation",
            Error::SizeLimit { .. } => "size_limit",
            Error::CacheIo { .. } => "cache_io",
            Error::Parse(_) => "parse",
        }
    }
}
