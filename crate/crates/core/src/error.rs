use std::path::PathBuf;

use thiserror::Error;

/// Errors produced by the library and the command-line front end.
#[derive(Debug, Error)]
pub enum Error {
    #[error("{what} = {value} is outside the supported range (limit {limit})")]
    OutOfRange {
        what: &'static str,
        value: u64,
        limit: u64,
    },

    #[error("requested limit {requested} needs {bytes} bytes, over the configured budget of {budget} bytes")]
    Capacity {
        requested: u64,
        bytes: u64,
        budget: u64,
    },

    #[error("table limits differ: {left} vs {right}")]
    LimitMismatch { left: usize, right: usize },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("unknown catalog function `{0}`")]
    UnknownFunction(String),

    #[error("malformed parameter `{value}` for `{name}`")]
    MalformedParameter { name: String, value: String },

    #[error("domain violation: {0}")]
    Domain(String),

    #[error("brute force infeasible: {0}")]
    Infeasible(String),

    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn check_range(what: &'static str, value: u64, limit: u64) -> Result<()> {
    if value > limit {
        Err(Error::OutOfRange { what, value, limit })
    } else {
        Ok(())
    }
}
