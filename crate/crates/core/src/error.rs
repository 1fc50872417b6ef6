//! Error type shared by every module of the crate.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    /// A query fell outside the domain where a model or table is defined.
    #[error("domain error: {0}")]
    Domain(String),

    /// Structurally invalid input (bad table, malformed coefficient file, bad config).
    #[error("invalid input: {0}")]
    Invalid(String),

    /// Numerical abort, e.g. runaway gain or an integrator that cannot meet its tolerance.
    #[error("numerical failure: {0}")]
    Numerical(String),

    /// Internal consistency violation such as broken energy conservation on a pump grid.
    #[error("logic error: {0}")]
    Logic(String),

    #[error("i/o error on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::Invalid(msg.into())
    }

    pub fn io(path: impl AsRef<std::path::Path>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.as_ref().display().to_string(),
            source,
        }
    }
}
