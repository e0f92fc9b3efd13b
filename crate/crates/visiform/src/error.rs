//! Crate-wide error type.

use thiserror::Error;

/// Errors produced while loading, validating, or processing interface data.
#[derive(Debug, Error)]
pub enum Error {
    /// A document could not be parsed at all.
    #[error("parse error in {path}: {detail}")]
    Parse { path: String, detail: String },

    /// A document parsed but violates an invariant. The message names the
    /// offending element or entry.
    #[error("validation error: {0}")]
    Validation(String),

    /// Two trees cannot be compared because their leaf universes differ.
    #[error("trees are not comparable: {0}")]
    NotComparable(String),

    /// An operation needs more input than it was given (e.g. an empty
    /// field list or an empty corpus manifest).
    #[error("degenerate input: {0}")]
    DegenerateInput(String),

    /// A synthetic spec cannot be realized on the page.
    #[error("generation error: {0}")]
    Generation(String),

    /// Layout and trace documents do not describe the same interface.
    #[error("layout/trace mismatch: {0}")]
    TraceMismatch(String),

    #[error("io error on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    pub(crate) fn io(path: impl Into<String>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
