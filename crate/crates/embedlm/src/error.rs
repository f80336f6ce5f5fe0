//! Error types shared across the crate.

use std::path::PathBuf;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    /// A malformed record in a vector file, tokenized-vectors file, or
    /// checkpoint. `origin` names the file (or `"<memory>"` for in-memory
    /// parses) and `line` is 1-based.
    #[error("{origin}:{line}: {kind}")]
    Parse {
        origin: String,
        line: usize,
        kind: ParseErrorKind,
    },

    #[error("{context}: expected dimension {expected}, got {got}")]
    DimensionMismatch {
        context: String,
        expected: usize,
        got: usize,
    },

    /// A request that is structurally impossible to satisfy: empty inputs,
    /// out-of-range configuration, mismatched vocabularies, and the like.
    #[error("{0}")]
    InvalidInput(String),

    #[error("cosine distance is undefined for a zero-norm {0} vector")]
    ZeroNorm(&'static str),
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    pub(crate) fn parse(origin: &str, line: usize, kind: ParseErrorKind) -> Self {
        Error::Parse {
            origin: origin.to_string(),
            line,
            kind,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseErrorKind {
    #[error("no records")]
    NoRecords,

    #[error("record has no vector components")]
    NoComponents,

    #[error("expected {expected} vector components, found {got}")]
    ComponentCount { expected: usize, got: usize },

    #[error("invalid number {text:?}")]
    InvalidNumber { text: String },

    #[error("non-finite vector component {text:?}")]
    NonFinite { text: String },

    #[error("duplicate token {token:?}")]
    DuplicateToken { token: String },

    #[error("empty token field")]
    EmptyToken,

    #[error("token contains whitespace")]
    TokenWhitespace,

    /// Structural problems in the checkpoint format.
    #[error("{0}")]
    Malformed(String),
}
