use std::path::PathBuf;
use thiserror::Error;

/// Errors surfaced by the library pipeline.
#[derive(Debug, Error)]
pub enum Error {
    /// A zero-token document: no frequency table can be built.
    #[error("empty input: no countable tokens in `{0}`")]
    EmptyInput(String),

    /// A word list and a frequency table were produced under different
    /// lemmatization settings, so a coverage number would be meaningless.
    #[error("config mismatch: list `{list}` was built with {list_setting}, table with {table_setting}")]
    ConfigMismatch {
        list: String,
        list_setting: String,
        table_setting: String,
    },

    /// A log-log fit needs at least three points.
    #[error("rank range too small for fit: {got} points, need at least {need}")]
    RangeTooSmall { got: usize, need: usize },

    #[error("invalid word list file `{path}`: {reason}")]
    InvalidWordList { path: PathBuf, reason: String },

    #[error("invalid lemma dictionary: {0}")]
    InvalidLemmaDictionary(String),

    #[error("invalid threshold `{0}`: must be a fraction in (0, 1]")]
    InvalidThreshold(String),

    #[error("`{path}`: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("`{path}` is not valid UTF-8")]
    NotUtf8 { path: PathBuf },
}

impl Error {
    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
