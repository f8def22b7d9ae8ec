use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("blank term")]
    BlankTerm,

    #[error("empty lexicon `{0}`")]
    EmptyLexicon(String),

    #[error("lexicon `{name}` is not valid UTF-8 text")]
    LexiconFormat { name: String },

    #[error("duplicate lexicon `{0}`")]
    DuplicateLexicon(String),

    #[error("missing lexicon `{0}`")]
    MissingLexicon(String),

    #[error("unknown lexicon `{0}`")]
    UnknownLexicon(String),

    #[error("malformed URL `{0}`")]
    MalformedUrl(String),

    #[error("unknown attribute `{0}`")]
    UnknownAttribute(String),

    #[error("both class weights are zero")]
    ZeroWeights,

    #[error("degenerate class distribution: training rows must contain both classes")]
    DegenerateClasses,

    #[error("invalid training configuration: {0}")]
    InvalidConfig(String),

    #[error("entry {0} has no gold label")]
    Unlabeled(usize),

    #[error("invalid model: {0}")]
    InvalidModel(String),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{path}: {message}")]
    Manifest { path: PathBuf, message: String },

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
