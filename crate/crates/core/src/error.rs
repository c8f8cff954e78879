use std::path::PathBuf;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch in {context}: expected {expected}, got {actual}")]
    Dimension {
        context: &'static str,
        expected: usize,
        actual: usize,
    },
    #[error("shape error: {0}")]
    Shape(String),
    #[error("optimizer state error: {0}")]
    State(String),
    #[error("parse error at byte {offset}: {message}")]
    Parse { offset: usize, message: String },
    #[error("{path}:{line}: {message}")]
    Ingest {
        path: PathBuf,
        line: usize,
        message: String,
    },
    #[error("duplicate id `{0}`")]
    DuplicateId(String),
    #[error("format error: {0}")]
    Format(String),
    #[error("document has no tokens")]
    EmptyDocument,
    #[error("cannot build a relation vocabulary from zero trees")]
    EmptyVocab,
    #[error("configuration error: {0}")]
    Config(String),
    #[error("invalid tree: {0}")]
    Validation(String),
    #[error("tree has a single EDU and cannot be classified")]
    DegenerateTree,
    #[error("nothing to evaluate")]
    EmptyEvaluation,
    #[error("training diverged on document `{doc_id}`")]
    TrainingDiverged { doc_id: String },
    #[error("checkpoint error: {0}")]
    Checkpoint(String),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
