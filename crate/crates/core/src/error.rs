use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("configuration error: {0}")]
    Config(String),

    #[error("corpus error: {0}")]
    Corpus(String),

    #[error("taxonomy manifest{}: {message}", at_line(*line))]
    Taxonomy { line: Option<usize>, message: String },

    #[error("lexicon{}: {message}", at_line(*line))]
    Lexicon { line: Option<usize>, message: String },

    #[error("rule file{}: {message}", at_line(*line))]
    Rules { line: Option<usize>, message: String },

    #[error("matrix file{}: {message}", at_line(*line))]
    Matrix { line: Option<usize>, message: String },

    #[error("feature error: {0}")]
    Feature(String),

    #[error("training set is empty")]
    EmptyTrainingSet,

    #[error("non-finite feature value at row {row}, column {column}")]
    NonFinite { row: usize, column: usize },

    #[error("feature width mismatch: expected {expected}, found {found}")]
    WidthMismatch { expected: usize, found: usize },

    #[error("invalid hyperparameter: {0}")]
    Hyperparameter(String),

    #[error("model decode error at byte {offset}: {message}")]
    Decode { offset: usize, message: String },

    #[error("fold assignment: {0}")]
    Folds(String),

    #[error("accuracy: {0}")]
    Accuracy(String),

    #[error("fold {fold}: {source}")]
    InFold {
        fold: usize,
        #[source]
        source: Box<Error>,
    },

    #[error("{stage}: {source}")]
    Stage {
        stage: String,
        #[source]
        source: Box<Error>,
    },
}

fn at_line(line: Option<usize>) -> String {
    line.map(|l| format!(" line {l}")).unwrap_or_default()
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    pub(crate) fn in_stage(self, stage: impl Into<String>) -> Self {
        Error::Stage {
            stage: stage.into(),
            source: Box::new(self),
        }
    }
}
