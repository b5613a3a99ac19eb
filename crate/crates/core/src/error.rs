use std::path::PathBuf;

use crate::classify::ClassifierKind;
use crate::encoding::EncodingKind;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("invalid ordinal scale: {0}")]
    InvalidScale(String),

    #[error("class {class} is outside the scale 1..={class_count}")]
    InvalidClass { class: usize, class_count: usize },

    #[error("classifier {classifier:?} cannot decode {encoding:?} targets")]
    Incompatible {
        encoding: EncodingKind,
        classifier: ClassifierKind,
    },

    #[error("model output has zero norm; cosine similarity is undefined")]
    DegenerateOutput,

    #[error("shape mismatch in {what}: expected {expected}, got {actual}")]
    ShapeMismatch {
        what: &'static str,
        expected: usize,
        actual: usize,
    },

    #[error("kappa is undefined: chance agreement equals 1")]
    UndefinedKappa,

    #[error("empty input: {0}")]
    Empty(&'static str),

    #[error("non-finite value encountered: {0}")]
    NonFinite(String),

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("line {line}: schema violation: {message}")]
    Schema { line: usize, message: String },

    #[error("sample has no label for finding `{0}`")]
    MissingFinding(String),

    #[error("need at least {needed} distinct patients, found {found}")]
    TooFewPatients { needed: usize, found: usize },

    #[error("every fold of encoding {0:?} failed to train")]
    AllFoldsFailed(EncodingKind),
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    /// Process exit code used by the command line tool.
    ///
    /// 1 is a usage or configuration problem, 2 a data problem and 3 a
    /// training failure.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::InvalidScale(_) | Error::Incompatible { .. } | Error::Config(_) => 1,
            Error::NonFinite(_) | Error::AllFoldsFailed(_) => 3,
            _ => 2,
        }
    }
}
