use thiserror::Error;

/// Errors produced anywhere in the pipeline.
///
/// The CLI maps these onto its exit-code contract: [`Error::Io`] and
/// [`Error::Usage`] exit 2, everything else exits 1.
#[derive(Debug, Error)]
pub enum Error {
    #[error("I/O error on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },

    #[error("{path}:{line}: {message}")]
    Parse {
        path: String,
        line: usize,
        message: String,
    },

    #[error("dimension mismatch: expected {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },

    #[error("cosine distance undefined for zero-norm vector (degenerate embedding)")]
    ZeroNormVector,

    #[error("empty embedding file: {0}")]
    EmptyEmbeddingFile(String),

    #[error("duplicate paragraph id: {0}")]
    DuplicateId(String),

    #[error("{rejected} of {total} records rejected:\n{report}")]
    RecordsRejected {
        rejected: usize,
        total: usize,
        report: String,
    },

    #[error("tagger command failed (exit {status}): {stderr}")]
    TaggerFailed { status: i32, stderr: String },

    #[error("group {0} is outside the feature layout")]
    UnknownGroup(String),

    #[error("training set is empty")]
    EmptyTrainingSet,

    #[error("training requires both classes; only {0:?} present")]
    SingleClass(String),

    #[error("non-finite feature value in row {0}")]
    NonFiniteFeature(String),

    #[error("layout mismatch: model bound to {model}, features carry {data}")]
    LayoutMismatch { model: String, data: String },

    #[error("unsupported model schema version {0}")]
    SchemaVersion(u32),

    #[error("fold count must be at least 2, got {0}")]
    FoldCountTooSmall(usize),

    #[error("class {class} has {rows} rows, fewer than {k} folds")]
    ClassSmallerThanFolds {
        class: String,
        rows: usize,
        k: usize,
    },

    #[error("equal error rate needs scores from both classes")]
    EerSingleClass,

    #[error("{0}")]
    Usage(String),
}

impl Error {
    pub fn io(path: impl Into<String>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    pub fn parse(path: impl Into<String>, line: usize, message: impl Into<String>) -> Self {
        Error::Parse {
            path: path.into(),
            line,
            message: message.into(),
        }
    }

    /// Exit code under the CLI contract: 2 for usage/IO, 1 for domain errors.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Io { .. } | Error::Usage(_) => 2,
            _ => 1,
        }
    }
}
