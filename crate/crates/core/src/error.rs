use thiserror::Error;

/// Errors produced by corpus readers, model IO, training, and inference.
#[derive(Debug, Error)]
pub enum Error {
    /// A text format violation, pointing at the offending input line.
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("invalid sentence: {0}")]
    Sentence(String),
    #[error("invalid tree: {0}")]
    Tree(String),
    #[error("invalid alignment: {0}")]
    Alignment(String),
    #[error("projection: {0}")]
    Projection(String),
    #[error("model: {0}")]
    Model(String),
    #[error("training: {0}")]
    Training(String),
    #[error("config: {0}")]
    Config(String),
    #[error("evaluation: {0}")]
    Eval(String),
    /// Inputs that are individually well-formed but inconsistent with each
    /// other, e.g. a treebank and an alignment file of different lengths.
    #[error("mismatch: {0}")]
    Mismatch(String),
}

impl Error {
    pub fn parse(line: usize, msg: impl Into<String>) -> Self {
        Error::Parse {
            line,
            msg: msg.into(),
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
