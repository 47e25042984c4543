use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("cannot coarsen a {height}x{width} grid")]
    CannotCoarsen { height: usize, width: usize },

    #[error("smoothness is undefined for a zero matrix")]
    UndefinedSmoothness,

    #[error("NNLS did not converge within {cap} active-set exchanges")]
    NnlsCapExceeded { cap: u64 },

    #[error("inconsistent dataset: {0}")]
    InconsistentDataset(String),

    #[error("{file}: parse error at byte {offset}: {message}")]
    Parse {
        file: String,
        offset: u64,
        message: String,
    },

    /// 1-based position of the offending entry.
    #[error("negative or non-finite entry at row {row}, column {col}")]
    NonnegativityViolation { row: usize, col: usize },

    #[error("unsupported operation: {0}")]
    Unsupported(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidArgument(msg.into())
    }
}
