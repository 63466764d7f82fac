use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("unsupported dimension {0} (only 2 and 3 are supported)")]
    UnsupportedDimension(usize),

    #[error("invalid direction: {0}")]
    InvalidDirection(String),

    #[error("invalid line: {0}")]
    InvalidLine(String),

    #[error("invalid body: {0}")]
    InvalidBody(String),

    #[error("invalid function: {0}")]
    InvalidFunction(String),

    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("numeric failure: {0}")]
    Numeric(String),

    #[error("insufficient samples: need at least {needed}, found {found}")]
    InsufficientSamples { needed: usize, found: usize },

    #[error("direction set is rank-deficient; cannot fit a linear form")]
    RankDeficient,

    #[error("degenerate body: {0}")]
    DegenerateBody(String),

    #[error("sample at direction #{direction} offset {offset}: {source}")]
    Sample {
        direction: usize,
        offset: f64,
        #[source]
        source: Box<Error>,
    },

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// True for failures that come from the numerics rather than from bad input.
    pub fn is_numeric(&self) -> bool {
        match self {
            Error::Numeric(_) => true,
            Error::Sample { source, .. } => source.is_numeric(),
            _ => false,
        }
    }
}
