use std::path::PathBuf;

/// Every failure the library reports.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("empty graph")]
    EmptyGraph,
    #[error("vertex {vertex} out of range (n = {n})")]
    VertexOutOfRange { vertex: u64, n: usize },
    #[error("{}:{line}: malformed line: {reason}", path.display())]
    Malformed { path: PathBuf, line: usize, reason: String },
    #[error("{}: {source}", path.display())]
    Io { path: PathBuf, source: std::io::Error },
    #[error("degree distribution undefined for beta = {0}")]
    DegreeDistributionUndefined(f64),
    #[error("open case: beta = {0}")]
    OpenCase(f64),
    #[error("no giant component")]
    NoGiantComponent,
    #[error("formula undefined: {0}")]
    FormulaUndefined(String),
    #[error("degenerate tail: {0}")]
    DegenerateTail(String),
    #[error("insufficient buckets: {0}")]
    InsufficientBuckets(String),
    #[error("RW failed after retry")]
    RwFailed,
    #[error("unknown {kind} '{name}'")]
    Unknown { kind: &'static str, name: String },
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("invalid distribution: {0}")]
    InvalidDistribution(String),
    #[error("label file: {0}")]
    LabelFormat(String),
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io { path: path.into(), source }
    }

    pub(crate) fn param(msg: impl Into<String>) -> Self {
        Error::InvalidParameter(msg.into())
    }

    /// True when the caller supplied bad input rather than the computation failing.
    pub fn is_usage(&self) -> bool {
        !matches!(self, Error::RwFailed | Error::NoGiantComponent)
    }
}

pub type Result<T> = std::result::Result<T, Error>;
