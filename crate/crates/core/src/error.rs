use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("time series must contain at least one sample")]
    EmptySeries,

    #[error("sample {index} is not finite ({value})")]
    NonFiniteSample { index: usize, value: f64 },

    #[error("length mismatch: left series has {left} samples, right series has {right}")]
    LengthMismatch { left: usize, right: usize },

    #[error("series {left} (length {left_len}) and {right} (length {right_len}) differ in length")]
    UnequalPair {
        left: usize,
        right: usize,
        left_len: usize,
        right_len: usize,
    },

    #[error("band percent must lie in [0, 100], got {0}")]
    InvalidPercent(f64),

    #[error("invalid match epsilon {epsilon} for {mode} mode: {reason}")]
    InvalidEpsilon {
        epsilon: f64,
        mode: &'static str,
        reason: &'static str,
    },

    #[error("dataset needs at least 2 series, found {0}")]
    TooFewSeries(usize),

    #[error("{path}:{line}:{column}: cannot parse `{field}` as a number")]
    ParseField {
        path: String,
        line: usize,
        column: usize,
        field: String,
    },

    #[error("{path}:{line}: expected a label and at least one sample, found {fields} field(s)")]
    ShortLine {
        path: String,
        line: usize,
        fields: usize,
    },

    #[error("{path}:{line}: {source}")]
    InvalidSeries {
        path: String,
        line: usize,
        #[source]
        source: Box<Error>,
    },

    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("not a distance matrix file (bad magic tag)")]
    BadMagic,

    #[error("unsupported matrix format version {found} (expected {expected})")]
    FormatVersion { found: u32, expected: u32 },

    #[error("checksum mismatch: file is truncated or corrupted")]
    Checksum,

    #[error("malformed matrix file: {0}")]
    Malformed(String),

    #[error("graphs are not comparable: {0}")]
    GraphMismatch(String),

    #[error("thread pool: {0}")]
    ThreadPool(String),
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
