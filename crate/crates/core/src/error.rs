use std::path::PathBuf;

use thiserror::Error;

/// Errors raised anywhere in the engine.
#[derive(Debug, Error)]
pub enum Error {
    #[error("negative entry at ({0}, {1})")]
    NegativeEntry(usize, usize),
    #[error("non-finite entry at ({0}, {1})")]
    NonFinite(usize, usize),
    #[error("matrix has no mass")]
    ZeroMatrix,
    #[error("matrix has an empty shape ({0}x{1})")]
    EmptyShape(usize, usize),
    #[error("{side} {index} carries no probability mass")]
    EmptyRowOrCol { side: Side, index: usize },
    #[error("not a probability distribution: {0}")]
    NotADistribution(String),
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("numerical inconsistency: {0}")]
    NumericalInconsistency(String),
    #[error("beta {0} is outside [0, 1]")]
    BetaOutOfRange(f64),
    #[error("index {index} out of range (limit {limit})")]
    IndexOutOfRange { index: usize, limit: usize },
    #[error("invalid cluster id {id} (cluster count {n_clusters})")]
    InvalidClusterId { id: usize, n_clusters: usize },
    #[error("cannot draw {n_clusters} nonempty clusters from {n_elements} elements")]
    TooManyClusters { n_clusters: usize, n_elements: usize },
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    #[error("bipartite graph is reducible ({0} connected components)")]
    Reducible(usize),
    #[error("state {0} has zero degree")]
    ZeroDegreeNode(usize),
    #[error("aggregated state {0} receives both row and column states")]
    MutualExclusivityViolation(usize),
    #[error("cluster count mismatch: prediction has {pred}, ground truth has {truth}")]
    ClusterCountMismatch { pred: usize, truth: usize },
    #[error("length mismatch: prediction has {pred}, ground truth has {truth}")]
    LengthMismatch { pred: usize, truth: usize },
    #[error("invalid ground truth: {0}")]
    InvalidGroundTruth(String),
    #[error("invalid boundaries: {0}")]
    InvalidBoundaries(String),
    #[error("circulant width {0} outside [1, 30]")]
    KOutOfRange(usize),
    #[error("unknown fixture {0:?}")]
    UnknownFixture(String),
    #[error("parse error at line {line}, column {col}: {msg}")]
    Parse { line: usize, col: usize, msg: String },
    #[error("ragged rows: line {line} has {found} fields, expected {expected}")]
    RaggedRows { line: usize, expected: usize, found: usize },
    #[error("index ({row}, {col}) outside declared {n_rows}x{n_cols}")]
    IndexOutOfDeclaredRange { row: usize, col: usize, n_rows: usize, n_cols: usize },
    #[error("unsupported Matrix Market header: {0}")]
    UnsupportedHeader(String),
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("serialization: {0}")]
    Serialization(String),
}

pub type Result<T> = std::result::Result<T, Error>;

/// Which side of the data matrix an element or cluster lives on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Row,
    Col,
}

impl Side {
    pub fn other(self) -> Side {
        match self {
            Side::Row => Side::Col,
            Side::Col => Side::Row,
        }
    }
}

impl std::fmt::Display for Side {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Side::Row => f.write_str("row"),
            Side::Col => f.write_str("column"),
        }
    }
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io { path: path.into(), source }
    }

    /// True for errors that come from reading or validating input data
    /// rather than from a bad parameter choice.
    pub fn is_data_error(&self) -> bool {
        matches!(
            self,
            Error::NegativeEntry(..)
                | Error::NonFinite(..)
                | Error::ZeroMatrix
                | Error::EmptyShape(..)
                | Error::EmptyRowOrCol { .. }
                | Error::NotADistribution(_)
                | Error::Parse { .. }
                | Error::RaggedRows { .. }
                | Error::IndexOutOfDeclaredRange { .. }
                | Error::UnsupportedHeader(_)
                | Error::Io { .. }
                | Error::Serialization(_)
                | Error::UnknownFixture(_)
        )
    }
}
