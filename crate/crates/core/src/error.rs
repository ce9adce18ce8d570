use thiserror::Error;

/// Errors raised across the crate.
#[derive(Debug, Error)]
pub enum Error {
    #[error("graph on {n} vertices exceeds the limit of {limit}")]
    TooManyVertices { n: usize, limit: usize },
    #[error("vertex {vertex} out of range for a graph on {n} vertices")]
    VertexOutOfRange { vertex: usize, n: usize },
    #[error("pair ({0}, {0}) is not a pair of distinct vertices")]
    SelfPair(usize),
    #[error("graph has {n} vertices but at least {k} are required")]
    TooFewVertices { n: usize, k: usize },
    #[error("graphs have different orders ({0} and {1})")]
    OrderMismatch(usize, usize),
    #[error("graph is not complete partite")]
    NotCompletePartite,
    #[error("invalid vector: {0}")]
    InvalidVector(String),
    #[error("invalid objective: {0}")]
    InvalidObjective(String),
    #[error("invalid partition: {0}")]
    InvalidPartition(String),
    #[error("index {0} is not in the extended support")]
    IndexOutsideSupport(usize),
    #[error("enumeration bound exceeded: {0}")]
    BoundExceeded(String),
    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("invalid rational {0:?}")]
    BadRational(String),
    #[error("no monotone clone available at step {step}: both clonings decrease the objective")]
    NoMonotoneClone { step: usize },
    #[error("symmetrisation did not terminate within {0} steps")]
    NoTermination(usize),
    #[error("polynomial error: {0}")]
    Polynomial(String),
    #[error("matrix error: {0}")]
    Matrix(String),
    #[error("search budget exhausted: {0}")]
    Budget(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
