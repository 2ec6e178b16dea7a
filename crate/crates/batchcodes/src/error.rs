use thiserror::Error;

/// Errors produced by constructions, verifiers and searches.
#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("generator matrix is not full rank over GF(2)")]
    NotFullRank,

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("index {index} out of range [0, {bound})")]
    IndexOutOfRange { index: usize, bound: usize },

    #[error("search budget exceeded while {context} (limit {limit})")]
    BudgetExceeded { context: String, limit: u64 },

    #[error("hypergraph is not uniform")]
    NotUniform,

    #[error("hypergraph is not Berge-connected")]
    Disconnected,

    #[error("sparsity condition fails for kappa = {kappa}: edges {edges:?} span too few vertices")]
    ConditionViolated { kappa: usize, edges: Vec<usize> },

    #[error("no vertex outside the component can be used for re-wiring")]
    NoOutsideVertex,

    #[error("re-wiring did not converge within the iteration cap")]
    RewireDiverged,

    #[error("slope set is not free of 3-term arithmetic progressions: {0:?}")]
    NotProgressionFree(Vec<usize>),

    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("first batch of the workload cannot be served with disjoint recovery sets")]
    UnsatisfiableFirstBatch,

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error("JSON error: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
