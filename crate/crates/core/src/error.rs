use thiserror::Error;

use crate::centrality::ScoreVector;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("graph has no edges")]
    EmptyGraph,

    #[error("degree conditioning: {0}")]
    Conditioning(String),

    #[error("invalid parameter: {0}")]
    Param(String),

    /// The partial result is kept so callers can still inspect it.
    #[error("fixed point not reached after {} iterations", .0.iterations)]
    NotConverged(Box<ScoreVector>),

    #[error(
        "alpha {alpha} would diverge: estimated spectral radius {spectral_radius}, \
         largest accepted alpha is below {threshold}"
    )]
    Divergence {
        alpha: f64,
        spectral_radius: f64,
        threshold: f64,
    },

    #[error("linear system is singular")]
    SingularSystem,

    #[error("graph has {nodes} nodes, above the limit of {limit}")]
    TooLarge { nodes: usize, limit: usize },

    #[error("length mismatch: expected {expected}, found {found}")]
    Shape { expected: usize, found: usize },

    #[error("broadcast log is empty")]
    EmptyLog,

    #[error("insufficient data: need at least {needed}, found {found}")]
    InsufficientData { needed: usize, found: usize },

    #[error("invariant violated at push {push}: {detail}")]
    InvariantViolation { push: u64, detail: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// Short stable identifier, used for machine-readable error lines.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::Parse { .. } => "parse",
            Error::EmptyGraph => "empty_graph",
            Error::Conditioning(_) => "conditioning",
            Error::Param(_) => "param",
            Error::NotConverged(_) => "not_converged",
            Error::Divergence { .. } => "divergence",
            Error::SingularSystem => "singular_system",
            Error::TooLarge { .. } => "too_large",
            Error::Shape { .. } => "shape",
            Error::EmptyLog => "empty_log",
            Error::InsufficientData { .. } => "insufficient_data",
            Error::InvariantViolation { .. } => "invariant_violation",
            Error::Io(_) => "io",
            Error::Csv(_) => "csv",
            Error::Json(_) => "json",
        }
    }
}
