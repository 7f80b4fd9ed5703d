use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("self-loop on vertex {vertex}{}", line.map(|l| format!(" at line {l}")).unwrap_or_default())]
    SelfLoop { vertex: usize, line: Option<usize> },

    #[error("graph has no edges")]
    EmptyGraph,

    #[error("dimension mismatch: expected {expected}, got {found}")]
    Dimension { expected: usize, found: usize },

    #[error("infeasible parameters: beta = {beta} exceeds 2 * alpha = {}", 2.0 * alpha)]
    Infeasible { alpha: f64, beta: f64 },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("graph has {n} vertices, exact enumeration is capped at {cap}")]
    TooLarge { n: usize, cap: usize },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
