use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("shape mismatch: {0}")]
    Shape(String),

    #[error("matrix is singular")]
    Singular,

    #[error("underdetermined fit: {points} points for {unknowns} unknowns")]
    Arity { points: usize, unknowns: usize },

    #[error("points span an affine space of dimension {found}, expected {expected}")]
    Dimension { found: usize, expected: usize },

    #[error("point is not contained in the polytope")]
    NotContained,

    #[error("cone is not pointed: lineality space of dimension {0}")]
    Lineality(usize),

    #[error("generators are linearly dependent")]
    Degenerate,

    #[error("series did not converge by total order {order} (last order magnitude {last:e})")]
    Divergence { order: usize, last: f64 },

    #[error("internal consistency check failed: {0}")]
    Consistency(String),

    #[error("engine accuracy insufficient: {0}")]
    Accuracy(String),

    #[error("invalid parameters: {0}")]
    Validation(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("size guard: {0}")]
    Size(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
