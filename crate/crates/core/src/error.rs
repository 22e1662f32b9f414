use thiserror::Error;

/// Errors raised by the algebraic and numerical routines of this crate.
#[derive(Debug, Error)]
pub enum Error {
    #[error("truncation orders differ: {0} vs {1}")]
    OrderMismatch(u32, u32),

    #[error("zero lattice vector has no primitive part")]
    ZeroVector,

    #[error("series precondition violated at term {term}: {reason}")]
    SeriesPrecondition { term: String, reason: String },

    #[error("term {term} does not lie in the tropical vertex algebra: {reason}")]
    NotInAlgebra { term: String, reason: String },

    #[error("invalid wall: {0}")]
    InvalidWall(String),

    #[error("base angle {0} coincides with a wall")]
    AngleOnWall(f64),

    #[error("completion failed: {0}")]
    Completion(String),

    #[error("degenerate cone: {0}")]
    DegenerateCone(String),

    #[error("grid too coarse: spacing {spacing} exceeds {limit}")]
    GridTooCoarse { spacing: f64, limit: f64 },

    #[error("iteration order {requested} exceeds truncation order {order}")]
    IterationOrder { requested: u32, order: u32 },

    #[error("invalid data: {0}")]
    InvalidData(String),

    #[error("json: {0}")]
    Json(#[from] serde_json::Error),

    #[error("io: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// Stable machine-readable name of the error kind.
    pub fn code(&self) -> &'static str {
        match self {
            Error::OrderMismatch(..) => "order_mismatch",
            Error::ZeroVector => "zero_vector",
            Error::SeriesPrecondition { .. } => "series_precondition",
            Error::NotInAlgebra { .. } => "not_in_algebra",
            Error::InvalidWall(_) => "invalid_wall",
            Error::AngleOnWall(_) => "angle_on_wall",
            Error::Completion(_) => "completion",
            Error::DegenerateCone(_) => "degenerate_cone",
            Error::GridTooCoarse { .. } => "grid_too_coarse",
            Error::IterationOrder { .. } => "iteration_order",
            Error::InvalidData(_) => "invalid_data",
            Error::Json(_) => "json",
            Error::Io(_) => "io",
        }
    }
}
