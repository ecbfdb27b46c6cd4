use thiserror::Error;

/// Errors raised by the library.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid polynomial: {0}")]
    InvalidPolynomial(String),
    #[error("precision insufficient: {0}")]
    PrecisionInsufficient(String),
    #[error("degenerate point: {0}")]
    DegeneratePoint(String),
    #[error("projective dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("unsupported number field: {0}")]
    UnsupportedField(String),
    #[error("point is singular on the variety: {0}")]
    SingularPoint(String),
    #[error("projection center not in general position: {0}")]
    NotGeneralPosition(String),
    #[error("desk scale exceeded: {0}")]
    DeskScaleExceeded(String),
    #[error("curves share a common component")]
    CommonComponent,
    #[error("point is not an isolated intersection point")]
    NonIsolatedPoint,
    #[error("improper intersection in multiplicity chain at step {0}")]
    ImproperIntersection(usize),
    #[error("vanishing hypothesis not verified at step {0}")]
    UnverifiedVanishing(usize),
    #[error("no approximant candidate: {0}")]
    NoCandidate(String),
    #[error("search exhausted: {0}")]
    SearchExhausted(String),
    #[error("point meets the projection center: {0}")]
    MeetsCenter(String),
    #[error("too few samples: need {needed}, got {got}")]
    TooFewSamples { needed: usize, got: usize },
    #[error("sequence has a non-positive entry at index {0}")]
    NonPositive(usize),
    #[error("no regularity window: {0}")]
    NoWindow(String),
    #[error("point is off the variety: {0}")]
    PointOffVariety(String),
    #[error("section has a pole at the point: {0}")]
    PoleAtPoint(String),
    #[error("invalid instance: {0}")]
    InvalidInstance(String),
    #[error("configuration error: {0}")]
    Config(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
