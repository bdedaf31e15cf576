use thiserror::Error;

/// Errors raised by the library.
#[derive(Debug, Error)]
pub enum Error {
    #[error("point {0} is not inside the domain")]
    PointOutsideDomain(String),
    #[error("boundary projection did not converge for {0}")]
    ProjectionNotConverged(String),
    #[error("region does not intersect the boundary")]
    RegionMissesBoundary,
    #[error("modulus of continuity is unbounded (infinite cap)")]
    UnboundedModulus,
    #[error("modulus of continuity is not Dini-integrable")]
    NotDini,
    #[error("boundary distances must be strictly positive (got {0}, {1})")]
    NonpositiveDistance(f64, f64),
    #[error("constant c = {0} is out of range (c > 1 required)")]
    ConstantOutOfRange(f64),
    #[error("curve touches the boundary (distance {0:e})")]
    CurveTouchesBoundary(f64),
    #[error("point {point} has boundary distance {distance} below the grid margin {required}")]
    PointTooCloseToBoundary {
        point: String,
        distance: f64,
        required: f64,
    },
    #[error("grid of {0:.0} nodes exceeds the size limit")]
    GridTooLarge(f64),
    #[error("no grid path joins the points inside the search box")]
    Disconnected,
    #[error("normal depth {depth} is not below the reach estimate {reach}")]
    ExceedsReach { depth: f64, reach: f64 },
    #[error("finite-difference step underflow at depth {0:e}")]
    StepUnderflow(f64),
    #[error("nearest boundary point is not unique")]
    FeetNotUnique,
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("configuration error: {0}")]
    Config(String),
    #[error("I/O failure: {0}")]
    Io(#[from] std::io::Error),
    #[error("report parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
