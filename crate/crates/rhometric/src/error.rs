use thiserror::Error;

/// Errors shared across the crate.
#[derive(Debug, Error)]
pub enum Error {
    #[error("point ({0}, {1}) is outside the domain")]
    PointOutsideDomain(f64, f64),
    #[error("sampling mode not supported for this domain")]
    UnsupportedMode,
    #[error("invalid address digit '{0}'")]
    InvalidDigit(char),
    #[error("invalid ratio {0}: must lie in (0, 1/2)")]
    InvalidRatio(f64),
    #[error("schedule must be strictly increasing")]
    ScheduleNotIncreasing,
    #[error("constraint violated: {0}")]
    ConstraintViolated(String),
    #[error("argument t={0} out of range")]
    TOutOfRange(f64),
    #[error("grid depth {0} exceeds the limit {1}")]
    DepthExceeded(u32, u32),
    #[error("anchor ({0}, {1}) is not on the boundary")]
    AnchorNotOnBoundary(f64, f64),
    #[error("anchor {0} is disconnected from the grid")]
    DisconnectedAnchor(usize),
    #[error("node {0} is unreachable from node {1}")]
    Unreachable(usize, usize),
    #[error("domain not supported by this operation")]
    UnsupportedDomain,
    #[error("points are not in the Cantor set")]
    PointsNotInSet,
    #[error("invalid Cantor spec: {0}")]
    InvalidSpec(String),
    #[error("radius {0} is below the resolution floor {1}")]
    ResolutionFloor(f64, f64),
    #[error("empty ball at radius {0}")]
    EmptyBall(f64),
    #[error("degenerate fit window")]
    DegenerateWindow,
    #[error("invalid scale ladder: {0}")]
    InvalidLadder(String),
    #[error("empty dimension profile")]
    EmptyProfile,
    #[error("nonpositive denominator in spectrum at t={0}")]
    NonpositiveDenominator(f64),
    #[error("level {0} is not a multiple of the block size {1}")]
    IncompatibleLevel(u32, u32),
    #[error("unknown experiment '{0}'")]
    UnknownExperiment(String),
    #[error("config error at line {line}: {msg}")]
    Config { line: usize, msg: String },
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
