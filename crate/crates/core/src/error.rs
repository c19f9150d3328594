use thiserror::Error;

/// Crate-wide error type.
#[derive(Debug, Clone, Error)]
pub enum Error {
    #[error("invalid shape: {0}")]
    InvalidShape(String),

    #[error("smoothing window {eps} overlaps adjacent junction (limit {limit})")]
    SmoothingOverlap { eps: f64, limit: f64 },

    #[error("convexity violation: curvature {kappa} at parameter {t}")]
    ConvexityViolation { t: f64, kappa: f64 },

    #[error("accuracy failure: {0}")]
    Accuracy(String),

    #[error("point ({x}, {y}) is outside the domain")]
    OutsideDomain { x: f64, y: f64 },

    #[error("ray did not exit the domain within {0} length units")]
    UnboundedRay(f64),

    #[error("inward normal ray misses the target boundary (closest approach {closest})")]
    NoIntersection { closest: f64 },

    #[error("degenerate geometry: {0}")]
    DegenerateGeometry(String),

    #[error("hypothesis violation: {0}")]
    HypothesisViolation(String),

    #[error("formal series is not invertible: {0}")]
    NonInvertibleSeries(String),

    #[error("singular parametrization: {0}")]
    SingularParametrization(String),

    #[error("insufficient data: {0}")]
    InsufficientData(String),

    #[error("fit aborted: {0}")]
    FitAborted(String),

    #[error("orbit truncated at step {step}: {reason}")]
    OrbitTruncated { step: usize, reason: String },

    #[error("config error: {0}")]
    Config(String),

    #[error("io error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
