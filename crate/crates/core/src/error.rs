use crate::physics::State;

/// Errors produced by the solver and its diagnostics.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("invalid grid: {0}")]
    InvalidGrid(String),
    #[error("field `{name}` has a non-finite value at index {index}")]
    NonFinite { name: String, index: usize },
    #[error("fields live on different grids")]
    GridMismatch,
    #[error("invalid L^p exponent {0} (need p >= 1)")]
    InvalidExponent(f64),
    #[error("point ({x}, {y}) lies outside the domain")]
    OutOfDomain { x: f64, y: f64 },
    #[error("density must be positive (min {min:e} at index {index})")]
    NonPositiveDensity { min: f64, index: usize },
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("steady state inadmissible: mass {mass} does not exceed threshold {threshold}")]
    Inadmissible { mass: f64, threshold: f64 },
    #[error("root bracketing failed: {0}")]
    Bracket(String),
    #[error("compatibility violated: gap {gap:e} exceeds tolerance {tolerance:e}")]
    Compatibility { gap: f64, tolerance: f64 },
    #[error("singular evaluation: {0}")]
    Singular(String),
    #[error("geometry: {0}")]
    Geometry(String),
    #[error("fit: {0}")]
    Fit(String),
    #[error("need at least {need} samples, got {got}")]
    TooFewSamples { got: usize, need: usize },
    #[error("inconclusive: {0}")]
    Inconclusive(String),
    #[error("oracle: {0}")]
    Oracle(String),
    #[error("config: {0}")]
    Config(String),
    #[error("numerical abort at t = {t}: {reason}")]
    NumericalAbort {
        t: f64,
        reason: String,
        last_good: Box<State>,
    },
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error("image: {0}")]
    Image(String),
}

pub type Result<T> = std::result::Result<T, Error>;
