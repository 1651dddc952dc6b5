use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("representation mismatch: expected {expected}, found {found}")]
    RepresentationMismatch {
        expected: &'static str,
        found: &'static str,
    },

    #[error("fields live on different grids")]
    GridMismatch,

    #[error("degenerate input: {0}")]
    Degenerate(String),

    #[error("tail mass fraction {fraction:.3e} exceeds threshold {threshold:.3e}")]
    TailMass { fraction: f64, threshold: f64 },

    #[error("iterate collapsed to the zero field after {iterations} iterations")]
    Collapse { iterations: usize },

    #[error("no convergence after {iterations} iterations (residual {residual:.3e})")]
    NotConverged { iterations: usize, residual: f64 },

    #[error("fixed-point map is not contracting: successive-distance ratio {ratio:.3e} at sweep {sweep}")]
    NonContraction { sweep: usize, ratio: f64 },

    #[error("non-finite values at t = {time}")]
    NonFinite { time: f64 },

    #[error("wrap-around detected: boundary amplitude {amplitude:.3e} at t = {time}")]
    WrapAround { time: f64, amplitude: f64 },

    #[error("snapshot format error: {0}")]
    Snapshot(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
