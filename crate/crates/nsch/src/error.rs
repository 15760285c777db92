use std::path::PathBuf;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("order parameter {value} outside [-1, 1] beyond overshoot tolerance {tol:e}")]
    OutOfRange { value: f64, tol: f64 },

    #[error("fields live on different grids")]
    GridMismatch,

    #[error("unknown modeling choice `{0}` (expected phi-volume, phi-mass, c-volume or c-mass)")]
    UnknownChoice(String),

    #[error("step rejected: dt = {dt:e} exceeds the stable limit {max_dt:e}")]
    StepRejected { dt: f64, max_dt: f64 },

    #[error("{solver} did not converge in {} iterations (last relative residual {:e})", history.len(), history.last().copied().unwrap_or(f64::NAN))]
    LinearSolver {
        solver: &'static str,
        history: Vec<f64>,
    },

    #[error("transform breaks down: 1 - alpha*phi = {0:e} is not positive")]
    Singular(f64),

    #[error("config line {line}: {msg}")]
    Config { line: usize, msg: String },

    #[error("unknown config keys: {}", .0.join(", "))]
    UnknownKeys(Vec<String>),

    #[error("snapshot line {line}: {msg}")]
    Snapshot { line: usize, msg: String },

    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    pub(crate) fn param(name: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidParameter {
            name,
            reason: reason.into(),
        }
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
