use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("configuration error: {0}")]
    Config(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("degenerate state: {0}")]
    DegenerateState(String),

    #[error("step rejected: dt = {dt:.6e} exceeds the transport limit {limit:.6e}")]
    CflViolation { dt: f64, limit: f64 },

    #[error("viscous solve did not reach tolerance: relative residual {residual:.3e} > {tol:.3e}")]
    LinearSolve { residual: f64, tol: f64 },

    #[error("negative density {value:.6e} in constituent {constituent} at cell {cell}")]
    NegativeDensity {
        constituent: usize,
        cell: usize,
        value: f64,
    },

    #[error("time step underflow at t = {t:.6e} (dt = {dt:.3e})")]
    DtUnderflow { t: f64, dt: f64 },

    #[error("unknown {kind} `{name}` (known: {known})")]
    UnknownName {
        kind: &'static str,
        name: String,
        known: String,
    },

    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
