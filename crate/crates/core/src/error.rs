use std::path::PathBuf;

use num_complex::Complex64;
use thiserror::Error;

/// Errors raised by the numerical operations and the experiment harness.
#[derive(Debug, Error)]
pub enum Error {
    #[error("malformed curve: {0}")]
    MalformedCurve(String),

    #[error("distance search window [{t_lo}, {t_hi}] does not contain the nearest point")]
    WindowInsufficient { t_lo: f64, t_hi: f64 },

    #[error("curve is not injective: parameters {t1} and {t2} map to the same point")]
    InjectivityViolation { t1: f64, t2: f64 },

    #[error("point {z} lies outside the domain of the operation: {reason}")]
    Domain { z: Complex64, reason: String },

    #[error("Newton inversion failed to converge for target {target}; last iterate {last}")]
    InversionFailure { target: Complex64, last: Complex64 },

    #[error("unsupported domain: {0}")]
    UnsupportedDomain(String),

    #[error("evaluation point {z} is within 1e-12 of the pole {pole}")]
    Singularity { z: Complex64, pole: Complex64 },

    #[error("truncation radius {radius} cannot certify a tail below {target} (bound {bound})")]
    TruncationInsufficient { radius: f64, target: f64, bound: f64 },

    #[error("integral diverges: {0}")]
    Divergence(String),

    #[error("quadrature did not converge: {0}")]
    Quadrature(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("sampled function is not strictly increasing near x = {x}")]
    MonotonicityViolation { x: f64 },

    #[error("configuration rejected:\n{}", .0.join("\n"))]
    Config(Vec<String>),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("I/O error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("CSV error on {path}: {source}")]
    Csv {
        path: PathBuf,
        #[source]
        source: csv::Error,
    },

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidParameter(msg.into())
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
