use thiserror::Error;

/// Errors raised by the numerical routines in this crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An argument lies outside the domain where the quantity is defined.
    #[error("domain error: {0}")]
    Domain(String),

    /// Too few points, repeated points or otherwise unusable input.
    #[error("degenerate input: {0}")]
    DegenerateInput(String),

    /// Two passes through a self-intersection are (nearly) parallel.
    #[error("non-transverse self-intersection near ({x}, {y}): crossing angle {angle:e} rad")]
    Transversality { x: f64, y: f64, angle: f64 },

    /// A cluster of crossing points is too wide to be a single vertex.
    #[error("ambiguous intersection cluster near ({x}, {y}) spanning {span:e}")]
    Ambiguity { x: f64, y: f64, span: f64 },

    /// A search (shooting scan, root bracket) found nothing.
    #[error("not found: {0}")]
    NotFound(String),

    /// The step size controller collapsed away from the domain boundary.
    #[error("step size underflow at arclength {arclength}: {detail}")]
    Stiffness { arclength: f64, detail: String },

    /// A curve failed geodesic certification.
    #[error("not a geodesic: residual {residual:e} exceeds threshold {threshold:e}")]
    NotAGeodesic { residual: f64, threshold: f64 },

    /// Two independent evaluations of the same quantity disagree.
    #[error("inconsistent results: {0}")]
    Inconsistency(String),

    /// Malformed curve file.
    #[error("parse error on line {line}: {message}")]
    Parse { line: usize, message: String },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn domain<T>(message: impl Into<String>) -> Result<T> {
    Err(Error::Domain(message.into()))
}
