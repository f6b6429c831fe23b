use thiserror::Error;

/// Everything that can go wrong in this crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("a curve needs at least 2 samples, got {0}")]
    TooFewSamples(usize),

    #[error("dimension must be positive")]
    ZeroDimension,

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("sample {index}: {reason}")]
    InvalidSample { index: usize, reason: String },

    #[error("non-finite value at sample {index}")]
    NonFinite { index: usize },

    #[error("exponent p must be >= 1, got {0}")]
    InvalidExponent(f64),

    #[error("weight {index} is not positive")]
    NonPositiveWeight { index: usize },

    #[error("evaluation time {0} lies outside [0, 1]")]
    TimeOutOfRange(f64),

    #[error("rotation angle {angle} too close to pi{}", fmt_index(*.index, "subinterval"))]
    AngleNearPi { angle: f64, index: Option<usize> },

    #[error("group kinds differ: {0} vs {1}")]
    KindMismatch(&'static str, &'static str),

    #[error("point lies on or too close to the cut locus of the reference point{}", fmt_index(*.index, "grid index"))]
    CutLocusViolation { index: Option<usize> },

    #[error("geodesic left the chart domain")]
    GeodesicLeftChart,

    #[error("point is not in the chart domain")]
    OutsideChart,

    #[error("metric is not symmetric positive definite (smallest eigenvalue {0:e})")]
    InvalidMetric(f64),

    #[error("Christoffel symbols are not symmetric (defect {0:e})")]
    AsymmetricChristoffel(f64),

    #[error("Riemannian logarithm did not converge (residual {0:e})")]
    LogDidNotConverge(f64),

    #[error("invalid warping function: {0}")]
    InvalidWarp(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("parse error: {0}")]
    Parse(String),
}

fn fmt_index(index: Option<usize>, what: &str) -> String {
    match index {
        Some(i) => format!(" ({what} {i})"),
        None => String::new(),
    }
}

impl Error {
    /// Attach a grid/subinterval index to errors that carry one.
    pub fn at(self, i: usize) -> Self {
        match self {
            Error::AngleNearPi { angle, index: None } => Error::AngleNearPi { angle, index: Some(i) },
            Error::CutLocusViolation { index: None } => Error::CutLocusViolation { index: Some(i) },
            other => other,
        }
    }

    /// True for the geometric failures (branch cut of the group logarithm, cut locus).
    pub fn is_geometric(&self) -> bool {
        matches!(
            self,
            Error::AngleNearPi { .. }
                | Error::CutLocusViolation { .. }
                | Error::GeodesicLeftChart
                | Error::LogDidNotConverge(_)
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
