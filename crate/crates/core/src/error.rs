use thiserror::Error;

use crate::objective::EvalError;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("a grid needs at least 3 points, got {0}")]
    TooFewPoints(usize),

    #[error("segment endpoints coincide")]
    CoincidentEndpoints,

    #[error("endpoint dimensions differ: {start} vs {end}")]
    DimensionMismatch { start: usize, end: usize },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("smoothing system is singular: {0}")]
    Singular(String),

    #[error("factorization hit a non-positive pivot {pivot:e} at row {row}")]
    NonPositivePivot { row: usize, pivot: f64 },

    #[error("length mismatch: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },

    #[error("grid index {index} is outside 1..={n}")]
    IndexOutOfRange { index: usize, n: usize },

    #[error("every grid point has been sampled; no unexplored interval remains")]
    NoUnexploredInterval,

    #[error("initial sample indices collide: {count} samples do not fit on {n} grid points")]
    DuplicateInitialIndex { n: usize, count: usize },

    #[error("grid index {0} was already evaluated")]
    Resample(usize),

    #[error("unknown benchmark function `{0}`")]
    UnknownFunction(String),

    #[error("{x} lies outside the domain [{lower}, {upper}] of `{name}`")]
    OutOfDomain {
        name: &'static str,
        x: f64,
        lower: f64,
        upper: f64,
    },

    #[error("reference fit reproduces the truth exactly; scaled error is undefined")]
    DegenerateReference,

    #[error("objective evaluation failed: {0}")]
    Evaluation(#[from] EvalError),
}
