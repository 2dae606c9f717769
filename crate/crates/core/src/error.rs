use crate::dyadic::{DyadicCube, Interval};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("exponent {0} lies outside [1, inf]")]
    Domain(f64),

    #[error("invalid exponent configuration: {0}")]
    Config(String),

    #[error("cube {0:?} is already at the maximum depth")]
    Leaf(DyadicCube),

    #[error("interval [{}, {}) leaves the working window", .0.lo, .0.hi)]
    Window(Interval),

    #[error("maximal covering undefined: the set fills the whole root cube")]
    CoveringUndefined,

    #[error("grid size mismatch: expected {expected}, got {got}")]
    SizeMismatch { expected: usize, got: usize },

    #[error("input has zero norm after removing the mean")]
    ZeroNorm,

    #[error("p = {p} is outside the {range} range of the sharpness experiment")]
    WrongRange { p: f64, range: &'static str },

    #[error("threshold eta = {eta} selects {ratio:.4} of cube {cube:?}, above the sparse margin 1/2")]
    NonSparseThreshold {
        eta: f64,
        ratio: f64,
        cube: DyadicCube,
    },

    #[error("no power-of-two threshold up to 2^20 gives covered ratio <= 1/4 (best ratio {best_ratio:.4})")]
    CalibrationFailed { best_ratio: f64 },

    #[error("degenerate input: {0}")]
    Degenerate(String),
}

pub type Result<T> = std::result::Result<T, Error>;
