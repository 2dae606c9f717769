//! Sparse domination and sharp weighted estimates on the one-dimensional
//! torus: shifted dyadic systems, Muckenhoupt and reverse Hölder weight
//! characteristics, a semigroup-based spectral calculus, the stopping-time
//! sparse domination algorithm, and the power-weight sharpness experiments.

// `!(x > a)` is used on purpose so that NaN is rejected too
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod domination;
pub mod dyadic;
pub mod error;
pub mod exponents;
pub mod grid;
pub mod harness;
pub mod operators;
pub mod sparse;
pub mod weights;

pub use error::{Error, Result};
