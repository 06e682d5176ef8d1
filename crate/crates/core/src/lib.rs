//! Construction and exact verification of absorption-emission (AE),
//! permutation-invariant (PI) and spin quantum codes.

pub mod angular;
pub mod codes;
pub mod covariance;
pub mod combinatorics;
pub mod error;
pub mod errorset;
pub mod exactnum;
pub mod format;
pub mod reproduce;
pub mod search;
pub mod verify;

pub use error::{Error, Result};
pub use exactnum::{
    normalize, sqrt_mul, squarefree_decompose, to_float, Integer, RadicalSum, Rational, Sign,
    SqrtRational, Surd,
};
