//! Hodge, Frobenius, premium and Newton polygons of exponential sums over
//! finite fields, together with twisted Hasse polynomials and an experiment
//! harness that checks them against brute-force L-functions.

pub mod arith;
pub mod error;
pub mod harness;
pub mod hasse;
pub mod lattice;
pub mod polygon;
pub mod premium;
pub mod util;

pub use error::{Error, Result};
