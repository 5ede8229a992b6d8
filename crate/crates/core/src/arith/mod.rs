//! Finite fields, exact cyclotomic integers, polynomials over `F_q` and
//! exponential sums by point counting.

pub mod cyclotomic;
pub mod expsum;
pub mod field;
pub mod fqpoly;
pub mod tables;

pub use cyclotomic::CycInt;
pub use expsum::{exponential_sum, l_coefficients, newton_polygon, NewtonData, DEFAULT_BUDGET};
pub use field::{Embedding, FieldDesc, FqElem};
pub use fqpoly::FqPolynomial;
