//! Exact algebra: rationals, number fields and towers, polynomials over them,
//! numeric root isolation, factorization over Q and rational recognition.

pub mod factor;
pub mod field;
pub mod modp;
mod nfsqrt;
pub mod parse;
pub mod poly;
pub mod rational;
pub mod recognize;
pub mod roots;

pub use factor::{factor_rational, Factorization};
pub use field::{Elem, Field};
pub use parse::{parse_nf_elem, parse_number_field, parse_poly, parse_poly_in};
pub use poly::{poly_divrem, poly_sqrt_floor, FieldPoly};
pub use rational::Rational;
pub use recognize::rational_recognize;
pub use roots::complex_roots;
