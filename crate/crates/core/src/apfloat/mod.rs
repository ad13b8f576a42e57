//! Arbitrary-precision real and complex arithmetic.

mod complex;
mod real;

pub use complex::{parse_complex_rational, Complex};
pub use real::{bits_to_digits, digits_to_bits, format_sci, ln2, parse_decimal_rational, pi, Real};
