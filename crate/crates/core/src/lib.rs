//! Exact and high-precision machinery for polynomial Pell equations, torsion
//! on elliptic families, Weierstrass functions, semi-abelian logarithms and
//! Ribet sections.

pub mod apfloat;
pub mod elliptic;
pub mod error;
pub mod exactalg;
pub mod experiments;
pub mod lattice;
pub mod pell;
pub mod semiabelian;

pub use error::{Error, Result};
