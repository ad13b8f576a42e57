//! Elliptic curves in short Weierstrass form over exact fields, division
//! polynomials, torsion parameters of the family `Y^2 = X^3 - 4 lambda X + 1`
//! with the section `(0, -1)`, and the quartic model `v^2 = u^4 + u + lambda`.

pub mod curve;
pub mod divpoly;
pub mod quartic;
pub mod rho;
pub mod torsion;

pub use curve::{ec_add, ec_mul, parse_curve_point, torsion_order, ECPoint, NumCurve, NumPoint, ShortWeierstrass};
pub use divpoly::{division_poly, psi_squared};
pub use quartic::{quartic_jacobian, QuarticModel, QuarticPoint};
pub use rho::{family_quartic, rho_case_ii, rho_case_ii_numeric, RhoCaseII, RhoNumeric};
pub use torsion::{family_curve, family_point, torsion_condition, torsion_parameters, torsion_parameters_json, TorsionCondition, TorsionParam, Verification};
