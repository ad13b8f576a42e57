//! Torsion parameters of the family `E_lambda: Y^2 = X^3 - 4 lambda X + 1`
//! with the section `P = (0, -1)`.

use serde::Serialize;

use super::curve::{ec_mul, torsion_order, ECPoint, NumCurve, NumPoint, ShortWeierstrass};
use super::divpoly::{extend_sequence, initial_terms};
use crate::apfloat::{digits_to_bits, Complex};
use crate::error::{Error, Result};
use crate::exactalg::rational::format_rational;
use crate::exactalg::{complex_roots, factor_rational, Elem, Field, FieldPoly, Rational};

/// Digits used to confirm non-rational parameters at an embedding.
pub const VERIFY_DIGITS: u32 = 40;
/// Extra digits carried by the roots beyond the verification tolerance.
const GUARD_DIGITS: u32 = 24;

/// `E_lambda` at a given parameter.
pub fn family_curve(lam: &Elem) -> Result<ShortWeierstrass> {
    let f = lam.field();
    ShortWeierstrass::new(&f.from_i64(-4) * lam, f.one())
}

/// The section `(0, -1)` on `E_lambda`.
pub fn family_point(lam: &Elem) -> ECPoint {
    let f = lam.field();
    ECPoint::Affine(f.zero(), f.from_i64(-1))
}

fn lambda_poly(c: &[i64]) -> FieldPoly {
    FieldPoly::from_i64s(c)
}

/// `f_0(P) .. f_n(P)` as polynomials in `lambda`. `P` has `Y = -1`, so
/// `F(P) = 4` and for every `n >= 2` the section is killed by `n` exactly
/// when `f_n(P)` vanishes.
pub fn family_division_values(n: usize) -> Vec<FieldPoly> {
    let c = |k: i64| lambda_poly(&[k]);
    let a = lambda_poly(&[0, -4]);
    let mut f = initial_terms(&a, &c(1), &c(0), c);
    extend_sequence(&mut f, &lambda_poly(&[16]), n);
    f.truncate(n.max(4) + 1);
    f
}

/// `256 lambda^3 - 27`, vanishing where `E_lambda` is singular.
pub fn singular_locus() -> FieldPoly {
    lambda_poly(&[-27, 0, 0, 256])
}

/// The exact-order condition in `lambda`, split into irreducible factors.
#[derive(Clone, Debug)]
pub struct TorsionCondition {
    pub order: usize,
    /// Squarefree, monic, with lower orders and singular fibres removed.
    pub cleaned: FieldPoly,
    pub factors: Vec<Vec<Rational>>,
    /// False when some factor could not be proven irreducible.
    pub certified: bool,
}

impl TorsionCondition {
    /// Number of parameters of exact order `order`.
    pub fn count(&self) -> usize {
        self.cleaned.degree().unwrap_or(0)
    }
}

pub fn torsion_condition(n: usize) -> Result<TorsionCondition> {
    if n < 2 {
        return Err(Error::InvalidArgument("torsion order must be at least 2".into()));
    }
    let values = family_division_values(n);
    let top = &values[n];
    if top.is_zero() {
        return Err(Error::DegenerateFamily);
    }
    let mut h = top.squarefree_part().monic();
    let drop = |h: FieldPoly, g: &FieldPoly| -> FieldPoly {
        let d = h.gcd(g);
        if d.is_constant() {
            h
        } else {
            h.div_exact(&d).unwrap()
        }
    };
    for (d, g) in values.iter().enumerate().take(n).skip(2) {
        if n.is_multiple_of(d) {
            h = drop(h, g);
        }
    }
    h = drop(h, &singular_locus()).monic();
    if h.is_constant() {
        return Ok(TorsionCondition { order: n, cleaned: h, factors: Vec::new(), certified: true });
    }
    let fac = factor_rational(&h.rational_coeffs().unwrap());
    let factors = fac.factors.into_iter().map(|(p, _)| p).collect();
    Ok(TorsionCondition { order: n, cleaned: h, factors, certified: fac.certified })
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
#[serde(rename_all = "snake_case")]
pub enum Verification {
    /// `[n]P = O` and no smaller multiple vanishes, in exact arithmetic.
    Exact,
    /// The same at a complex embedding with the stated digits.
    Numeric { digits: u32 },
}

/// One parameter of exact order `order`: a root of `minpoly` selected by
/// `root_index` in canonical root order.
#[derive(Clone, Debug)]
pub struct TorsionParam {
    pub order: usize,
    pub minpoly: Vec<Rational>,
    pub root_index: usize,
    pub embedding: Complex,
    pub irreducible: bool,
    pub verification: Verification,
}

impl TorsionParam {
    pub fn degree(&self) -> usize {
        self.minpoly.len() - 1
    }

    pub fn is_rational(&self) -> bool {
        self.degree() == 1
    }

    /// `lambda` as an exact element of `Q` or of `Q(t)/(minpoly)`.
    pub fn value(&self) -> Result<Elem> {
        if self.is_rational() {
            return Ok(Elem::Q(-&self.minpoly[0] / &self.minpoly[1]));
        }
        let k = Field::number_field_from_factor(&self.minpoly, self.root_index, "t", self.irreducible)?;
        Ok(k.gen())
    }

    pub fn minpoly_text(&self) -> String {
        FieldPoly::from_rationals(&self.minpoly).to_string_var("t")
    }
}

/// Checks that the section has order exactly `n` at the embedding `z` of a
/// parameter.
fn numeric_order(z: &Complex, n: usize, digits: u32) -> Option<u64> {
    let bits = digits_to_bits(digits + GUARD_DIGITS);
    let z = z.with_prec(bits);
    let curve = NumCurve { a: z.scale_i64(-4), b: Complex::one(bits), tol_log2: -(digits_to_bits(digits) as f64) };
    let p = NumPoint::Affine(Complex::zero(bits), Complex::from_i64(-1, bits));
    curve.torsion_order(&p, n as u64)
}

/// All parameters at which `(0, -1)` has exact order `n`, each verified
/// exactly (rational) or at a 40-digit embedding (otherwise).
pub fn torsion_parameters(n: usize) -> Result<Vec<TorsionParam>> {
    let cond = torsion_condition(n)?;
    let mut out = Vec::new();
    for mp in &cond.factors {
        let poly = FieldPoly::from_rationals(mp);
        if mp.len() == 2 {
            let lam = Elem::Q(-&mp[0] / &mp[1]);
            let e = family_curve(&lam)?;
            let ord = torsion_order(&e, &family_point(&lam), n as u64)?;
            if ord != Some(n as u64) || !ec_mul(&e, n as i64, &family_point(&lam))?.is_infinity() {
                return Err(Error::InternalCheckFailed(format!("lambda = {} is not of order {n}", format_rational(lam.as_rational().as_ref().unwrap()))));
            }
            out.push(TorsionParam {
                order: n,
                minpoly: mp.clone(),
                root_index: 0,
                embedding: lam.to_complex(digits_to_bits(VERIFY_DIGITS)),
                irreducible: true,
                verification: Verification::Exact,
            });
            continue;
        }
        let roots = complex_roots(&poly, VERIFY_DIGITS + GUARD_DIGITS)?;
        for (j, z) in roots.into_iter().enumerate() {
            if numeric_order(&z, n, VERIFY_DIGITS) != Some(n as u64) {
                return Err(Error::InternalCheckFailed(format!("root {j} of {} is not of order {n}", poly.to_string_var("t"))));
            }
            out.push(TorsionParam {
                order: n,
                minpoly: mp.clone(),
                root_index: j,
                embedding: z.with_prec(digits_to_bits(VERIFY_DIGITS)),
                irreducible: cond.certified,
                verification: Verification::Numeric { digits: VERIFY_DIGITS },
            });
        }
    }
    Ok(out)
}

/// JSON record `{order, minpoly, embeddings}` for each irreducible factor.
pub fn torsion_parameters_json(params: &[TorsionParam]) -> serde_json::Value {
    use serde_json::json;
    let mut groups: Vec<(Vec<Rational>, Vec<&TorsionParam>)> = Vec::new();
    for p in params {
        match groups.iter_mut().find(|(m, _)| *m == p.minpoly) {
            Some((_, v)) => v.push(p),
            None => groups.push((p.minpoly.clone(), vec![p])),
        }
    }
    let rows: Vec<_> = groups
        .into_iter()
        .map(|(_, ps)| {
            let p0 = ps[0];
            json!({
                "order": p0.order,
                "minpoly": p0.minpoly_text(),
                "degree": p0.degree(),
                "value": if p0.is_rational() { Some(format_rational(&(-&p0.minpoly[0] / &p0.minpoly[1]))) } else { None },
                "irreducible_certified": p0.irreducible,
                "verification": p0.verification,
                "embeddings": ps.iter().map(|p| p.embedding.to_string_digits(VERIFY_DIGITS as usize)).collect::<Vec<_>>(),
            })
        })
        .collect();
    serde_json::Value::Array(rows)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::rational::int;

    #[test]
    fn order_two_is_empty_and_three_is_zero() {
        assert!(torsion_parameters(2).unwrap().is_empty());
        let p3 = torsion_parameters(3).unwrap();
        assert_eq!(p3.len(), 1);
        assert_eq!(p3[0].value().unwrap().as_rational().unwrap(), int(0));
        assert_eq!(p3[0].verification, Verification::Exact);
    }

    #[test]
    fn order_four_condition() {
        // f_4(P) = 16(8 lambda^3 - 1) = 16(2 lambda - 1)(4 lambda^2 + 2 lambda + 1)
        let f = family_division_values(4);
        assert_eq!(f[4].to_string(), "128*x^3-16");
        let p4 = torsion_parameters(4).unwrap();
        assert_eq!(p4.len(), 3);
        let half: Vec<_> = p4.iter().filter(|p| p.is_rational()).collect();
        assert_eq!(half.len(), 1);
        assert_eq!(half[0].value().unwrap().as_rational().unwrap(), Rational::new(1.into(), 2.into()));
    }

    #[test]
    fn counts_match_cleaned_degrees() {
        for n in 5..=7 {
            let cond = torsion_condition(n).unwrap();
            let params = torsion_parameters(n).unwrap();
            assert_eq!(params.len(), cond.count(), "order {n}");
            assert!(params.iter().all(|p| p.order == n));
        }
    }

    #[test]
    fn order_six_members_verify_exactly_in_their_field() {
        let params = torsion_parameters(6).unwrap();
        assert!(!params.is_empty());
        let p = &params[0];
        let lam = p.value().unwrap();
        let e = family_curve(&lam).unwrap();
        assert_eq!(torsion_order(&e, &family_point(&lam), 6).unwrap(), Some(6));
    }

    #[test]
    fn quarter_is_not_a_torsion_parameter() {
        let lam = Elem::Q(Rational::new(1.into(), 4.into()));
        let e = family_curve(&lam).unwrap();
        assert_eq!(torsion_order(&e, &family_point(&lam), 30).unwrap(), None);
        for n in 2..=8 {
            assert!(!family_division_values(n)[n].eval(&lam).is_zero());
        }
    }

    #[test]
    fn json_groups_by_minimal_polynomial() {
        let v = torsion_parameters_json(&torsion_parameters(4).unwrap());
        let rows = v.as_array().unwrap();
        assert_eq!(rows.len(), 2);
        assert_eq!(rows[0]["minpoly"], "t-1/2");
        assert_eq!(rows[1]["embeddings"].as_array().unwrap().len(), 2);
    }
}
