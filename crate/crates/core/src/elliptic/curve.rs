//! Short Weierstrass curves `Y^2 = X^3 + aX + b` over Q or a number field,
//! exact chord-tangent arithmetic and a high-precision complex twin.

use std::sync::{Arc, RwLock};

use crate::apfloat::Complex;
use crate::error::{Error, Result};
use crate::exactalg::parse::rational_from_text;
use crate::exactalg::{Elem, Field, FieldPoly};

#[derive(Clone)]
pub struct ShortWeierstrass {
    pub a: Elem,
    pub b: Elem,
    field: Field,
    /// Division polynomials, filled on demand and never rewritten.
    pub(crate) divpolys: Arc<RwLock<Vec<FieldPoly>>>,
}

impl std::fmt::Debug for ShortWeierstrass {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "Y^2 = X^3 + ({})X + ({})", self.a, self.b)
    }
}

#[derive(Clone, Debug)]
pub enum ECPoint {
    Infinity,
    Affine(Elem, Elem),
}

impl ECPoint {
    pub fn is_infinity(&self) -> bool {
        matches!(self, ECPoint::Infinity)
    }

    pub fn equals(&self, other: &ECPoint) -> bool {
        match (self, other) {
            (ECPoint::Infinity, ECPoint::Infinity) => true,
            (ECPoint::Affine(x1, y1), ECPoint::Affine(x2, y2)) => x1.equals(x2) && y1.equals(y2),
            _ => false,
        }
    }

    pub fn neg(&self) -> ECPoint {
        match self {
            ECPoint::Infinity => ECPoint::Infinity,
            ECPoint::Affine(x, y) => ECPoint::Affine(x.clone(), -y),
        }
    }

    pub fn x(&self) -> Option<&Elem> {
        match self {
            ECPoint::Infinity => None,
            ECPoint::Affine(x, _) => Some(x),
        }
    }

    pub fn y(&self) -> Option<&Elem> {
        match self {
            ECPoint::Infinity => None,
            ECPoint::Affine(_, y) => Some(y),
        }
    }

    pub fn to_complex(&self, prec: u32) -> NumPoint {
        match self {
            ECPoint::Infinity => NumPoint::Infinity,
            ECPoint::Affine(x, y) => NumPoint::Affine(x.to_complex(prec), y.to_complex(prec)),
        }
    }
}

impl std::fmt::Display for ECPoint {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            ECPoint::Infinity => write!(f, "O"),
            ECPoint::Affine(x, y) => write!(f, "({x},{y})"),
        }
    }
}

impl ShortWeierstrass {
    pub fn new(a: Elem, b: Elem) -> Result<ShortWeierstrass> {
        let field = Field::join(&a.field(), &b.field()).ok_or(Error::FieldMismatch)?;
        let a = field.lift_checked(&a)?;
        let b = field.lift_checked(&b)?;
        let e = ShortWeierstrass { a, b, field, divpolys: Arc::new(RwLock::new(Vec::new())) };
        if e.discriminant_core().is_zero() {
            return Err(Error::DegenerateCurve);
        }
        Ok(e)
    }

    pub fn from_rationals(a: i64, b: i64) -> Result<ShortWeierstrass> {
        ShortWeierstrass::new(Field::Rational.from_i64(a), Field::Rational.from_i64(b))
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    /// `4a^3 + 27b^2`.
    pub fn discriminant_core(&self) -> Elem {
        let f = &self.field;
        &(&f.from_i64(4) * &self.a.pow(3)) + &(&f.from_i64(27) * &self.b.pow(2))
    }

    /// `X^3 + aX + b`.
    pub fn rhs(&self, x: &Elem) -> Elem {
        &(&(&x.pow(2) + &self.a) * x) + &self.b
    }

    pub fn rhs_poly(&self) -> FieldPoly {
        let f = &self.field;
        FieldPoly::new(f, vec![self.b.clone(), self.a.clone(), f.zero(), f.one()])
    }

    pub fn contains(&self, p: &ECPoint) -> bool {
        match p {
            ECPoint::Infinity => true,
            ECPoint::Affine(x, y) => (&y.pow(2) - &self.rhs(x)).is_zero(),
        }
    }

    /// The same curve over a larger field of the tower.
    pub fn lift_to(&self, field: &Field) -> Result<ShortWeierstrass> {
        ShortWeierstrass::new(field.lift_checked(&self.a)?, field.lift_checked(&self.b)?)
    }

    pub fn point(&self, x: Elem, y: Elem) -> Result<ECPoint> {
        let p = ECPoint::Affine(x, y);
        if !self.contains(&p) {
            return Err(Error::PointNotOnCurve);
        }
        Ok(p)
    }
}

fn add_unchecked(e: &ShortWeierstrass, p: &ECPoint, q: &ECPoint) -> ECPoint {
    let (x1, y1, x2, y2) = match (p, q) {
        (ECPoint::Infinity, _) => return q.clone(),
        (_, ECPoint::Infinity) => return p.clone(),
        (ECPoint::Affine(x1, y1), ECPoint::Affine(x2, y2)) => (x1, y1, x2, y2),
    };
    let slope = if x1.equals(x2) {
        let ysum = y1 + y2;
        if ysum.is_zero() {
            return ECPoint::Infinity;
        }
        let num = &(&e.field.from_i64(3) * &x1.pow(2)) + &e.a;
        num.checked_div(&(y1 + y1)).unwrap()
    } else {
        (y2 - y1).checked_div(&(x2 - x1)).unwrap()
    };
    let x3 = &(&slope.pow(2) - x1) - x2;
    let y3 = &(&slope * &(x1 - &x3)) - y1;
    ECPoint::Affine(x3, y3)
}

pub fn ec_add(e: &ShortWeierstrass, p: &ECPoint, q: &ECPoint) -> Result<ECPoint> {
    if !e.contains(p) || !e.contains(q) {
        return Err(Error::PointNotOnCurve);
    }
    Ok(add_unchecked(e, p, q))
}

pub fn ec_mul(e: &ShortWeierstrass, n: i64, p: &ECPoint) -> Result<ECPoint> {
    if !e.contains(p) {
        return Err(Error::PointNotOnCurve);
    }
    let mut acc = ECPoint::Infinity;
    let mut base = if n < 0 { p.neg() } else { p.clone() };
    let mut k = n.unsigned_abs();
    while k > 0 {
        if k & 1 == 1 {
            acc = add_unchecked(e, &acc, &base);
        }
        k >>= 1;
        if k > 0 {
            base = add_unchecked(e, &base, &base);
        }
    }
    Ok(acc)
}

/// Least `n <= n_max` with `[n]P = O`, by successive addition.
pub fn torsion_order(e: &ShortWeierstrass, p: &ECPoint, n_max: u64) -> Result<Option<u64>> {
    if !e.contains(p) {
        return Err(Error::PointNotOnCurve);
    }
    let mut acc = p.clone();
    for n in 1..=n_max {
        if acc.is_infinity() {
            return Ok(Some(n));
        }
        acc = add_unchecked(e, &acc, p);
    }
    Ok(None)
}

/// Parses `a=-1,b=1; P=(0,-1)`; the point part is optional and `P=O` is
/// the point at infinity.
pub fn parse_curve_point(s: &str) -> Result<(ShortWeierstrass, Option<ECPoint>)> {
    let (curve, point) = match s.split_once(';') {
        Some((c, p)) => (c, Some(p.trim())),
        None => (s, None),
    };
    let mut a = None;
    let mut b = None;
    for part in curve.split(',') {
        let (k, v) = part.split_once('=').ok_or_else(|| Error::Parse(format!("expected key=value in '{part}'")))?;
        let v = rational_from_text(v)?;
        match k.trim() {
            "a" => a = Some(v),
            "b" => b = Some(v),
            other => return Err(Error::Parse(format!("unknown curve key '{other}'"))),
        }
    }
    let (a, b) = match (a, b) {
        (Some(a), Some(b)) => (a, b),
        _ => return Err(Error::Parse("curve needs both a and b".into())),
    };
    let e = ShortWeierstrass::new(Elem::Q(a), Elem::Q(b))?;
    let p = match point {
        None | Some("") => None,
        Some(p) => {
            let body = p
                .strip_prefix("P")
                .map(str::trim_start)
                .and_then(|r| r.strip_prefix('='))
                .ok_or_else(|| Error::Parse("point must be written P=(x,y)".into()))?;
            let body = body.trim();
            if body == "O" {
                Some(ECPoint::Infinity)
            } else {
                let inner = body.strip_prefix('(').and_then(|r| r.strip_suffix(')')).ok_or_else(|| Error::Parse("point must be parenthesized".into()))?;
                let (x, y) = inner.split_once(',').ok_or_else(|| Error::Parse("point needs two coordinates".into()))?;
                Some(e.point(Elem::Q(rational_from_text(x)?), Elem::Q(rational_from_text(y)?))?)
            }
        }
    };
    Ok((e, p))
}

// ---------------------------------------------------------------------------
// Complex twin, used to verify torsion at an embedding.

#[derive(Clone, Debug)]
pub enum NumPoint {
    Infinity,
    Affine(Complex, Complex),
}

#[derive(Clone, Debug)]
pub struct NumCurve {
    pub a: Complex,
    pub b: Complex,
    /// `log2` of the tolerance used to decide coincidences.
    pub tol_log2: f64,
}

impl NumCurve {
    pub fn from_exact(e: &ShortWeierstrass, prec: u32) -> NumCurve {
        NumCurve { a: e.a.to_complex(prec), b: e.b.to_complex(prec), tol_log2: -(prec as f64) * 0.75 }
    }

    fn close(&self, u: &Complex, v: &Complex) -> bool {
        let scale = u.log2_abs().max(v.log2_abs()).max(0.0);
        u.dist_log2(v) < scale + self.tol_log2
    }

    pub fn add(&self, p: &NumPoint, q: &NumPoint) -> NumPoint {
        let (x1, y1, x2, y2) = match (p, q) {
            (NumPoint::Infinity, _) => return q.clone(),
            (_, NumPoint::Infinity) => return p.clone(),
            (NumPoint::Affine(x1, y1), NumPoint::Affine(x2, y2)) => (x1, y1, x2, y2),
        };
        let slope = if self.close(x1, x2) {
            if self.close(y1, &-y2) {
                return NumPoint::Infinity;
            }
            let num = &x1.sqr().scale_i64(3) + &self.a;
            &num / &y1.scale_i64(2)
        } else {
            &(y2 - y1) / &(x2 - x1)
        };
        let x3 = &(&slope.sqr() - x1) - x2;
        let y3 = &(&slope * &(x1 - &x3)) - y1;
        NumPoint::Affine(x3, y3)
    }

    /// Least `n <= n_max` with `[n]P = O` within tolerance.
    pub fn torsion_order(&self, p: &NumPoint, n_max: u64) -> Option<u64> {
        let mut acc = p.clone();
        for n in 1..=n_max {
            if matches!(acc, NumPoint::Infinity) {
                return Some(n);
            }
            acc = self.add(&acc, p);
        }
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::rational::{int, rat};
    use proptest::prelude::*;

    fn q(n: i64) -> Elem {
        Elem::Q(int(n))
    }

    #[test]
    fn three_torsion_on_x3_plus_1() {
        let e = ShortWeierstrass::from_rationals(0, 1).unwrap();
        let p = e.point(q(0), q(-1)).unwrap();
        assert!(ec_add(&e, &p, &p).unwrap().equals(&ECPoint::Affine(q(0), q(1))));
        assert!(ec_mul(&e, 3, &p).unwrap().is_infinity());
        assert!(ec_add(&e, &p, &ECPoint::Infinity).unwrap().equals(&p));
        assert!(ec_add(&e, &p, &p.neg()).unwrap().is_infinity());
        assert!(ec_mul(&e, 1, &p).unwrap().equals(&p));
        assert_eq!(torsion_order(&e, &ECPoint::Infinity, 5).unwrap(), Some(1));
        assert_eq!(torsion_order(&e, &p, 5).unwrap(), Some(3));
    }

    #[test]
    fn quarter_parameter_is_not_torsion() {
        let e = ShortWeierstrass::from_rationals(-1, 1).unwrap();
        let p = e.point(q(0), q(-1)).unwrap();
        assert!(!ec_mul(&e, 30, &p).unwrap().is_infinity());
        assert_eq!(torsion_order(&e, &p, 30).unwrap(), None);
    }

    #[test]
    fn rejects_points_off_the_curve_and_singular_curves() {
        let e = ShortWeierstrass::from_rationals(0, 1).unwrap();
        assert!(matches!(e.point(q(1), q(1)), Err(Error::PointNotOnCurve)));
        assert!(matches!(ec_mul(&e, 2, &ECPoint::Affine(q(1), q(1))), Err(Error::PointNotOnCurve)));
        assert!(matches!(ShortWeierstrass::from_rationals(-3, 2), Err(Error::DegenerateCurve)));
    }

    #[test]
    fn parses_curve_and_point() {
        let (e, p) = parse_curve_point("a=-1,b=1; P=(0,-1)").unwrap();
        assert_eq!(e.a.as_rational().unwrap(), int(-1));
        assert!(p.unwrap().equals(&ECPoint::Affine(q(0), q(-1))));
        let (_, p) = parse_curve_point("a=1/2, b=3").unwrap();
        assert!(p.is_none());
        assert!(parse_curve_point("a=0,b=1; P=O").unwrap().1.unwrap().is_infinity());
        for bad in ["a=0", "a=0,b=1; P=(1,1)", "a=0,b=1; (0,1)", "c=1,b=1", "a=-3,b=2"] {
            assert!(parse_curve_point(bad).is_err(), "{bad}");
        }
    }

    #[test]
    fn numeric_twin_agrees_on_orders() {
        let e = ShortWeierstrass::from_rationals(0, 1).unwrap();
        let p = e.point(q(0), q(-1)).unwrap();
        let ne = NumCurve::from_exact(&e, 160);
        assert_eq!(ne.torsion_order(&p.to_complex(160), 10), Some(3));
        let e = ShortWeierstrass::from_rationals(-1, 1).unwrap();
        let ne = NumCurve::from_exact(&e, 160);
        assert_eq!(ne.torsion_order(&ECPoint::Affine(q(0), q(-1)).to_complex(160), 30), None);
    }

    /// Points on `Y^2 = X^3 + aX + b` with `b` chosen so that `(x, y)` lies on it.
    fn curve_with_points(a: i64, pts: &[(i64, i64)]) -> Option<(ShortWeierstrass, Vec<ECPoint>)> {
        let (x0, y0) = pts[0];
        let b = y0 * y0 - x0 * x0 * x0 - a * x0;
        let e = ShortWeierstrass::from_rationals(a, b).ok()?;
        let mut out = vec![ECPoint::Affine(q(x0), q(y0))];
        // further points as small multiples and sums
        let p = out[0].clone();
        out.push(ec_mul(&e, 2, &p).ok()?);
        out.push(ec_mul(&e, -3, &p).ok()?);
        Some((e, out))
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]

        #[test]
        fn group_law_is_commutative_and_associative(a in -5i64..5, x in -4i64..4, y in 1i64..6) {
            let Some((e, pts)) = curve_with_points(a, &[(x, y)]) else { return Ok(()) };
            let (p, q2, r) = (&pts[0], &pts[1], &pts[2]);
            let pq = ec_add(&e, p, q2).unwrap();
            prop_assert!(pq.equals(&ec_add(&e, q2, p).unwrap()));
            let lhs = ec_add(&e, &pq, r).unwrap();
            let rhs = ec_add(&e, p, &ec_add(&e, q2, r).unwrap()).unwrap();
            prop_assert!(lhs.equals(&rhs));
            prop_assert!(e.contains(&lhs));
        }

        #[test]
        fn negative_multiples(a in -5i64..5, x in -4i64..4, y in 1i64..6, n in 0i64..6) {
            let Some((e, pts)) = curve_with_points(a, &[(x, y)]) else { return Ok(()) };
            let p = &pts[0];
            prop_assert!(ec_mul(&e, -n, p).unwrap().equals(&ec_mul(&e, n, p).unwrap().neg()));
            prop_assert!(ec_mul(&e, 0, p).unwrap().is_infinity());
        }
    }

    #[test]
    fn rational_coordinates_in_results() {
        let e = ShortWeierstrass::new(Elem::Q(rat(-1, 1)), Elem::Q(int(1))).unwrap();
        let p = e.point(q(1), q(1)).unwrap();
        let p2 = ec_mul(&e, 2, &p).unwrap();
        assert!(e.contains(&p2));
    }
}
