//! Quartic curves `v^2 = Q(u)` with square leading coefficient, their
//! Jacobian in short Weierstrass form, and the Abel-Jacobi map based at the
//! point at infinity where `v / u^2` tends to `+sqrt(lc Q)`.
//!
//! Writing `Q = c^2 Q'` with `Q'` monic and `v' = v / c`, complete the
//! square `Q' = (u^2 + pu + r)^2 + sigma u + tau`. With
//! `F = v' + u^2 + pu + r` the map is polynomial in `(u, v')`:
//!
//! ```text
//! X = 2F + 4c0,   Y = -(4uF + 2pF + sigma),   c0 = (p^2/4 - r)/3
//! ```
//!
//! onto `Y^2 = X^3 + aX + b` with `a = 16 A1`, `b = 64 B1` below. The
//! second point at infinity goes to `(4c0, sigma)`.

use super::curve::{ec_add, ECPoint, NumCurve, NumPoint, ShortWeierstrass};
use super::divpoly::RecRing;
use crate::apfloat::Complex;
use crate::error::{Error, Result};
use crate::exactalg::rational::{int, rat};
use crate::exactalg::{Elem, Field, FieldPoly};

/// Completed-square data of a monic quartic and the Jacobian coefficients.
#[derive(Clone, Debug)]
pub struct QuarticData<R> {
    pub p: R,
    pub r: R,
    pub sigma: R,
    pub tau: R,
    pub c0: R,
    pub a: R,
    pub b: R,
}

/// Works over any coefficient ring holding the monic quartic
/// `u^4 + q3 u^3 + q2 u^2 + q1 u + q0`.
pub fn quartic_data<R: RecRing>(q0: &R, q1: &R, q2: &R, q3: &R) -> QuarticData<R> {
    let half = rat(1, 2);
    let p = q3.scale_q(&half);
    let p2 = p.mul(&p);
    let r = q2.sub(&p2).scale_q(&half);
    let sigma = q1.sub(&p.mul(&r).scale_q(&int(2)));
    let tau = q0.sub(&r.mul(&r));
    let c0 = p2.scale_q(&rat(1, 4)).sub(&r).scale_q(&rat(1, 3));
    let k = p.mul(&sigma).scale_q(&rat(1, 8)).sub(&tau.scale_q(&rat(1, 4)));
    let c0sq = c0.mul(&c0);
    let a1 = k.sub(&c0sq.scale_q(&int(3)));
    let b1 = sigma.mul(&sigma).scale_q(&rat(1, 64)).sub(&c0.mul(&k)).add(&c0sq.mul(&c0).scale_q(&int(2)));
    QuarticData { p, r, sigma, tau, c0, a: a1.scale_q(&int(16)), b: b1.scale_q(&int(64)) }
}

/// Classical invariants of a monic quartic: `(I, J)`.
pub fn quartic_invariants<R: RecRing>(q0: &R, q1: &R, q2: &R, q3: &R) -> (R, R) {
    let i = q0.scale_q(&int(12)).sub(&q1.mul(q3).scale_q(&int(3))).add(&q2.mul(q2));
    let j = q0
        .mul(q2)
        .scale_q(&int(72))
        .add(&q1.mul(q2).mul(q3).scale_q(&int(9)))
        .sub(&q1.mul(q1).scale_q(&int(27)))
        .sub(&q0.mul(q3).mul(q3).scale_q(&int(27)))
        .sub(&q2.mul(q2).mul(q2).scale_q(&int(2)));
    (i, j)
}

#[derive(Clone, Debug)]
pub enum QuarticPoint {
    /// `v / u^2 -> +c`, the base point.
    InfPlus,
    InfMinus,
    Affine(Elem, Elem),
}

#[derive(Clone, Debug)]
pub struct QuarticModel {
    pub q: FieldPoly,
    /// Chosen square root of the leading coefficient.
    pub c: Elem,
    pub data: QuarticData<Elem>,
    pub jacobian: ShortWeierstrass,
    /// Image of the divisor class `(inf+) - (inf-)`.
    pub infinity_class: ECPoint,
}

pub fn quartic_jacobian(q: &FieldPoly) -> Result<QuarticModel> {
    if q.deg() != 4 {
        return Err(Error::InvalidArgument(format!("expected a quartic, got degree {}", q.deg())));
    }
    if !q.is_squarefree() {
        return Err(Error::NotSquarefree);
    }
    let lc = q.lc();
    let c = lc.sqrt().ok_or(Error::NonSquareLeadingCoeff)?;
    let c = if principal(&c.to_complex(96)) { c } else { -&c };
    let m = q.monic();
    let k = m.coeffs();
    let data = quartic_data(&k[0], &k[1], &k[2], &k[3]);
    let jacobian = ShortWeierstrass::new(data.a.clone(), data.b.clone())?;
    let inf_minus = ECPoint::Affine(&data.c0 * &q.field().from_i64(4), data.sigma.clone());
    let infinity_class = inf_minus.neg();
    let model = QuarticModel { q: q.clone(), c, data, jacobian, infinity_class };
    if !model.jacobian.contains(&model.infinity_class) {
        return Err(Error::InternalCheckFailed("image of the points at infinity is off the Jacobian".into()));
    }
    Ok(model)
}

impl QuarticModel {
    pub fn field(&self) -> &Field {
        self.q.field()
    }

    /// The map on a point of the quartic (coordinates may lie in an
    /// extension of the model's field).
    pub fn map_point(&self, pt: &QuarticPoint) -> Result<ECPoint> {
        let d = &self.data;
        match pt {
            QuarticPoint::InfPlus => Ok(ECPoint::Infinity),
            QuarticPoint::InfMinus => Ok(self.infinity_class.neg()),
            QuarticPoint::Affine(u, v) => {
                if !(&v.pow(2) - &self.q.eval(u)).is_zero() {
                    return Err(Error::InternalCheckFailed("point is not on the quartic".into()));
                }
                let f = u.field();
                let vp = v.checked_div(&self.c).unwrap();
                let big_f = &(&(&vp + &(u * u)) + &(&d.p * u)) + &d.r;
                let x = &(&big_f * &f.from_i64(2)) + &(&d.c0 * &f.from_i64(4));
                let y = &(&(&(u * &big_f) * &f.from_i64(4)) + &(&(&d.p * &big_f) * &f.from_i64(2))) + &d.sigma;
                let out = ECPoint::Affine(x, -&y);
                if !self.jacobian.contains(&out) {
                    return Err(Error::InternalCheckFailed("Abel-Jacobi image is off the Jacobian".into()));
                }
                Ok(out)
            }
        }
    }

    /// `sqrt(Q(u0))` with the requested sign, in the field of `u0` when it is
    /// a square there and otherwise in a quadratic extension (if allowed).
    /// The `+` branch is the root with positive real part at the chosen
    /// embedding, or positive imaginary part when the real part vanishes.
    pub fn branch(&self, u0: &Elem, sign: i32, allow_extension: bool) -> Result<Elem> {
        let val = self.q.eval(u0);
        let w = match val.sqrt() {
            Some(w) => w,
            None => {
                if !allow_extension {
                    return Err(Error::BranchNotInField);
                }
                let base = val.field();
                let k = Field::extend(&base, &[-&val, base.zero(), base.one()], 1, "w")?;
                let g = k.gen();
                if !(&g.pow(2) - &val).is_zero() {
                    return Err(Error::BranchNotInField);
                }
                g
            }
        };
        let w = if principal(&w.to_complex(96)) { w } else { -&w };
        Ok(if sign < 0 { -&w } else { w })
    }

    pub fn abel_jacobi(&self, u0: &Elem, sign: i32) -> Result<ECPoint> {
        self.abel_jacobi_with(u0, sign, true)
    }

    pub fn abel_jacobi_with(&self, u0: &Elem, sign: i32, allow_extension: bool) -> Result<ECPoint> {
        let v = self.branch(u0, sign, allow_extension)?;
        self.map_point(&QuarticPoint::Affine(u0.clone(), v))
    }

    /// Class of `(u0, +w) - (u0, -w)`.
    pub fn divisor_class(&self, u0: &Elem) -> Result<ECPoint> {
        self.divisor_class_with(u0, true)
    }

    pub fn divisor_class_with(&self, u0: &Elem, allow_extension: bool) -> Result<ECPoint> {
        let v = self.branch(u0, 1, allow_extension)?;
        let plus = self.map_point(&QuarticPoint::Affine(u0.clone(), v.clone()))?;
        let minus = self.map_point(&QuarticPoint::Affine(u0.clone(), -&v))?;
        let e = self.jacobian.lift_to(&plus.x().map(|x| x.field()).unwrap_or_else(|| self.field().clone()))?;
        ec_add(&e, &plus, &minus.neg())
    }

    pub fn numeric_curve(&self, prec: u32) -> NumCurve {
        NumCurve::from_exact(&self.jacobian, prec)
    }

    /// The map on complex points `(u, v)` with `v^2 = Q(u)`.
    pub fn map_numeric(&self, u: &Complex, v: &Complex, prec: u32) -> NumPoint {
        let d = &self.data;
        let c = |e: &Elem| e.to_complex(prec);
        let (p, r, sigma, c0) = (c(&d.p), c(&d.r), c(&d.sigma), c(&d.c0));
        let vp = v / &c(&self.c);
        let big_f = &(&(&vp + &u.sqr()) + &(&p * u)) + &r;
        let x = &big_f.scale_i64(2) + &c0.scale_i64(4);
        let y = &(&(u * &big_f).scale_i64(4) + &(&p * &big_f).scale_i64(2)) + &sigma;
        NumPoint::Affine(x, -y)
    }
}

fn principal(z: &Complex) -> bool {
    let re = z.re.log2_abs();
    let im = z.im.log2_abs();
    if z.re.is_zero() || re < im - 60.0 {
        !z.im.is_negative()
    } else {
        !z.re.is_negative()
    }
}

/// Completed-square data for `u^4 + u + lambda` with `lambda` symbolic.
pub fn family_data_symbolic() -> QuarticData<FieldPoly> {
    let c = |k: i64| FieldPoly::from_i64s(&[k]);
    quartic_data(&FieldPoly::from_i64s(&[0, 1]), &c(1), &c(0), &c(0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::elliptic::curve::{ec_mul, torsion_order};
    use crate::exactalg::parse_poly;
    use proptest::prelude::*;

    fn q(n: i64, d: i64) -> Elem {
        Elem::Q(rat(n, d))
    }

    #[test]
    fn family_gives_the_rescaled_weierstrass_model() {
        for lam in [rat(0, 1), rat(1, 4), rat(-3, 1)] {
            let text = format!("x^4+x+{}", crate::exactalg::rational::format_rational(&lam)).replace("+-", "-");
            let m = quartic_jacobian(&parse_poly(&text).unwrap()).unwrap();
            assert_eq!(m.jacobian.a.as_rational().unwrap(), &lam * &int(-4));
            assert_eq!(m.jacobian.b.as_rational().unwrap(), int(1));
            assert!(m.infinity_class.equals(&ECPoint::Affine(q(0, 1), q(-1, 1))));
        }
    }

    #[test]
    fn base_point_and_second_infinity() {
        let m = quartic_jacobian(&parse_poly("x^4+x+1/4").unwrap()).unwrap();
        assert!(m.map_point(&QuarticPoint::InfPlus).unwrap().is_infinity());
        let im = m.map_point(&QuarticPoint::InfMinus).unwrap();
        assert!(im.equals(&ECPoint::Affine(q(0, 1), q(1, 1))));
        assert!(im.neg().equals(&m.infinity_class));
    }

    #[test]
    fn other_quartics_land_on_their_jacobian() {
        let m = quartic_jacobian(&parse_poly("x^4-1").unwrap()).unwrap();
        assert!(m.jacobian.contains(&m.infinity_class));
        // (u, v) = (1, 0) and (0, i)
        assert!(m.abel_jacobi(&q(1, 1), 1).is_ok());
        let p = m.abel_jacobi(&q(0, 1), 1).unwrap();
        assert!(!p.x().unwrap().field().is_rational());
        let m = quartic_jacobian(&parse_poly("4*x^4-3*x^3+x-7").unwrap()).unwrap();
        assert!(m.jacobian.contains(&m.infinity_class));
        assert!(m.abel_jacobi(&q(2, 1), -1).is_ok());
    }

    #[test]
    fn preconditions() {
        assert!(matches!(quartic_jacobian(&parse_poly("x^4").unwrap()), Err(Error::NotSquarefree)));
        assert!(matches!(quartic_jacobian(&parse_poly("2*x^4+1").unwrap()), Err(Error::NonSquareLeadingCoeff)));
        let m = quartic_jacobian(&parse_poly("x^4+x+1/4").unwrap()).unwrap();
        assert!(matches!(m.abel_jacobi_with(&q(2, 1), 1, false), Err(Error::BranchNotInField)));
        assert!(m.abel_jacobi_with(&q(1, 1), 1, false).is_ok());
    }

    #[test]
    fn divisor_class_is_twice_a_branch_image() {
        // on x^4 + x, u0 = 0 is a branch point: the class vanishes
        let m = quartic_jacobian(&parse_poly("x^4+x").unwrap()).unwrap();
        assert!(m.divisor_class(&q(0, 1)).unwrap().is_infinity());
        // at lambda = 0 the section is 3-torsion
        assert_eq!(torsion_order(&m.jacobian, &m.infinity_class, 10).unwrap(), Some(3));
        let d = m.divisor_class(&q(1, 1)).unwrap();
        let e = m.jacobian.lift_to(&d.x().unwrap().field()).unwrap();
        assert!(e.contains(&d));
        assert!(ec_mul(&e, 2, &d).is_ok());
    }

    #[test]
    fn symbolic_family_specializes() {
        let sym = family_data_symbolic();
        for lam in [rat(0, 1), rat(1, 4), rat(-3, 1), rat(7, 5)] {
            let l = Elem::Q(lam.clone());
            let at = quartic_data(&l, &q(1, 1), &q(0, 1), &q(0, 1));
            assert!(sym.a.eval(&l).equals(&at.a));
            assert!(sym.b.eval(&l).equals(&at.b));
        }
        assert_eq!(sym.a.to_string(), "-4*x");
        assert_eq!(sym.b.to_string(), "1");
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(40))]

        #[test]
        fn coefficients_match_classical_invariants(c in prop::collection::vec(-9i64..9, 4)) {
            let k: Vec<Elem> = c.iter().map(|&x| q(x, 1)).collect();
            let d = quartic_data(&k[0], &k[1], &k[2], &k[3]);
            let (i, j) = quartic_invariants(&k[0], &k[1], &k[2], &k[3]);
            prop_assert!(d.a.equals(&i.scale_q(&rat(-1, 3))));
            prop_assert!(d.b.equals(&j.scale_q(&rat(-1, 27))));
        }

        #[test]
        fn rational_points_map_onto_the_jacobian(u in -6i64..6, w in -6i64..6, c1 in -5i64..5, c3 in -3i64..3) {
            // choose q0 so that (u, w) lies on v^2 = x^4 + c3 x^3 + c1 x + q0
            let q0 = w * w - u.pow(4) - c3 * u.pow(3) - c1 * u;
            let f = FieldPoly::from_i64s(&[q0, c1, 0, c3, 1]);
            let Ok(m) = quartic_jacobian(&f) else { return Ok(()) };
            let pt = m.map_point(&QuarticPoint::Affine(q(u, 1), q(w, 1))).unwrap();
            prop_assert!(m.jacobian.contains(&pt));
        }
    }
}
