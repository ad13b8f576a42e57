//! The evaluation point of the second squared-factor family.
//!
//! On `W: y^2 = 4x^3 - lambda x + 1/16` (so `X = 4x`, `Y = 4y` on
//! `Y^2 = X^3 - 4 lambda X + 1`), a half of `p_W = (0, -1/4)` is
//! `(m^2/8, -m^3/8 + 1/4)` for a root `m` of `m^4 - 8m + 16 lambda`. Adding a
//! 3-torsion point `e3` gives `R`, and
//! `rho = (4 y(R) - 1) / (8 x(R))`.
//!
//! Root selectors index the distinct roots in canonical order (real roots
//! ascending, then the others by real and imaginary part). The `e3` selector
//! `k` in `0..8` takes the `X`-root `k / 2` of `f_3` and the `Y`-root `k % 2`.

use serde::Serialize;

use super::curve::{ec_add, torsion_order, ECPoint, NumCurve, NumPoint, ShortWeierstrass};
use super::quartic::{quartic_jacobian, QuarticModel};
use super::torsion::family_curve;
use crate::apfloat::{digits_to_bits, Complex};
use crate::error::{Error, Result};
use crate::exactalg::roots::{aberth, sort_roots};
use crate::exactalg::{Elem, Field, FieldPoly};

pub const M_ROOTS: usize = 4;
pub const E3_CHOICES: usize = 8;
/// Orders searched when checking the class of `(q+) - (q-)`.
const ORDER_SEARCH: u64 = 12;

/// `x^4 + x + lambda`.
pub fn family_quartic(lam: &Elem) -> FieldPoly {
    let f = lam.field();
    FieldPoly::new(&f, vec![lam.clone(), f.one(), f.zero(), f.zero(), f.one()])
}

#[derive(Clone, Debug)]
pub struct RhoCaseII {
    pub rho: Elem,
    pub m: Elem,
    /// Half of the section, in `X, Y` coordinates.
    pub half_point: ECPoint,
    pub e3: ECPoint,
    /// Class of `(q+) - (q-)` on the Jacobian of `x^4 + x + lambda`.
    pub q_class: ECPoint,
    pub q_order: Option<u64>,
}

/// `rho` from `R = (X, Y)` on `Y^2 = X^3 - 4 lambda X + 1`.
pub fn rho_from_point(x_big: &Elem, y_big: &Elem) -> Result<Elem> {
    let f = x_big.field();
    // x = X/4, y = Y/4: (4y - 1)/(8x) = (Y - 1)/(2X)
    let den = x_big * &f.from_i64(2);
    if den.is_zero() {
        return Err(Error::DenominatorZero("x(R) = 0".into()));
    }
    Ok((y_big - &f.one()).checked_div(&den).unwrap())
}

fn check_selectors(m_choice: usize, e3_choice: usize) -> Result<()> {
    if m_choice >= M_ROOTS {
        return Err(Error::RootSelectorInvalid { index: m_choice, count: M_ROOTS });
    }
    if e3_choice >= E3_CHOICES {
        return Err(Error::RootSelectorInvalid { index: e3_choice, count: E3_CHOICES });
    }
    Ok(())
}

/// Exact computation in a tower over the field of `lam`.
pub fn rho_case_ii(lam: &Elem, m_choice: usize, e3_choice: usize) -> Result<RhoCaseII> {
    check_selectors(m_choice, e3_choice)?;
    let k0 = lam.field();
    let c = |v: i64| k0.from_i64(v);
    let k1 = Field::extend(&k0, &[&c(16) * lam, c(-8), c(0), c(0), c(1)], m_choice, "m")?;
    let m = k1.gen();
    let f1 = |v: i64| k1.from_i64(v);
    let half = ECPoint::Affine(
        &m.pow(2) * &k1.from_rational(crate::exactalg::rational::rat(1, 2)),
        &f1(1) - &(&m.pow(3) * &k1.from_rational(crate::exactalg::rational::rat(1, 2))),
    );
    let e = family_curve(lam)?;
    let e1 = e.lift_to(&k1)?;
    if !e1.contains(&half) {
        return Err(Error::InternalCheckFailed("half point is off the curve".into()));
    }
    // 3X^4 - 24 lambda X^2 + 12 X - 16 lambda^2
    let lam1 = k1.lift_checked(lam)?;
    let psi3 = [&f1(-16) * &lam1.pow(2), f1(12), &f1(-24) * &lam1, f1(0), f1(3)];
    let k2 = Field::extend(&k1, &psi3, e3_choice / 2, "e")?;
    let ex = k2.gen();
    let rhs = e.rhs(&ex);
    let k3 = Field::extend(&k2, &[-&rhs, k2.zero(), k2.one()], e3_choice % 2, "f")?;
    let ey = k3.gen();
    let e3 = ECPoint::Affine(k3.lift_checked(&ex)?, ey);
    let e3c = e.lift_to(&k3)?;
    if torsion_order(&e3c, &e3, 3)? != Some(3) {
        return Err(Error::InternalCheckFailed("selected point is not 3-torsion".into()));
    }
    let sum = ec_add(&e3c, &half, &e3)?;
    let (xr, yr) = match &sum {
        ECPoint::Affine(x, y) => (x, y),
        ECPoint::Infinity => return Err(Error::DenominatorZero("R is the point at infinity".into())),
    };
    let rho = rho_from_point(xr, yr)?;
    let model = quartic_jacobian(&family_quartic(lam))?;
    let (q_class, q_order) = q_class_order(&model, &rho)?;
    Ok(RhoCaseII { rho, m, half_point: half, e3, q_class, q_order })
}

fn q_class_order(model: &QuarticModel, rho: &Elem) -> Result<(ECPoint, Option<u64>)> {
    if model.q.eval(rho).is_zero() {
        return Err(Error::RhoOnCurveBranch);
    }
    let cls = model.divisor_class(rho)?;
    let e: ShortWeierstrass = match cls.x() {
        Some(x) => model.jacobian.lift_to(&x.field())?,
        None => model.jacobian.clone(),
    };
    let ord = torsion_order(&e, &cls, ORDER_SEARCH)?;
    Ok((cls, ord))
}

/// Complex counterpart with all intermediate values.
#[derive(Clone, Debug, Serialize)]
pub struct RhoNumeric {
    pub m_choice: usize,
    pub e3_choice: usize,
    pub rho: String,
    pub m: String,
    pub q_order: Option<u64>,
    #[serde(skip)]
    pub rho_value: Complex,
}

fn roots_of(coeffs: &[Complex], prec: u32) -> Result<Vec<Complex>> {
    let mut r = aberth(coeffs, prec).ok_or_else(|| Error::PrecisionExhausted("case ii roots".into()))?;
    sort_roots(&mut r);
    Ok(r)
}

/// `rho` at a complex parameter, working at `digits` decimal digits.
pub fn rho_case_ii_numeric(lam: &Complex, m_choice: usize, e3_choice: usize, digits: u32) -> Result<RhoNumeric> {
    check_selectors(m_choice, e3_choice)?;
    let prec = digits_to_bits(digits) + 64;
    let lam = lam.with_prec(prec);
    let k = |v: i64| Complex::from_i64(v, prec);
    let ms = roots_of(&[lam.scale_i64(16), k(-8), k(0), k(0), k(1)], prec)?;
    let m = ms[m_choice].clone();
    let m2 = m.sqr();
    let half = NumPoint::Affine(m2.mul_2exp(-1), &k(1) - &(&m2 * &m).mul_2exp(-1));
    let xs = roots_of(&[lam.sqr().scale_i64(-16), k(12), lam.scale_i64(-24), k(0), k(3)], prec)?;
    let ex = xs[e3_choice / 2].clone();
    let rhs = &(&(&ex.sqr() - &lam.scale_i64(4)) * &ex) + &k(1);
    let w = rhs.sqrt();
    let mut ys = vec![w.clone(), -w];
    sort_roots(&mut ys);
    let e3 = NumPoint::Affine(ex, ys[e3_choice % 2].clone());
    let curve = NumCurve { a: lam.scale_i64(-4), b: k(1), tol_log2: -(digits_to_bits(digits) as f64) * 0.75 };
    let (xr, yr) = match curve.add(&half, &e3) {
        NumPoint::Affine(x, y) => (x, y),
        NumPoint::Infinity => return Err(Error::DenominatorZero("R is the point at infinity".into())),
    };
    if xr.log2_abs() < -(digits_to_bits(digits) as f64) * 0.75 {
        return Err(Error::DenominatorZero("x(R) = 0".into()));
    }
    let rho = &(&yr - &k(1)) / &xr.scale_i64(2);
    // class of (q+) - (q-) on the Jacobian of x^4 + x + lambda, which is the
    // same curve; the map uses p = r = 0, sigma = 1, c0 = 0
    let v = (&(&rho.sqr().sqr() + &rho) + &lam).sqrt();
    let aj = |v: &Complex| {
        let f = &(v + &rho.sqr());
        NumPoint::Affine(f.scale_i64(2), -&(&(&rho * f).scale_i64(4) + &k(1)))
    };
    let minus = match aj(&-v.clone()) {
        NumPoint::Affine(x, y) => NumPoint::Affine(x, -y),
        NumPoint::Infinity => NumPoint::Infinity,
    };
    let cls = curve.add(&aj(&v), &minus);
    let q_order = curve.torsion_order(&cls, ORDER_SEARCH);
    Ok(RhoNumeric { m_choice, e3_choice, rho: rho.to_string_digits(digits as usize), m: m.to_string_digits(digits as usize), q_order, rho_value: rho })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::rational::rat;

    fn is_real(z: &Complex) -> bool {
        z.im.is_zero() || z.im.log2_abs() < z.re.log2_abs() - 100.0
    }

    #[test]
    fn quarter_with_real_selectors_gives_order_three() {
        let lam = Complex::from_rational(&rat(1, 4), 256);
        for m_choice in 0..2 {
            let mut seen = 0;
            for e3_choice in 0..E3_CHOICES {
                let r = rho_case_ii_numeric(&lam, m_choice, e3_choice, 40).unwrap();
                if is_real(&r.rho_value) {
                    seen += 1;
                    assert_eq!(r.q_order, Some(3), "m {m_choice} e3 {e3_choice}");
                }
            }
            assert!(seen > 0);
        }
    }

    #[test]
    fn exact_tower_at_quarter() {
        let lam = Elem::Q(rat(1, 4));
        let a = rho_case_ii(&lam, 0, 0).unwrap();
        assert_eq!(a.q_order, Some(3));
        let n = rho_case_ii_numeric(&Complex::from_rational(&rat(1, 4), 256), 0, 0, 40).unwrap();
        assert!(a.rho.to_complex(128).dist_log2(&n.rho_value) < -100.0);
        let b = rho_case_ii(&lam, 1, 0).unwrap();
        assert_eq!(b.q_order, Some(3));
        assert!(b.rho.to_complex(128).dist_log2(&a.rho.to_complex(128)) > -20.0);
    }

    #[test]
    fn guarded_denominator_and_selectors() {
        let f = Field::Rational;
        assert!(matches!(rho_from_point(&f.zero(), &f.one()), Err(Error::DenominatorZero(_))));
        let lam = Elem::Q(rat(1, 4));
        assert!(matches!(rho_case_ii(&lam, 4, 0), Err(Error::RootSelectorInvalid { index: 4, count: 4 })));
        assert!(matches!(rho_case_ii(&lam, 0, 8), Err(Error::RootSelectorInvalid { .. })));
    }
}
