//! Division polynomials.
//!
//! With `F = 4(X^3 + aX + b) = (2Y)^2`, the classical `psi_n` is written
//! `psi_n = f_n` for odd `n` and `psi_n = 2Y f_n` for even `n`, where every
//! `f_n` is a polynomial in `X` alone:
//!
//! ```text
//! f_2m   = f_m (f_{m+2} f_{m-1}^2 - f_{m-2} f_{m+1}^2)
//! f_2m+1 = F^2 f_{m+2} f_m^3 - f_{m-1} f_{m+1}^3     (m even)
//! f_2m+1 = f_{m+2} f_m^3 - F^2 f_{m-1} f_{m+1}^3     (m odd)
//! ```
//!
//! The same recurrence runs on values at a fixed point, which is how the
//! torsion conditions on a family are built.

use super::curve::ShortWeierstrass;
use crate::exactalg::{Elem, FieldPoly, Rational};

/// Minimal ring interface shared by polynomials and their values.
pub trait RecRing: Clone {
    fn add(&self, o: &Self) -> Self;
    fn sub(&self, o: &Self) -> Self;
    fn mul(&self, o: &Self) -> Self;
    fn is_zero(&self) -> bool;
    fn scale_q(&self, q: &Rational) -> Self;
}

impl RecRing for FieldPoly {
    fn add(&self, o: &Self) -> Self {
        FieldPoly::add(self, o)
    }
    fn sub(&self, o: &Self) -> Self {
        FieldPoly::sub(self, o)
    }
    fn mul(&self, o: &Self) -> Self {
        FieldPoly::mul(self, o)
    }
    fn is_zero(&self) -> bool {
        FieldPoly::is_zero(self)
    }
    fn scale_q(&self, q: &Rational) -> Self {
        self.scale(&Elem::Q(q.clone()))
    }
}

impl RecRing for Elem {
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn sub(&self, o: &Self) -> Self {
        self - o
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn is_zero(&self) -> bool {
        Elem::is_zero(self)
    }
    fn scale_q(&self, q: &Rational) -> Self {
        self * &Elem::Q(q.clone())
    }
}

/// Extends `f` (holding `f_0 .. f_4` at least) through index `n`, where
/// `f_sq` is `F^2`.
pub fn extend_sequence<R: RecRing>(f: &mut Vec<R>, f_sq: &R, n: usize) {
    while f.len() <= n {
        let k = f.len();
        let m = k / 2;
        let next = if k.is_multiple_of(2) {
            let t1 = f[m + 2].mul(&f[m - 1]).mul(&f[m - 1]);
            let t2 = f[m - 2].mul(&f[m + 1]).mul(&f[m + 1]);
            f[m].mul(&t1.sub(&t2))
        } else {
            let cube = |x: &R| x.mul(x).mul(x);
            let (u, v) = (f[m + 2].mul(&cube(&f[m])), f[m - 1].mul(&cube(&f[m + 1])));
            if m.is_multiple_of(2) {
                f_sq.mul(&u).sub(&v)
            } else {
                u.sub(&f_sq.mul(&v))
            }
        };
        f.push(next);
    }
}

/// `f_0 .. f_4` for `Y^2 = X^3 + aX + b`, with `X` given as an element of
/// the ring by `x` and constants injected by `c`.
pub fn initial_terms<R: RecRing>(a: &R, b: &R, x: &R, c: impl Fn(i64) -> R) -> Vec<R> {
    let x2 = x.mul(x);
    let x3 = x2.mul(x);
    let a2 = a.mul(a);
    // 3X^4 + 6aX^2 + 12bX - a^2
    let f3 = c(3).mul(&x2).mul(&x2).add(&c(6).mul(a).mul(&x2)).add(&c(12).mul(b).mul(x)).sub(&a2);
    // 2(X^6 + 5aX^4 + 20bX^3 - 5a^2X^2 - 4abX - 8b^2 - a^3)
    let inner = x3
        .mul(&x3)
        .add(&c(5).mul(a).mul(&x2).mul(&x2))
        .add(&c(20).mul(b).mul(&x3))
        .sub(&c(5).mul(&a2).mul(&x2))
        .sub(&c(4).mul(a).mul(b).mul(x))
        .sub(&c(8).mul(b).mul(b))
        .sub(&a2.mul(a));
    vec![c(0), c(1), c(1), f3, c(2).mul(&inner)]
}

/// `f_n` as a polynomial in `X`, cached on the curve. `psi_n` is `f_n` for
/// odd `n` and `2Y f_n` for even `n`.
pub fn division_poly(e: &ShortWeierstrass, n: usize) -> FieldPoly {
    if let Some(p) = e.divpolys.read().unwrap().get(n) {
        return p.clone();
    }
    let field = e.field().clone();
    let mut cache = e.divpolys.write().unwrap();
    if cache.len() < 5 {
        let c = |k: i64| FieldPoly::constant(&field, field.from_i64(k));
        let a = FieldPoly::constant(&field, e.a.clone());
        let b = FieldPoly::constant(&field, e.b.clone());
        *cache = initial_terms(&a, &b, &FieldPoly::x(&field), c);
    }
    let big_f = e.rhs_poly().scale(&field.from_i64(4));
    let f_sq = big_f.sqr();
    extend_sequence(&mut cache, &f_sq, n);
    cache[n].clone()
}

/// `psi_n^2` as a polynomial in `X`; its roots are the `X`-coordinates of
/// the nonzero points killed by `n`.
pub fn psi_squared(e: &ShortWeierstrass, n: usize) -> FieldPoly {
    let f = division_poly(e, n);
    let sq = f.sqr();
    if n.is_multiple_of(2) {
        sq.mul(&e.rhs_poly().scale(&e.field().from_i64(4)))
    } else {
        sq
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::elliptic::curve::{ec_mul, ECPoint};
    use crate::exactalg::rational::int;
    use crate::exactalg::{parse_poly, Field};
    use proptest::prelude::*;

    #[test]
    fn low_order_polynomials() {
        let e = ShortWeierstrass::from_rationals(-3, 5).unwrap();
        assert_eq!(division_poly(&e, 1).to_string(), "1");
        assert_eq!(division_poly(&e, 3).to_string(), "3*x^4-18*x^2+60*x-9");
        assert_eq!(division_poly(&e, 4), parse_poly("2*(x^6-15*x^4+100*x^3-45*x^2+60*x-200+27)").unwrap());
        assert_eq!(division_poly(&e, 5).deg(), 12);
        assert_eq!(division_poly(&e, 6).deg(), 16);
        assert_eq!(division_poly(&e, 7).deg(), 24);
    }

    #[test]
    fn family_order_three_condition_at_origin() {
        // a = -4 lambda, b = 1: f_3(0) = -a^2 = -16 lambda^2
        let x = FieldPoly::x(&Field::Rational);
        let c = |k: i64| FieldPoly::constant(&Field::Rational, Field::Rational.from_i64(k));
        let a = x.scale(&Field::Rational.from_i64(-4));
        let zero = c(0);
        let f = initial_terms(&a, &c(1), &zero, c);
        assert_eq!(f[3].to_string(), "-16*x^2");
    }

    /// Curves `Y^2 = X^3 + aX + b` through `(x, y)`.
    fn curve_through(a: i64, x: i64, y: i64) -> Option<(ShortWeierstrass, ECPoint)> {
        let b = y * y - x * x * x - a * x;
        let e = ShortWeierstrass::from_rationals(a, b).ok()?;
        Some((e, ECPoint::Affine(Elem::Q(int(x)), Elem::Q(int(y)))))
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(50))]

        #[test]
        fn vanishing_matches_multiplication(a in -6i64..6, x in -5i64..5, y in -6i64..6, n in 2usize..9) {
            let Some((e, p)) = curve_through(a, x, y) else { return Ok(()) };
            let killed = ec_mul(&e, n as i64, &p).unwrap().is_infinity();
            let v = psi_squared(&e, n).eval(p.x().unwrap());
            prop_assert_eq!(v.is_zero(), killed);
        }
    }

    #[test]
    fn known_torsion_points() {
        // (2, 3) on Y^2 = X^3 + 1 has order 6; (0, 1) order 3; (-1, 0) order 2
        let e = ShortWeierstrass::from_rationals(0, 1).unwrap();
        for (x, n) in [(2, 6), (0, 3), (-1, 2)] {
            let xv = Elem::Q(int(x));
            assert!(psi_squared(&e, n).eval(&xv).is_zero());
            for d in 2..n {
                if n % d != 0 {
                    assert!(!psi_squared(&e, d).eval(&xv).is_zero());
                }
            }
        }
    }
}
