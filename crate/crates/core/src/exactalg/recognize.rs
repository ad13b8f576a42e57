//! Recognition of reals as rationals with bounded denominator.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::rational::Rational;
use crate::apfloat::Real;

/// The rational with the smallest denominator (then smallest numerator in
/// absolute value) in the open interval `(lo, hi)`.
pub fn simplest_in_interval(lo: &Rational, hi: &Rational) -> Rational {
    simplest_bounded(lo, hi, None).expect("unbounded search always succeeds")
}

/// As `simplest_in_interval`, giving up once every candidate denominator
/// exceeds `max_den`.
fn simplest_bounded(lo: &Rational, hi: &Rational, max_den: Option<&BigInt>) -> Option<Rational> {
    assert!(lo < hi, "empty interval");
    if lo.is_negative() && hi.is_positive() {
        return Some(Rational::zero());
    }
    if !hi.is_positive() {
        return simplest_bounded(&-hi, &-lo, max_den).map(|r| -r);
    }
    // continued fraction walk on 0 <= ln/ld < hn/hd; x = (p y + p1) / (q y + q1)
    let (mut ln, mut ld) = (lo.numer().clone(), lo.denom().clone());
    let (mut hn, mut hd) = (hi.numer().clone(), hi.denom().clone());
    let (mut p, mut p1, mut q, mut q1) = (BigInt::one(), BigInt::zero(), BigInt::zero(), BigInt::one());
    loop {
        let fl = ln.div_floor(&ld);
        let next = &fl + 1u32;
        // terminal value vn/vd of y
        let v = if &next * &hd < hn {
            Some((next, BigInt::one()))
        } else if ln == &fl * &ld {
            let rest = &hn - &fl * &hd;
            let y = &hd / &rest + 1u32;
            Some((&fl * &y + 1u32, y))
        } else {
            None
        };
        if let Some((vn, vd)) = v {
            let den = &q * &vn + &q1 * &vd;
            if max_den.is_some_and(|m| &den > m) {
                return None;
            }
            return Some(Rational::new(&p * &vn + &p1 * &vd, den));
        }
        let np = &fl * &p + &p1;
        let nq = &fl * &q + &q1;
        (p1, p, q1, q) = (p, np, q, nq);
        if max_den.is_some_and(|m| &q > m) {
            return None;
        }
        let lo_rest = &ln - &fl * &ld;
        let hi_rest = &hn - &fl * &hd;
        (ln, ld, hn, hd) = (hd, hi_rest, ld, lo_rest);
    }
}

/// Reduced `k/m` with `m <= m_max` and `|x - k/m| < tol`, smallest `m`
/// first and nearest `k` among equal denominators.
pub fn rational_recognize(x: &Real, m_max: u64, tol: &Real) -> Option<(BigInt, BigInt)> {
    recognize_big(x, &BigInt::from(m_max), tol)
}

pub fn recognize_big(x: &Real, m_max: &BigInt, tol: &Real) -> Option<(BigInt, BigInt)> {
    if !tol.is_negative() && tol.is_zero() {
        return None;
    }
    let xq = x.to_rational();
    let t = tol.abs().to_rational();
    let s = simplest_bounded(&(&xq - &t), &(&xq + &t), Some(m_max))?;
    let m = s.denom().clone();
    if &m > m_max || m < BigInt::one() {
        return None;
    }
    let mq = Rational::from_integer(m.clone());
    let k = (&xq * &mq).round().to_integer();
    let cand = Rational::new(k.clone(), m.clone());
    if (&cand - &xq).abs() < t {
        Some((k, m))
    } else {
        Some((s.numer().clone(), m))
    }
}

/// Recognition of a value expected to be exactly rational, for
/// reconstructing exact data from high-precision numerics. The tolerance is
/// `2^-(prec/2)` and the denominator bound `2^(prec/4)`.
pub fn recognize_exact(x: &Real) -> Option<Rational> {
    let p = x.prec();
    let tol = Real::one(p).mul_2exp(-((p / 2) as i64) + x.magnitude_exp().max(0));
    let bound = BigInt::one() << (p / 4) as usize;
    recognize_big(x, &bound, &tol).map(|(k, m)| Rational::new(k, m))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::rational::rat;
    use proptest::prelude::*;

    fn floor_q(q: &Rational) -> BigInt {
        q.numer().div_floor(q.denom())
    }

    fn brute(x: f64, m_max: u64, tol: f64) -> Option<(i64, i64)> {
        for m in 1..=m_max as i64 {
            let k = (x * m as f64).round() as i64;
            if (x - k as f64 / m as f64).abs() < tol {
                return Some((k, m));
            }
        }
        None
    }

    #[test]
    fn worked_examples() {
        let p = 128;
        let tol = Real::from_f64(1e-9, p);
        let third = Real::parse_decimal("0.333333333333333333333", p).unwrap();
        assert_eq!(rational_recognize(&third, 10, &tol), Some((1.into(), 3.into())));
        assert_eq!(rational_recognize(&Real::zero(p), 10, &tol), Some((0.into(), 1.into())));
        let l = Real::parse_decimal("0.30103", p).unwrap();
        assert_eq!(rational_recognize(&l, 10, &tol), None);
    }

    #[test]
    fn simplest_fraction_cases() {
        assert_eq!(simplest_in_interval(&rat(1, 3), &rat(1, 2)), rat(2, 5));
        assert_eq!(simplest_in_interval(&rat(-7, 3), &rat(-2, 1)), rat(-9, 4));
        assert_eq!(simplest_in_interval(&rat(3, 1), &rat(7, 2)), rat(10, 3));
    }

    proptest! {
        #[test]
        fn agrees_with_brute_force(k in -500i64..500, m in 1i64..60, jitter in -1e-7f64..1e-7, m_max in 1u64..80) {
            let x = k as f64 / m as f64 + jitter;
            let tol = 1e-5;
            let got = rational_recognize(&Real::from_f64(x, 128), m_max, &Real::from_f64(tol, 128));
            let want = brute(x, m_max, tol);
            prop_assert_eq!(got.map(|(a, b)| (a.try_into().unwrap(), b.try_into().unwrap())), want);
        }

        #[test]
        fn simplest_matches_denominator_scan(a in -300i64..300, b in 1i64..40, c in 1i64..300, d in 1i64..40) {
            let lo = rat(a, b);
            let hi = &lo + rat(c, d);
            let want = (1i64..).find_map(|m| {
                let (k0, k1) = (floor_q(&(&lo * rat(m, 1))), floor_q(&(&hi * rat(m, 1))) + BigInt::one());
                let (k0, k1): (i64, i64) = (k0.try_into().unwrap(), k1.try_into().unwrap());
                let inside: Vec<i64> = (k0..=k1).filter(|&k| lo < rat(k, m) && rat(k, m) < hi).collect();
                inside.into_iter().min_by_key(|k| k.abs()).map(|k| rat(k, m))
            });
            prop_assert_eq!(simplest_in_interval(&lo, &hi), want.unwrap());
        }

        #[test]
        fn exact_fractions_are_fixed_points(k in -10_000i64..10_000, m in 1i64..200) {
            let q = rat(k, m);
            let x = Real::from_rational(&q, 200);
            let tol = Real::from_f64(1e-30, 200);
            let (a, b) = rational_recognize(&x, 200, &tol).unwrap();
            prop_assert_eq!(Rational::new(a.clone(), b.clone()), q);
            let y = Real::from_rational(&Rational::new(a, b), 200);
            let again = rational_recognize(&y, 200, &tol).unwrap();
            prop_assert_eq!(Rational::new(again.0, again.1), Rational::new(k.into(), m.into()));
        }
    }
}
