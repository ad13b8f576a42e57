//! Complex multiplication data and the Ribet section.
//!
//! For a purely imaginary `alpha` in `2 End(E)` and `v = alpha u`, the
//! section is `delta = sigma(u + v) / (sigma(u) sigma(v)) exp(-s2 u v)` with
//! logarithm `(zeta(v) u - s2 u v, u)`. Here `s2` is the constant with
//! `eta2 - s2 omega2 = conj(tau) (eta1 - s2 omega1)`.

use num_integer::Integer;
use serde::Serialize;

use super::{betti_g, extension_make, g_log, GBetti, GLog, GPoint};
use crate::apfloat::{Complex, Real};
use crate::elliptic::NumPoint;
use crate::error::{Error, Result};
use crate::lattice::{check_off_lattice, coords, wp, wsigma, wzeta, Lattice};

/// Height bound for the integer relation certifying complex multiplication.
pub const CM_HEIGHT: i64 = 1_000_000;

/// Ray parameters for the limit at torsion arguments. Richardson
/// extrapolation uses the first three and then all four.
pub const RAY_EPSILONS: [f64; 4] = [1e-5, 1e-6, 1e-7, 1e-8];

/// `a tau^2 + b tau + c = 0` with `a > 0`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct CmRelation {
    pub a: i64,
    pub b: i64,
    pub c: i64,
}

/// Searches `a = 1..height` with `b, c` forced by `Re tau` and `|tau|^2`,
/// then verifies the relation at full precision.
pub fn cm_relation(l: &Lattice, height: i64) -> Option<CmRelation> {
    let t = l.tau.to_c64();
    let (re2, n) = (2.0 * t.re, t.norm_sqr());
    for a in 1..=height {
        let bf = -(a as f64) * re2;
        let cf = (a as f64) * n;
        let (b, c) = (bf.round(), cf.round());
        if (bf - b).abs() > 1e-6 || (cf - c).abs() > 1e-6 || b.abs() > height as f64 || c.abs() > height as f64 {
            continue;
        }
        let (b, c) = (b as i64, c as i64);
        let val = &(&l.tau.sqr().scale_i64(a) + &l.tau.scale_i64(b)) + &Complex::from_i64(c, l.bits());
        if val.log2_abs() < l.tol_log2(12) + (a as f64).log2() {
            return Some(CmRelation { a, b, c });
        }
    }
    None
}

pub fn s2_value(l: &Lattice) -> Result<Complex> {
    if cm_relation(l, CM_HEIGHT).is_none() {
        return Err(Error::NotCM(CM_HEIGHT as u64));
    }
    let tb = l.tau.conj();
    let den = &l.omega2 - &(&tb * &l.omega1);
    if den.log2_abs() < l.omega1.log2_abs() + l.tol_log2(0) / 2.0 {
        return Err(Error::IllConditioned);
    }
    Ok(&(&l.eta2 - &(&tb * &l.eta1)) / &den)
}

fn in_lattice(l: &Lattice, w: &Complex) -> bool {
    let (b1, b2) = coords(l, w);
    let tol = l.tol_log2(0) / 2.0;
    [b1, b2].iter().all(|b| {
        let r = Real::from_bigint(&b.round(), b.prec());
        (b - &r).log2_abs() < tol
    })
}

/// Whether multiplication by `alpha` maps the lattice into itself.
pub fn is_endomorphism(l: &Lattice, alpha: &Complex) -> bool {
    in_lattice(l, &(alpha * &l.omega1)) && in_lattice(l, &(alpha * &l.omega2))
}

fn check_alpha(l: &Lattice, alpha: &Complex) -> Result<()> {
    let alpha = alpha.with_prec(l.bits());
    if alpha.is_zero() || alpha.log2_abs() < l.tol_log2(0) || alpha.re.log2_abs() > alpha.log2_abs() + l.tol_log2(12) {
        return Err(Error::AlphaNotAntisymmetric);
    }
    if !is_endomorphism(l, &alpha) {
        return Err(Error::InvalidArgument("alpha is not an endomorphism of the lattice".into()));
    }
    if !is_endomorphism(l, &alpha.mul_2exp(-1)) {
        return Err(Error::AlphaParity);
    }
    Ok(())
}

#[derive(Clone, Debug)]
pub struct RibetDelta {
    pub delta: Complex,
    pub v: Complex,
    pub s2: Complex,
    /// `(zeta(v) u - s2 u v, u)`.
    pub log: GLog,
}

pub fn ribet_delta(l: &Lattice, alpha: &Complex, u: &Complex) -> Result<RibetDelta> {
    check_alpha(l, alpha)?;
    let s2 = s2_value(l)?;
    let u = u.with_prec(l.bits());
    let v = &alpha.with_prec(l.bits()) * &u;
    check_off_lattice(l, &u, "u")?;
    check_off_lattice(l, &v, "alpha u")?;
    let suv = &(&s2 * &u) * &v;
    let delta = &(&wsigma(l, &(&u + &v)) / &(&wsigma(l, &u) * &wsigma(l, &v))) * &(-&suv).exp();
    let t = &(&wzeta(l, &v)? * &u) - &suv;
    Ok(RibetDelta { delta, v, s2, log: GLog { t, z: u } })
}

/// Nonzero points of the kernel of `gamma`, as representatives in `C`.
pub fn torsion_kernel(l: &Lattice, gamma: &Complex) -> Result<Vec<Complex>> {
    if !is_endomorphism(l, gamma) {
        return Err(Error::InvalidArgument("gamma is not an endomorphism of the lattice".into()));
    }
    let norm = gamma.norm_sqr().to_f64().round() as i64;
    let mut out = Vec::new();
    for a in 0..norm {
        for b in 0..norm {
            if a == 0 && b == 0 {
                continue;
            }
            let e = (&l.omega1.scale_i64(a) + &l.omega2.scale_i64(b)).scale(&Real::from_i64(norm, l.bits()).recip());
            if in_lattice(l, &(gamma * &e)) {
                out.push(e);
            }
        }
    }
    if out.len() as i64 != norm - 1 {
        return Err(Error::InternalCheckFailed(format!("kernel has {} nonzero points, expected {}", out.len(), norm - 1)));
    }
    Ok(out)
}

/// Both sides of `(theta(gamma z) / theta(z)^N)^2 = gamma^2 prod (wp(z) - wp(e))`
/// with `theta(z) = sigma(z) exp(-s2 z^2 / 2)` and `N = |gamma|^2`.
pub fn theta_identity(l: &Lattice, gamma: &Complex, z: &Complex) -> Result<(Complex, Complex)> {
    let s2 = s2_value(l)?;
    let gamma = gamma.with_prec(l.bits());
    let z = z.with_prec(l.bits());
    let kernel = torsion_kernel(l, &gamma)?;
    let norm = kernel.len() as i64 + 1;
    let theta = |w: &Complex| &wsigma(l, w) * &(-&(&s2 * &w.sqr()).mul_2exp(-1)).exp();
    let lhs = (&theta(&(&gamma * &z)) / &theta(&z).powi(norm)).sqr();
    let pz = wp(l, &z)?.0;
    let mut rhs = gamma.sqr();
    for e in &kernel {
        rhs = &rhs * &(&pz - &wp(l, e)?.0);
    }
    Ok((lhs, rhs))
}

#[derive(Clone, Debug)]
pub struct RibetCheck {
    pub n: u64,
    pub k1: i64,
    pub k2: i64,
    pub m: u64,
    pub divides_n2: bool,
    /// Limit of the section's logarithm along the ray.
    pub betti: GBetti,
    /// The closed-form logarithm at `u` itself.
    pub direct: GBetti,
    /// `|T3 - T2|` over the three coordinates, as `log2`.
    pub extrapolation_gap_log2: f64,
}

/// Neville extrapolation to `eps = 0`.
fn extrapolate(eps: &[Real], vals: &[Complex]) -> Complex {
    let mut p: Vec<Complex> = vals.to_vec();
    let n = eps.len();
    for k in 1..n {
        for i in 0..n - k {
            // P_{i..i+k}(0) = (eps_{i+k} P_i - eps_i P_{i+1}) / (eps_{i+k} - eps_i)
            let num = &p[i].scale(&eps[i + k]) - &p[i + 1].scale(&eps[i]);
            p[i] = num.scale(&(&eps[i + k] - &eps[i]).recip());
        }
    }
    p[0].clone()
}

/// Order of the Ribet section at `u = (k1 omega1 + k2 omega2) / n`.
///
/// The section's logarithm is recovered through `g_log` at `u (1 - eps)` for
/// each ray parameter, extrapolated to `eps = 0`, and compared with the
/// closed-form logarithm at `u`.
pub fn ribet_order_check(l: &Lattice, alpha: &Complex, k1: i64, k2: i64, n: u64) -> Result<RibetCheck> {
    if n < 2 || k1.gcd(&k2).gcd(&(n as i64)) != 1 {
        return Err(Error::InvalidArgument("need gcd(k1, k2, n) = 1 and n >= 2".into()));
    }
    check_alpha(l, alpha)?;
    let bits = l.bits();
    let inv_n = Real::from_i64(n as i64, bits).recip();
    let u = (&l.omega1.scale_i64(k1) + &l.omega2.scale_i64(k2)).scale(&inv_n);
    let alpha = alpha.with_prec(bits);

    let ext = extension_make(l, &(&alpha * &u))?;
    let direct_log = ribet_delta(l, &alpha, &u)?.log;
    let direct = betti_g(&ext, &direct_log)?;

    let mut eps = Vec::new();
    let mut coords_along: [Vec<Complex>; 3] = [Vec::new(), Vec::new(), Vec::new()];
    let mut prev_a: Option<Complex> = None;
    for e in RAY_EPSILONS {
        let e = Real::from_f64(e, bits);
        let ue = u.scale(&(&Real::one(bits) - &e));
        let rd = ribet_delta(l, &alpha, &ue)?;
        let ext_e = extension_make(l, &rd.v)?;
        let (x, y) = wp(l, &ue)?;
        let s = GPoint { delta: rd.delta, epoint: NumPoint::Affine(x, y) };
        let b = betti_g(&ext_e, &g_log(&ext_e, &s, &ue)?)?;
        // keep a on one branch of log delta along the ray
        let a = match &prev_a {
            None => b.a.clone(),
            Some(p) => {
                let k: i64 = (&p.re - &b.a.re).round().try_into().unwrap_or(0);
                &b.a + &Complex::from_i64(k, bits)
            }
        };
        prev_a = Some(a.clone());
        coords_along[0].push(a);
        coords_along[1].push(Complex::from_real(b.b1));
        coords_along[2].push(Complex::from_real(b.b2));
        eps.push(e);
    }
    let mut limit = Vec::new();
    let mut gap = f64::NEG_INFINITY;
    for vals in &coords_along {
        let t2 = extrapolate(&eps[..3], &vals[..3]);
        let t3 = extrapolate(&eps, vals);
        gap = gap.max(t3.dist_log2(&t2));
        limit.push(t3);
    }
    if gap > -(l.digits as f64) * std::f64::consts::LOG2_10 / 3.0 {
        return Err(Error::PrecisionExhausted(format!("ray extrapolants differ by 2^{gap:.1}")));
    }
    let ray = GBetti { a: limit[0].clone(), b1: limit[1].re.clone(), b2: limit[2].re.clone(), digits: l.digits };
    // the two routes agree modulo the branch of log delta
    let shift: i64 = (&direct.a.re - &ray.a.re).round().try_into().unwrap_or(0);
    let ray = ray.shift_a(shift);
    let agree = ray.a.dist_log2(&direct.a).max((&ray.b1 - &direct.b1).log2_abs()).max((&ray.b2 - &direct.b2).log2_abs());
    if agree > l.tol_log2(0) / 3.0 {
        return Err(Error::InternalCheckFailed(format!("ray limit and closed form differ by 2^{agree:.1}")));
    }
    let bound = 4 * n * n;
    let rec = ray.recognize(bound).ok_or(Error::RecognitionFailed(bound))?;
    Ok(RibetCheck { n, k1, k2, m: rec.m, divides_n2: (n * n).is_multiple_of(rec.m), betti: ray, direct, extrapolation_gap_log2: gap })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::apfloat::digits_to_bits;
    use crate::exactalg::rational_recognize;
    use crate::lattice::{periods, GUARD_BITS};

    fn lemniscatic(digits: u32) -> Lattice {
        let b = digits_to_bits(digits) + GUARD_BITS;
        periods(&Complex::from_i64(4, b), &Complex::zero(b), digits).unwrap()
    }

    fn two_i(l: &Lattice) -> Complex {
        Complex::i(l.bits()).scale_i64(2)
    }

    #[test]
    fn lemniscatic_s2_is_zero() {
        let l = lemniscatic(60);
        assert_eq!(cm_relation(&l, 10), Some(CmRelation { a: 1, b: 0, c: 1 }));
        let s2 = s2_value(&l).unwrap();
        assert!(s2.log2_abs() < l.tol_log2(12));
        let tb = l.tau.conj();
        let res = &(&l.eta2 - &(&s2 * &l.omega2)) - &(&tb * &(&l.eta1 - &(&s2 * &l.omega1)));
        assert!(res.log2_abs() < -40.0 * std::f64::consts::LOG2_10);
    }

    #[test]
    fn s2_on_the_hexagonal_lattice() {
        // g2 = 0: tau = exp(2 pi i / 3) up to SL2(Z)
        let b = digits_to_bits(40) + GUARD_BITS;
        let l = periods(&Complex::zero(b), &Complex::one(b), 40).unwrap();
        let r = cm_relation(&l, 100).unwrap();
        assert_eq!(r.b * r.b - 4 * r.a * r.c, -3);
        let s2 = s2_value(&l).unwrap();
        let tb = l.tau.conj();
        let res = &(&l.eta2 - &(&s2 * &l.omega2)) - &(&tb * &(&l.eta1 - &(&s2 * &l.omega1)));
        assert!(res.log2_abs() < l.tol_log2(12));
    }

    #[test]
    fn generic_lattice_is_not_cm() {
        let b = digits_to_bits(40) + GUARD_BITS;
        let l = periods(&Complex::from_i64(4, b), &Complex::one(b), 40).unwrap();
        assert!(matches!(s2_value(&l), Err(Error::NotCM(1_000_000))));
    }

    #[test]
    fn theta_identity_for_two_i() {
        let l = lemniscatic(60);
        for (re, im) in [(0.31, 0.17), (-0.42, 0.66), (0.9, -0.35)] {
            let z = Complex::from_f64(re, im, l.bits());
            let (lhs, rhs) = theta_identity(&l, &two_i(&l), &z).unwrap();
            assert!(lhs.dist_log2(&rhs) < -30.0 * std::f64::consts::LOG2_10 + rhs.log2_abs().max(0.0));
        }
    }

    #[test]
    fn alpha_guards() {
        let l = lemniscatic(40);
        let u = Complex::from_f64(0.3, 0.2, l.bits());
        assert!(matches!(ribet_delta(&l, &Complex::i(l.bits()), &u), Err(Error::AlphaParity)));
        assert!(matches!(ribet_delta(&l, &Complex::from_i64(2, l.bits()), &u), Err(Error::AlphaNotAntisymmetric)));
        assert!(matches!(ribet_order_check(&l, &two_i(&l), 0, 0, 1), Err(Error::InvalidArgument(_))));
    }

    #[test]
    fn delta_parity_and_log_consistency() {
        let l = lemniscatic(50);
        let u = Complex::from_f64(0.37, 0.21, l.bits());
        let a = ribet_delta(&l, &two_i(&l), &u).unwrap();
        let b = ribet_delta(&l, &two_i(&l), &-&u).unwrap();
        // sigma is odd, so the quotient is odd and exp(-s2 u v) even
        assert!(a.delta.dist_log2(&-&b.delta) < l.tol_log2(12) + a.delta.log2_abs().max(0.0));
        // g_log of the section reproduces the closed-form logarithm mod 2 pi i
        let ext = extension_make(&l, &a.v).unwrap();
        let (x, y) = wp(&l, &u).unwrap();
        let s = GPoint { delta: a.delta.clone(), epoint: NumPoint::Affine(x, y) };
        let via = g_log(&ext, &s, &u).unwrap();
        let d = &(&via.t - &a.log.t) / &Complex::two_pi_i(l.bits());
        assert!((&d.re - &Real::from_bigint(&d.re.round(), 64)).log2_abs() < l.tol_log2(12));
        assert!(d.im.log2_abs() < l.tol_log2(12));
    }

    #[test]
    fn two_pi_i_multiple_is_integral() {
        // alpha / (conj(tau) - tau) in Z for alpha in Z + 2 Z tau
        let l = lemniscatic(40);
        for (x, y) in [(0i64, 1i64), (1, 1), (3, -2)] {
            let alpha = &Complex::from_i64(x, l.bits()) + &l.tau.scale_i64(2 * y);
            let q = &alpha / &(&l.tau.conj() - &l.tau);
            let tol = Real::one(64).mul_2exp(l.tol_log2(8) as i64);
            let (_, den) = rational_recognize(&q.re, 1, &tol).unwrap_or_else(|| panic!("{x} {y}"));
            assert_eq!(den, 1.into());
        }
    }

    #[test]
    fn order_three_and_four() {
        let l = lemniscatic(80);
        let r = ribet_order_check(&l, &two_i(&l), 1, 0, 3).unwrap();
        assert!(r.divides_n2, "m = {}", r.m);
        assert_eq!(r.m, 9);
        let r = ribet_order_check(&l, &two_i(&l), 1, 0, 4).unwrap();
        assert!(r.divides_n2, "m = {}", r.m);
    }
}
