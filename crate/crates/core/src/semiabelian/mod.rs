//! Extensions `G` of an elliptic curve `E` by the multiplicative group.
//!
//! The extension attached to `v` (a logarithm of the parameter `q`) has the
//! exponential `(t, z) -> (f_v(z) e^t, wp(z))` with
//! `f_v(z) = sigma(v + z) / (sigma(v) sigma(z)) exp(-zeta(v) z)`. Its kernel
//! is spanned by `(2 pi i, 0)` and `(kappa_i, omega_i)` with
//! `kappa_i = zeta(v) omega_i - eta_i v`.

mod ribet;

use serde_json::{json, Value};

use crate::apfloat::{Complex, Real};
use crate::elliptic::NumPoint;
use crate::error::{Error, Result};
use crate::exactalg::rational_recognize;
use crate::lattice::{betti_e, check_off_lattice, wp, wsigma, wzeta, Lattice};

pub use ribet::{
    cm_relation, is_endomorphism, ribet_delta, ribet_order_check, s2_value, theta_identity, torsion_kernel, CmRelation, RibetCheck, RibetDelta, CM_HEIGHT,
    RAY_EPSILONS,
};

#[derive(Clone, Debug)]
pub struct GExtension {
    pub lattice: Lattice,
    pub v: Complex,
    pub zeta_v: Complex,
    pub kappa1: Complex,
    pub kappa2: Complex,
}

impl GExtension {
    /// `[(2 pi i, 0), (kappa1, omega1), (kappa2, omega2)]`.
    pub fn period_basis(&self) -> [[Complex; 2]; 3] {
        let l = &self.lattice;
        [[Complex::two_pi_i(l.bits()), Complex::zero(l.bits())], [self.kappa1.clone(), l.omega1.clone()], [self.kappa2.clone(), l.omega2.clone()]]
    }

    /// `kappa_v(w)` for the lattice vector `w = m1 omega1 + m2 omega2`.
    pub fn kappa(&self, m1: i64, m2: i64) -> Complex {
        &self.kappa1.scale_i64(m1) + &self.kappa2.scale_i64(m2)
    }
}

pub fn extension_make(l: &Lattice, v: &Complex) -> Result<GExtension> {
    let v = v.with_prec(l.bits());
    check_off_lattice(l, &v, "v").map_err(|_| Error::TorsionZeroQ)?;
    let zeta_v = wzeta(l, &v)?;
    let kappa1 = &(&zeta_v * &l.omega1) - &(&l.eta1 * &v);
    let kappa2 = &(&zeta_v * &l.omega2) - &(&l.eta2 * &v);
    Ok(GExtension { lattice: l.clone(), v, zeta_v, kappa1, kappa2 })
}

/// A point `(delta, p)` of `G` in the chart given by the section `beta`.
#[derive(Clone, Debug)]
pub struct GPoint {
    pub delta: Complex,
    pub epoint: NumPoint,
}

/// A vector `(t, z)` in the Lie algebra.
#[derive(Clone, Debug)]
pub struct GLog {
    pub t: Complex,
    pub z: Complex,
}

/// `sigma(u + v) / (sigma(u) sigma(v))`, rejecting arguments on the lattice.
fn sigma_quotient(l: &Lattice, u: &Complex, v: &Complex) -> Result<Complex> {
    check_off_lattice(l, u, "u")?;
    check_off_lattice(l, v, "v")?;
    let s = u + v;
    check_off_lattice(l, &s, "u + v")?;
    Ok(&wsigma(l, &s) / &(&wsigma(l, u) * &wsigma(l, v)))
}

/// Principal logarithm of `sigma(u + v) / (sigma(u) sigma(v))`.
pub fn green(l: &Lattice, u: &Complex, v: &Complex) -> Result<Complex> {
    Ok(sigma_quotient(l, u, v)?.ln())
}

/// Follows a logarithm along a path, moving each new value by the multiple
/// of `2 pi i` closest to the previous one.
#[derive(Clone, Debug, Default)]
pub struct LogContinuation {
    prev: Option<Complex>,
}

impl LogContinuation {
    pub fn new() -> LogContinuation {
        LogContinuation { prev: None }
    }

    /// Rejects steps whose imaginary part still moves by more than `pi / 2`.
    pub fn step(&mut self, value: Complex) -> Result<Complex> {
        let out = match &self.prev {
            None => value,
            Some(p) => {
                let two_pi_i = Complex::two_pi_i(value.prec());
                let k = (&(&p.im - &value.im) / &two_pi_i.im).round();
                let k: i64 = k.try_into().map_err(|_| Error::BranchJump)?;
                let moved = &value + &two_pi_i.scale_i64(k);
                if (&moved.im - &p.im).abs() > two_pi_i.im.mul_2exp(-2) {
                    return Err(Error::BranchJump);
                }
                moved
            }
        };
        self.prev = Some(out.clone());
        Ok(out)
    }
}

/// `green` along a path.
pub fn green_continued(l: &Lattice, u: &Complex, v: &Complex, cont: &mut LogContinuation) -> Result<Complex> {
    cont.step(green(l, u, v)?)
}

/// `(t, z) -> (f_v(z) e^t, (wp(z), wp'(z)))`.
pub fn g_exp(ext: &GExtension, t: &Complex, z: &Complex) -> Result<GPoint> {
    let l = &ext.lattice;
    let z = z.with_prec(l.bits());
    let f = &sigma_quotient(l, &z, &ext.v)? * &(-&(&ext.zeta_v * &z)).exp();
    let (x, y) = wp(l, &z)?;
    Ok(GPoint { delta: &f * &t.with_prec(l.bits()).exp(), epoint: NumPoint::Affine(x, y) })
}

fn check_hint(l: &Lattice, s: &GPoint, u: &Complex) -> Result<()> {
    let (x, y) = match &s.epoint {
        NumPoint::Affine(x, y) => (x, y),
        NumPoint::Infinity => return Err(Error::PoleProximity("the chart excludes the origin of E".into())),
    };
    let (px, py) = wp(l, u)?;
    let tol = l.tol_log2(14) + (3.0 * x.log2_abs()).max(0.0);
    if px.dist_log2(x) > tol || py.dist_log2(y) > tol {
        return Err(Error::InvalidArgument("u_hint is not a logarithm of the point".into()));
    }
    Ok(())
}

/// `(-g(u, v) + zeta(v) u + log delta, u)` for `u = u_hint`.
pub fn g_log(ext: &GExtension, s: &GPoint, u_hint: &Complex) -> Result<GLog> {
    let l = &ext.lattice;
    let u = u_hint.with_prec(l.bits());
    check_hint(l, s, &u)?;
    if s.delta.is_zero() {
        return Err(Error::PoleProximity("delta vanishes".into()));
    }
    let t = &(&(&ext.zeta_v * &u) - &green(l, &u, &ext.v)?) + &s.delta.ln();
    Ok(GLog { t, z: u })
}

/// `g_log` with the `t` coordinate followed along a path.
pub fn g_log_continued(ext: &GExtension, s: &GPoint, u_hint: &Complex, cont: &mut LogContinuation) -> Result<GLog> {
    let g = g_log(ext, s, u_hint)?;
    Ok(GLog { t: cont.step(g.t)?, z: g.z })
}

/// Coordinates of a logarithm in the period basis.
#[derive(Clone, Debug)]
pub struct GBetti {
    pub a: Complex,
    pub b1: Real,
    pub b2: Real,
    pub digits: u32,
}

/// `(a, b1, b2) = (k0, k1, k2) / m`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Recognized {
    pub m: u64,
    pub k0: i64,
    pub k1: i64,
    pub k2: i64,
}

impl GBetti {
    /// Tolerance `10^(-digits/2)` used for rationality of the coordinates.
    pub fn tolerance(&self) -> Real {
        Real::one(64).mul_2exp(-((self.digits as f64 * std::f64::consts::LOG2_10 / 2.0) as i64))
    }

    /// Common denominator `m <= m_max` of the three coordinates, with `a`
    /// required to be real.
    pub fn recognize(&self, m_max: u64) -> Option<Recognized> {
        let tol = self.tolerance();
        if self.a.im.abs() > tol {
            return None;
        }
        let mut m = 1u64;
        for x in [&self.a.re, &self.b1, &self.b2] {
            let (_, den) = rational_recognize(x, m_max, &tol)?;
            let den: u64 = den.try_into().ok()?;
            m = num_integer::lcm(m, den);
            if m > m_max {
                return None;
            }
        }
        let scaled = |x: &Real| -> Option<i64> {
            let y = x * &Real::from_i64(m as i64, x.prec());
            let r = y.round();
            if (&y - &Real::from_bigint(&r, y.prec())).abs() > tol.mul_2exp(m.ilog2() as i64 + 1) {
                return None;
            }
            r.try_into().ok()
        };
        Some(Recognized { m, k0: scaled(&self.a.re)?, k1: scaled(&self.b1)?, k2: scaled(&self.b2)? })
    }

    /// Shifts `a` by an integer (a change of branch of `log delta`).
    pub fn shift_a(&self, k: i64) -> GBetti {
        let mut out = self.clone();
        out.a = &out.a + &Complex::from_i64(k, out.a.prec());
        out
    }

    pub fn to_json(&self, m_max: u64) -> Value {
        let d = self.digits as usize;
        let rec = self.recognize(m_max).map(|r| json!({"m": r.m, "k0": r.k0, "k1": r.k1, "k2": r.k2}));
        json!({
            "a_re": self.a.re.to_sci_string(d),
            "a_im": self.a.im.to_sci_string(d),
            "b1": self.b1.to_sci_string(d),
            "b2": self.b2.to_sci_string(d),
            "recognized": rec,
            "prec": self.digits,
        })
    }
}

pub fn betti_g(ext: &GExtension, u: &GLog) -> Result<GBetti> {
    let l = &ext.lattice;
    let e = betti_e(l, &u.z)?;
    let rest = &(&u.t - &ext.kappa1.scale(&e.b1)) - &ext.kappa2.scale(&e.b2);
    let a = &rest / &Complex::two_pi_i(l.bits());
    Ok(GBetti { a, b1: e.b1, b2: e.b2, digits: l.digits })
}

/// Least `m <= m_max` with `m s = 0` in `G`, read off the Betti coordinates.
pub fn g_torsion_test(ext: &GExtension, s: &GPoint, u_det: &Complex, m_max: u64) -> Result<Option<u64>> {
    let u = g_log(ext, s, u_det)?;
    Ok(betti_g(ext, &u)?.recognize(m_max).map(|r| r.m))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::apfloat::digits_to_bits;
    use crate::lattice::{periods, GUARD_BITS};
    use rand::{Rng, SeedableRng};

    const D: u32 = 50;

    fn c(re: f64, im: f64) -> Complex {
        Complex::from_f64(re, im, digits_to_bits(D) + GUARD_BITS)
    }

    fn lattice() -> Lattice {
        periods(&c(1.5, -2.0), &c(0.75, 1.25), D).unwrap()
    }

    fn point(l: &Lattice, rng: &mut impl Rng) -> Complex {
        &l.omega1.scale(&Real::from_f64(rng.gen_range(0.05..0.95), l.bits())) + &l.omega2.scale(&Real::from_f64(rng.gen_range(0.05..0.95), l.bits()))
    }

    fn close(a: &Complex, b: &Complex, l: &Lattice, k: i32) -> bool {
        a.dist_log2(b) < l.tol_log2(k) + a.log2_abs().max(b.log2_abs()).max(0.0)
    }

    #[test]
    fn kappa_is_additive_and_zero_is_rejected() {
        let l = lattice();
        let ext = extension_make(&l, &c(0.3, 0.1)).unwrap();
        // eta for omega1 + omega2 read off the zeta shift directly
        let z = c(0.2, 0.05);
        let w = &l.omega1 + &l.omega2;
        let eta = &wzeta(&l, &(&z + &w)).unwrap() - &wzeta(&l, &z).unwrap();
        let direct = &(&ext.zeta_v * &w) - &(&eta * &ext.v);
        assert!(close(&direct, &ext.kappa(1, 1), &l, 12));
        assert!(matches!(extension_make(&l, &Complex::zero(l.bits())), Err(Error::TorsionZeroQ)));
        assert!(matches!(extension_make(&l, &l.omega2), Err(Error::TorsionZeroQ)));
        // order-3 parameter
        assert!(extension_make(&l, &l.omega2.scale(&Real::from_i64(3, l.bits()).recip())).is_ok());
    }

    #[test]
    fn exp_is_invariant_under_periods() {
        let l = lattice();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(31);
        let ext = extension_make(&l, &point(&l, &mut rng)).unwrap();
        for _ in 0..20 {
            let t = c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
            let z = point(&l, &mut rng);
            let base = g_exp(&ext, &t, &z).unwrap();
            for [dt, dz] in ext.period_basis() {
                let moved = g_exp(&ext, &(&t + &dt), &(&z + &dz)).unwrap();
                assert!(close(&moved.delta, &base.delta, &l, 15));
            }
        }
    }

    #[test]
    fn log_round_trip_and_betti_reduction() {
        let l = lattice();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(32);
        let ext = extension_make(&l, &point(&l, &mut rng)).unwrap();
        for _ in 0..20 {
            let t = c(rng.gen_range(-1.0..1.0), rng.gen_range(-3.0..3.0));
            let z = point(&l, &mut rng);
            let s = g_exp(&ext, &t, &z).unwrap();
            let u = g_log(&ext, &s, &z).unwrap();
            let back = g_exp(&ext, &u.t, &u.z).unwrap();
            assert!(close(&back.delta, &s.delta, &l, 12));
            // t agrees up to a multiple of 2 pi i
            let a = betti_g(&ext, &GLog { t: t.clone(), z: z.clone() }).unwrap();
            let b = betti_g(&ext, &u).unwrap();
            let d = &b.a - &a.a;
            let k = Real::from_bigint(&d.re.round(), 64);
            assert!((&d.re - &k).log2_abs() < l.tol_log2(12));
            assert!(d.im.log2_abs() < l.tol_log2(12));
        }
    }

    #[test]
    fn green_is_symmetric_and_has_poles() {
        let l = lattice();
        let (u, v) = (c(0.31, 0.2), c(-0.4, 0.45));
        assert!(close(&green(&l, &u, &v).unwrap(), &green(&l, &v, &u).unwrap(), &l, 12));
        assert!(matches!(green(&l, &u, &-&u), Err(Error::PoleProximity(_))));
        // shifting u by omega1 changes g by eta1 v mod 2 pi i, so that the
        // logarithm moves by exactly the period (kappa1, omega1)
        let ext = extension_make(&l, &v).unwrap();
        let s = g_exp(&ext, &Complex::zero(l.bits()), &u).unwrap();
        let lu = g_log(&ext, &s, &u).unwrap();
        let lw = g_log(&ext, &s, &(&u + &l.omega1)).unwrap();
        let diff = betti_g(&ext, &GLog { t: &lw.t - &lu.t, z: &lw.z - &lu.z }).unwrap();
        assert!((&diff.b1 - &Real::one(64)).log2_abs() < l.tol_log2(12));
        assert!(diff.b2.log2_abs() < l.tol_log2(12));
        let r = diff.a.re.round();
        assert!((&diff.a.re - &Real::from_bigint(&r, 64)).log2_abs() < l.tol_log2(12));
    }

    #[test]
    fn log_of_delta_one_and_branch_shift() {
        let l = lattice();
        let v = c(0.3, -0.2);
        let ext = extension_make(&l, &v).unwrap();
        let u = c(-0.35, 0.4);
        let (x, y) = wp(&l, &u).unwrap();
        let s = GPoint { delta: Complex::one(l.bits()), epoint: NumPoint::Affine(x, y) };
        let g = g_log(&ext, &s, &u).unwrap();
        let expect = &(&ext.zeta_v * &u) - &green(&l, &u, &v).unwrap();
        assert!(close(&g.t, &expect, &l, 12));
        let mut cont = LogContinuation::new();
        let first = g_log_continued(&ext, &s, &u, &mut cont).unwrap();
        let shifted = GLog { t: &first.t + &Complex::two_pi_i(l.bits()).scale_i64(3), z: first.z.clone() };
        assert!(close(&cont.step(shifted.t).unwrap(), &first.t, &l, 12));
    }

    /// `p1 + p2` on `y^2 = 4x^3 - g2 x - g3`, away from doubling.
    fn add(p: &(Complex, Complex), q: &(Complex, Complex)) -> (Complex, Complex) {
        let lam = &(&q.1 - &p.1) / &(&q.0 - &p.0);
        let x = &(&lam.sqr().mul_2exp(-2) - &p.0) - &q.0;
        let y = -&(&p.1 + &(&lam * &(&x - &p.0)));
        (x, y)
    }

    #[test]
    fn group_law_cocycle_matches_exp() {
        // f_v(z1 + z2) / (f_v(z1) f_v(z2)) = -2 (x1 - x(p2 + q)) / (y1 - l(x1)),
        // with l the line through -p2 and -q
        let l = lattice();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(33);
        let v = point(&l, &mut rng);
        let ext = extension_make(&l, &v).unwrap();
        let q = wp(&l, &v).unwrap();
        for _ in 0..10 {
            let (t1, z1) = (c(rng.gen_range(-1.0..1.0), 0.2), point(&l, &mut rng));
            let (t2, z2) = (c(0.1, rng.gen_range(-1.0..1.0)), point(&l, &mut rng));
            let s1 = g_exp(&ext, &t1, &z1).unwrap();
            let s2 = g_exp(&ext, &t2, &z2).unwrap();
            let (p1, p2) = match (&s1.epoint, &s2.epoint) {
                (NumPoint::Affine(a, b), NumPoint::Affine(c, d)) => ((a.clone(), b.clone()), (c.clone(), d.clone())),
                _ => unreachable!(),
            };
            let r = add(&p2, &q);
            let slope = &(&q.1 - &p2.1) / &(&p2.0 - &q.0);
            let line = &(&slope * &(&p1.0 - &p2.0)) - &p2.1;
            let cocycle = (&(&p1.0 - &r.0) / &(&p1.1 - &line)).scale_i64(-2);
            let product = &(&s1.delta * &s2.delta) * &cocycle;
            let direct = g_exp(&ext, &(&t1 + &t2), &(&z1 + &z2)).unwrap();
            assert!(close(&product, &direct.delta, &l, 15));
        }
    }

    #[test]
    fn betti_of_basic_vectors_and_torsion_test() {
        let l = lattice();
        let ext = extension_make(&l, &c(0.2, 0.3)).unwrap();
        let [_, w1, _] = ext.period_basis();
        let b = betti_g(&ext, &GLog { t: w1[0].clone(), z: w1[1].clone() }).unwrap();
        assert_eq!(b.recognize(10), Some(Recognized { m: 1, k0: 0, k1: 1, k2: 0 }));
        let fifth = GLog { t: Complex::two_pi_i(l.bits()).scale(&Real::from_rational(&crate::exactalg::rational::rat(1, 5), 300)), z: Complex::zero(l.bits()) };
        assert_eq!(betti_g(&ext, &fifth).unwrap().recognize(10), Some(Recognized { m: 5, k0: 1, k1: 0, k2: 0 }));

        // a point built from Betti data (1/2, 1/3, 0) has order 6
        let half = Real::from_f64(0.5, 300);
        let third = Real::from_rational(&crate::exactalg::rational::rat(1, 3), 300);
        let z = l.omega1.scale(&third);
        let t = &Complex::two_pi_i(l.bits()).scale(&half) + &ext.kappa1.scale(&third);
        let s = g_exp(&ext, &t, &z).unwrap();
        assert_eq!(g_torsion_test(&ext, &s, &z, 50).unwrap(), Some(6));
        // a generic point is not torsion of small order
        let z = c(0.123456789, -0.0987654321);
        let s = g_exp(&ext, &c(0.3141, 0.2718), &z).unwrap();
        assert_eq!(g_torsion_test(&ext, &s, &z, 50).unwrap(), None);
    }

    #[test]
    fn gbetti_json_fields() {
        let l = lattice();
        let ext = extension_make(&l, &c(0.2, 0.3)).unwrap();
        let u = GLog { t: Complex::two_pi_i(l.bits()).mul_2exp(-1), z: l.omega2.mul_2exp(-2) };
        let v = betti_g(&ext, &u).unwrap().to_json(20);
        assert_eq!(v["prec"], D);
        assert!(v["recognized"].is_object() || v["recognized"].is_null());
        for k in ["a_re", "a_im", "b1", "b2"] {
            assert!(v[k].is_string());
        }
    }
}
