//! Period lattices of `y^2 = 4x^3 - g2 x - g3` over C and the Weierstrass
//! functions attached to them.
//!
//! Periods come from the complex AGM of the differences of the roots `e_i`.
//! Every candidate pair is accepted only after the Eisenstein series of the
//! reduced basis reproduce `(g2, g3)`. The quasi-period `eta1` comes from
//! `E2`, and `eta2 = 2 zeta(omega2 / 2)` is evaluated through the theta
//! series, so the Legendre relation is a genuine check on both.

mod elog;
mod functions;

use std::collections::HashMap;
use std::sync::{Arc, OnceLock, RwLock};

use serde_json::{json, Value};

use crate::apfloat::{digits_to_bits, pi, Complex, Real};
use crate::error::{Error, Result};
use crate::exactalg::roots::aberth;

pub use elog::{betti_e, elog, elog_continued, Continuation, EBetti};
pub(crate) use functions::{check_off_lattice, coords};
pub use functions::{reduce, wp, wsigma, wzeta};

/// Guard bits carried on top of the requested decimal precision.
pub const GUARD_BITS: u32 = 64;

#[derive(Clone, Debug)]
pub struct Lattice {
    pub g2: Complex,
    pub g3: Complex,
    pub omega1: Complex,
    pub omega2: Complex,
    pub eta1: Complex,
    pub eta2: Complex,
    pub tau: Complex,
    /// Working precision in decimal digits.
    pub digits: u32,
    pub(crate) bits: u32,
    /// `exp(i pi tau)`.
    pub(crate) nome: Complex,
}

fn lt(a: &Real, b: &Real) -> bool {
    a < b
}

/// Complex AGM with the optimal sign choice at every step.
fn agm(a: &Complex, b: &Complex, bits: u32) -> Complex {
    let (mut a, mut b) = (a.clone(), b.clone());
    for _ in 0..(4 * bits) {
        if (&a - &b).log2_abs() < a.log2_abs() - bits as f64 {
            break;
        }
        let an = (&a + &b).mul_2exp(-1);
        let mut bn = (&a * &b).sqrt();
        if lt(&(&an + &bn).norm_sqr(), &(&an - &bn).norm_sqr()) {
            bn = -bn;
        }
        a = an;
        b = bn;
    }
    a
}

/// `sum n^k q^n / (1 - q^n)` for `n >= 1`, i.e. `sum sigma_k(n) q^n`.
fn lambert(q: &Complex, k: u32, bits: u32) -> Complex {
    let mut acc = Complex::zero(bits);
    let mut qn = q.clone();
    let one = Complex::one(bits);
    for n in 1i64.. {
        let t = (&qn / &(&one - &qn)).scale_i64(n.pow(k));
        if t.log2_abs() < -(bits as f64) - 16.0 {
            break;
        }
        acc = &acc + &t;
        qn = &qn * q;
        if n > 100_000 {
            break;
        }
    }
    acc
}

/// `(g2, g3)` of the lattice `omega1 Z + omega2 Z` from the Eisenstein series.
pub fn eisenstein_invariants(omega1: &Complex, omega2: &Complex, bits: u32) -> (Complex, Complex) {
    let tau = omega2 / omega1;
    let q2 = (&Complex::two_pi_i(bits) * &tau).exp();
    let e4 = &Complex::one(bits) + &lambert(&q2, 3, bits).scale_i64(240);
    let e6 = &Complex::one(bits) - &lambert(&q2, 5, bits).scale_i64(504);
    let s = &Complex::from_real(pi(bits).mul_2exp(1)) / omega1;
    let s2 = s.sqr();
    let s4 = s2.sqr();
    let g2 = &(&s4 * &e4) / &Complex::from_i64(12, bits);
    let g3 = &(&(&s4 * &s2) * &e6) / &Complex::from_i64(216, bits);
    (g2, g3)
}

fn f64_tau(o1: &Complex, o2: &Complex) -> num_complex::Complex64 {
    o2.to_c64() / o1.to_c64()
}

/// Moves `tau = omega2 / omega1` into the closed fundamental domain.
fn reduce_basis(mut o1: Complex, mut o2: Complex) -> (Complex, Complex) {
    for _ in 0..10_000 {
        let t = f64_tau(&o1, &o2);
        let n = t.re.round();
        if n != 0.0 {
            o2 = &o2 - &o1.scale_i64(n as i64);
            continue;
        }
        if t.norm_sqr() < 1.0 - 1e-12 {
            let (a, b) = (o2.clone(), -o1);
            o1 = a;
            o2 = b;
            continue;
        }
        break;
    }
    (o1, o2)
}

fn in_fundamental_domain(t: num_complex::Complex64) -> bool {
    t.im > 0.0 && t.re.abs() <= 0.5 + 1e-9 && t.norm_sqr() >= 1.0 - 1e-9
}

/// Among the reduced bases of the same lattice, the one whose `omega1` has
/// the smallest argument in absolute value (ties to the positive one).
fn canonical_basis(o1: Complex, o2: Complex) -> (Complex, Complex) {
    let mut best: Option<((i64, i64), Complex, Complex)> = None;
    for a in -1i64..=1 {
        for b in -1i64..=1 {
            for c in -1i64..=1 {
                for d in -1i64..=1 {
                    if a * d - b * c != 1 {
                        continue;
                    }
                    // (omega2', omega1') = [[a, b], [c, d]] (omega2, omega1)
                    let n2 = &o2.scale_i64(a) + &o1.scale_i64(b);
                    let n1 = &o2.scale_i64(c) + &o1.scale_i64(d);
                    if !in_fundamental_domain(f64_tau(&n1, &n2)) {
                        continue;
                    }
                    let arg = n1.to_c64().arg();
                    let key = ((arg.abs() * 1e9).round() as i64, -(arg * 1e9).round() as i64);
                    if best.as_ref().is_none_or(|(k, _, _)| key < *k) {
                        best = Some((key, n1, n2));
                    }
                }
            }
        }
    }
    match best {
        Some((_, a, b)) => (a, b),
        None => (o1, o2),
    }
}

fn close_rel(a: &Complex, b: &Complex, tol_log2: f64) -> bool {
    let scale = a.log2_abs().max(b.log2_abs()).max(0.0);
    a.dist_log2(b) < scale + tol_log2
}

/// Lattice of `y^2 = 4x^3 - g2 x - g3` at `digits` decimal digits.
pub fn periods(g2: &Complex, g3: &Complex, digits: u32) -> Result<Lattice> {
    if digits < 15 {
        return Err(Error::InvalidArgument("precision must be at least 15 digits".into()));
    }
    let bits = digits_to_bits(digits) + GUARD_BITS;
    let g2 = g2.with_prec(bits);
    let g3 = g3.with_prec(bits);
    let disc = &g2.powi(3) - &g3.sqr().scale_i64(27);
    let scale = (3.0 * g2.log2_abs()).max(2.0 * g3.log2_abs());
    if disc.is_zero() || disc.log2_abs() < scale - (bits as f64) / 2.0 {
        return Err(Error::DegenerateCurve);
    }
    let cubic = [-&g3, -&g2, Complex::zero(bits), Complex::from_i64(4, bits)];
    let e = aberth(&cubic, bits).ok_or_else(|| Error::PrecisionExhausted("roots of the cubic".into()))?;
    let pi_c = Complex::from_real(pi(bits));
    let mut cands = Vec::new();
    for i in 0..3 {
        let (j, k) = ((i + 1) % 3, (i + 2) % 3);
        let a = (&e[i] - &e[k]).sqrt();
        let b = (&e[i] - &e[j]).sqrt();
        for bb in [b.clone(), -b] {
            let m = agm(&a, &bb, bits);
            if !m.is_zero() {
                cands.push(&pi_c / &m);
            }
        }
    }
    let mut pairs = Vec::new();
    for i in 0..cands.len() {
        for j in 0..cands.len() {
            if i == j {
                continue;
            }
            let t = f64_tau(&cands[i], &cands[j]);
            if t.im > 1e-6 * t.norm() {
                pairs.push((cands[i].log2_abs().max(cands[j].log2_abs()), i, j));
            }
        }
    }
    pairs.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
    for (_, i, j) in pairs {
        let (o1, o2) = reduce_basis(cands[i].clone(), cands[j].clone());
        let (c2, c3) = eisenstein_invariants(&o1, &o2, bits);
        let tol = -(bits as f64) / 2.0;
        if close_rel(&c2, &g2, tol) && close_rel(&c3, &g3, tol) {
            let (o1, o2) = canonical_basis(o1, o2);
            return Ok(Lattice::from_basis(g2, g3, o1, o2, digits, bits));
        }
    }
    Err(Error::PrecisionExhausted("no period pair reproduces the invariants".into()))
}

impl Lattice {
    fn from_basis(g2: Complex, g3: Complex, omega1: Complex, omega2: Complex, digits: u32, bits: u32) -> Lattice {
        let tau = &omega2 / &omega1;
        let nome = (&Complex::from_real(pi(bits)).mul_i() * &tau).exp();
        let q2 = nome.sqr();
        let e2 = &Complex::one(bits) - &lambert(&q2, 1, bits).scale_i64(24);
        let p = Complex::from_real(pi(bits));
        let eta1 = &(&p.sqr() * &e2) / &omega1.scale_i64(3);
        let mut l = Lattice { g2, g3, omega1, omega2, eta1, eta2: Complex::zero(bits), tau, digits, bits, nome };
        let half = l.omega2.mul_2exp(-1);
        l.eta2 = functions::zeta_unreduced(&l, &half).mul_2exp(1);
        l
    }

    pub fn bits(&self) -> u32 {
        self.bits
    }

    /// `eta1 omega2 - eta2 omega1 - 2 pi i`.
    pub fn legendre_defect(&self) -> Complex {
        &(&(&self.eta1 * &self.omega2) - &(&self.eta2 * &self.omega1)) - &Complex::two_pi_i(self.bits)
    }

    pub fn eisenstein_invariants(&self) -> (Complex, Complex) {
        eisenstein_invariants(&self.omega1, &self.omega2, self.bits)
    }

    /// The root `e` of `4x^3 - g2 x - g3` equal to `wp(omega / 2)`.
    pub fn half_period_value(&self, which: usize) -> Result<Complex> {
        let h = match which {
            1 => self.omega1.mul_2exp(-1),
            2 => self.omega2.mul_2exp(-1),
            _ => (&self.omega1 + &self.omega2).mul_2exp(-1),
        };
        Ok(wp(self, &h)?.0)
    }

    /// Absolute tolerance `10^(-digits + k)` as `log2`.
    pub fn tol_log2(&self, k: i32) -> f64 {
        (-(self.digits as f64) + k as f64) * std::f64::consts::LOG2_10
    }

    pub fn to_json(&self) -> Value {
        let d = self.digits as usize;
        json!({
            "digits": self.digits,
            "g2": self.g2.to_string_digits(d),
            "g3": self.g3.to_string_digits(d),
            "omega1": self.omega1.to_string_digits(d),
            "omega2": self.omega2.to_string_digits(d),
            "eta1": self.eta1.to_string_digits(d),
            "eta2": self.eta2.to_string_digits(d),
            "tau": self.tau.to_string_digits(d),
        })
    }

    /// Rebuilds a lattice from `to_json` output without recomputation.
    pub fn from_json(v: &Value) -> Result<Lattice> {
        let digits = v["digits"].as_u64().ok_or_else(|| Error::Parse("lattice record needs digits".into()))? as u32;
        let bits = digits_to_bits(digits) + GUARD_BITS;
        let get = |k: &str| -> Result<Complex> {
            let s = v[k].as_str().ok_or_else(|| Error::Parse(format!("lattice record needs {k}")))?;
            Complex::parse(s, bits).ok_or_else(|| Error::Parse(format!("bad complex number for {k}")))
        };
        let omega1 = get("omega1")?;
        let omega2 = get("omega2")?;
        if omega1.is_zero() {
            return Err(Error::Parse("omega1 must be nonzero".into()));
        }
        let tau = &omega2 / &omega1;
        let t = tau.to_c64();
        if !in_fundamental_domain(t) || t.im >= 1e9 {
            return Err(Error::Parse("omega2 / omega1 is not a reduced period ratio".into()));
        }
        let nome = (&Complex::from_real(pi(bits)).mul_i() * &tau).exp();
        Ok(Lattice { g2: get("g2")?, g3: get("g3")?, omega1, omega2, eta1: get("eta1")?, eta2: get("eta2")?, tau, digits, bits, nome })
    }
}

type Cache = RwLock<HashMap<String, Arc<Lattice>>>;

fn cache() -> &'static Cache {
    static C: OnceLock<Cache> = OnceLock::new();
    C.get_or_init(|| RwLock::new(HashMap::new()))
}

/// `periods` memoized on `(g2, g3, digits)`.
pub fn periods_cached(g2: &Complex, g3: &Complex, digits: u32) -> Result<Arc<Lattice>> {
    let key = format!("{:?}|{:?}|{}", g2.re.to_rational(), (g2.im.to_rational(), g3.re.to_rational(), g3.im.to_rational()), digits);
    if let Some(l) = cache().read().unwrap().get(&key) {
        return Ok(l.clone());
    }
    let l = Arc::new(periods(g2, g3, digits)?);
    let mut w = cache().write().unwrap();
    Ok(w.entry(key).or_insert(l).clone())
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};

    fn c(re: f64, im: f64, digits: u32) -> Complex {
        Complex::from_f64(re, im, digits_to_bits(digits) + GUARD_BITS)
    }

    #[test]
    fn lemniscatic_lattice() {
        let l = periods(&c(4.0, 0.0, 50), &c(0.0, 0.0, 50), 50).unwrap();
        let w = Real::parse_decimal("2.6220575542921198104648395898911194136827549514316", 300).unwrap();
        assert!(l.omega1.dist_log2(&Complex::from_real(w)) < l.tol_log2(2));
        assert!(l.tau.dist_log2(&Complex::i(200)) < l.tol_log2(2));
        assert!(l.legendre_defect().log2_abs() < l.tol_log2(10));
        // eta1 = pi / omega1 when tau = i
        let expect = &Complex::from_real(pi(l.bits)) / &l.omega1;
        assert!(l.eta1.dist_log2(&expect) < l.tol_log2(4));
    }

    #[test]
    fn random_lattices_satisfy_legendre_and_reproduce_invariants() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for _ in 0..4 {
            let g2 = c(rng.gen_range(-10.0..10.0), rng.gen_range(-10.0..10.0), 40);
            let g3 = c(rng.gen_range(-10.0..10.0), rng.gen_range(-10.0..10.0), 40);
            let l = periods(&g2, &g3, 40).unwrap();
            assert!(l.legendre_defect().log2_abs() < l.tol_log2(10));
            assert!(l.tau.im > Real::zero(64));
            let (a, b) = l.eisenstein_invariants();
            assert!(a.dist_log2(&g2) < l.tol_log2(10) + g2.log2_abs().max(0.0));
            assert!(b.dist_log2(&g3) < l.tol_log2(10) + g3.log2_abs().max(0.0));
        }
    }

    #[test]
    fn homogeneity() {
        let l = periods(&c(3.0, 1.0, 40), &c(-2.0, 0.5, 40), 40).unwrap();
        let k = c(2.0, 0.0, 40);
        let l2 = periods(&(&c(3.0, 1.0, 40) * &k.powi(4)), &(&c(-2.0, 0.5, 40) * &k.powi(6)), 40).unwrap();
        assert!(l2.omega1.scale_i64(2).dist_log2(&l.omega1) < l.tol_log2(6));
        assert!(l2.omega2.scale_i64(2).dist_log2(&l.omega2) < l.tol_log2(6));
    }

    #[test]
    fn degenerate_and_real_cases() {
        assert!(matches!(periods(&c(0.0, 0.0, 30), &c(0.0, 0.0, 30), 30), Err(Error::DegenerateCurve)));
        assert!(matches!(periods(&c(3.0, 0.0, 30), &c(1.0, 0.0, 30), 30), Err(Error::DegenerateCurve)));
        // the family at lambda = 1/4 has real invariants and a rhombic
        // lattice: conjugates of the basis are lattice vectors
        let l = periods(&c(0.25, 0.0, 30), &c(-0.0625, 0.0, 30), 30).unwrap();
        for w in [&l.omega1, &l.omega2] {
            let b = betti_e(&l, &w.conj()).unwrap();
            for x in [&b.b1, &b.b2] {
                let r = Real::from_bigint(&x.round(), 64);
                assert!((x - &r).log2_abs() < l.tol_log2(6));
            }
        }
    }

    #[test]
    fn json_round_trip_and_cache() {
        let l = periods_cached(&c(1.0, 0.0, 30), &c(2.0, 0.0, 30), 30).unwrap();
        let again = periods_cached(&c(1.0, 0.0, 30), &c(2.0, 0.0, 30), 30).unwrap();
        assert!(Arc::ptr_eq(&l, &again));
        let back = Lattice::from_json(&l.to_json()).unwrap();
        assert!(back.omega2.dist_log2(&l.omega2) < l.tol_log2(2));
    }

    #[test]
    fn from_json_rejects_unreduced_or_degenerate_periods() {
        let rec = |o1: &str, o2: &str| serde_json::json!({"digits": 20, "g2": "1", "g3": "0", "omega1": o1, "omega2": o2, "eta1": "1", "eta2": "1"});
        assert!(Lattice::from_json(&rec("0", "1*i")).is_err());
        assert!(Lattice::from_json(&rec("1", "0.1*i")).is_err());
        assert!(Lattice::from_json(&rec("1", "3+1*i")).is_err());
        assert!(Lattice::from_json(&rec("1e-12202", "0.11e2222*i")).is_err());
        assert!(Lattice::from_json(&rec("1", "1*i")).is_ok());
    }
}
