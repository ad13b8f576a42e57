//! Binary floating point over `BigInt` mantissas.
//!
//! A `Real` is `mant * 2^exp` rounded to `prec` bits. Binary operations work
//! at the smaller of the two operand precisions.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::sync::RwLock;

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Smallest supported precision in bits.
pub const MIN_PREC: u32 = 24;

#[derive(Clone)]
pub struct Real {
    mant: BigInt,
    exp: i64,
    prec: u32,
}

/// Bits needed for `digits` decimal digits.
pub fn digits_to_bits(digits: u32) -> u32 {
    ((digits as f64) * std::f64::consts::LOG2_10).ceil() as u32 + 4
}

pub fn bits_to_digits(bits: u32) -> u32 {
    ((bits.saturating_sub(4)) as f64 / std::f64::consts::LOG2_10).floor() as u32
}

fn round_shift(m: &BigInt, s: u64) -> BigInt {
    // round half away from zero
    if s == 0 {
        return m.clone();
    }
    let neg = m.is_negative();
    let mag = m.magnitude();
    let half = BigUint::one() << (s - 1);
    let q: BigUint = (mag + half) >> s;
    if neg {
        -BigInt::from(q)
    } else {
        BigInt::from(q)
    }
}

impl Real {
    pub fn zero(prec: u32) -> Real {
        Real { mant: BigInt::zero(), exp: 0, prec: prec.max(MIN_PREC) }
    }

    pub fn one(prec: u32) -> Real {
        Real::from_i64(1, prec)
    }

    fn make(mant: BigInt, exp: i64, prec: u32) -> Real {
        let prec = prec.max(MIN_PREC);
        if mant.is_zero() {
            return Real::zero(prec);
        }
        let bits = mant.bits();
        let (mut mant, mut exp) = if bits > prec as u64 {
            let s = bits - prec as u64;
            (round_shift(&mant, s), exp + s as i64)
        } else {
            (mant, exp)
        };
        // strip trailing zeros so equal values have equal representations
        let tz = mant.trailing_zeros().unwrap_or(0);
        if tz > 0 {
            mant >>= tz;
            exp += tz as i64;
        }
        Real { mant, exp, prec }
    }

    pub fn from_i64(v: i64, prec: u32) -> Real {
        Real::make(BigInt::from(v), 0, prec)
    }

    pub fn from_bigint(v: &BigInt, prec: u32) -> Real {
        Real::make(v.clone(), 0, prec)
    }

    /// `mant * 2^exp`, rounded.
    pub fn from_parts(mant: BigInt, exp: i64, prec: u32) -> Real {
        Real::make(mant, exp, prec)
    }

    pub fn from_f64(v: f64, prec: u32) -> Real {
        if v == 0.0 || !v.is_finite() {
            return Real::zero(prec);
        }
        let bits = v.to_bits();
        let sign = if bits >> 63 == 1 { -1i64 } else { 1 };
        let e = ((bits >> 52) & 0x7ff) as i64;
        let frac = (bits & ((1u64 << 52) - 1)) as i64;
        let (m, ex) = if e == 0 { (frac, -1074) } else { (frac | (1i64 << 52), e - 1075) };
        Real::make(BigInt::from(sign * m), ex, prec)
    }

    pub fn from_rational(q: &BigRational, prec: u32) -> Real {
        let n = Real::make(q.numer().clone(), 0, prec + 8);
        if q.denom().is_one() {
            return n.with_prec(prec);
        }
        let d = Real::make(q.denom().clone(), 0, prec + 8);
        (&n / &d).with_prec(prec)
    }

    /// Parses `[-]digits[.digits][e[-]digits]`.
    pub fn parse_decimal(s: &str, prec: u32) -> Option<Real> {
        parse_decimal_rational(s).map(|q| Real::from_rational(&q, prec))
    }

    pub fn prec(&self) -> u32 {
        self.prec
    }

    pub fn with_prec(&self, prec: u32) -> Real {
        Real::make(self.mant.clone(), self.exp, prec)
    }

    pub fn is_zero(&self) -> bool {
        self.mant.is_zero()
    }

    pub fn is_negative(&self) -> bool {
        self.mant.is_negative()
    }

    pub fn signum(&self) -> i32 {
        match self.mant.sign() {
            Sign::Minus => -1,
            Sign::NoSign => 0,
            Sign::Plus => 1,
        }
    }

    pub fn abs(&self) -> Real {
        Real { mant: self.mant.abs(), exp: self.exp, prec: self.prec }
    }

    /// Exponent `e` with `2^(e-1) <= |x| < 2^e`; `i64::MIN` for zero.
    pub fn magnitude_exp(&self) -> i64 {
        if self.is_zero() {
            i64::MIN
        } else {
            self.exp + self.mant.bits() as i64
        }
    }

    /// `log2 |x|` as a float, `-inf` for zero. Safe for huge exponents.
    pub fn log2_abs(&self) -> f64 {
        if self.is_zero() {
            return f64::NEG_INFINITY;
        }
        let b = self.mant.bits();
        let top = if b > 60 { round_shift(&self.mant, b - 60) } else { self.mant.clone() };
        let shift = b.saturating_sub(60);
        let f = top.abs().to_f64().unwrap_or(1.0);
        f.log2() + (self.exp + shift as i64) as f64
    }

    pub fn mul_2exp(&self, k: i64) -> Real {
        if self.is_zero() {
            return self.clone();
        }
        Real { mant: self.mant.clone(), exp: self.exp + k, prec: self.prec }
    }

    pub fn to_f64(&self) -> f64 {
        if self.is_zero() {
            return 0.0;
        }
        let b = self.mant.bits();
        let (m, e) = if b > 64 { (round_shift(&self.mant, b - 64), self.exp + (b - 64) as i64) } else { (self.mant.clone(), self.exp) };
        let f = m.to_f64().unwrap_or(0.0);
        if e > 2000 {
            return f * f64::INFINITY;
        }
        if e < -2200 {
            return 0.0;
        }
        f * 2f64.powi(e as i32)
    }

    /// Exact dyadic value.
    pub fn to_rational(&self) -> BigRational {
        if self.exp >= 0 {
            BigRational::from_integer(&self.mant << self.exp as usize)
        } else {
            BigRational::new(self.mant.clone(), BigInt::one() << (-self.exp) as usize)
        }
    }

    pub fn floor(&self) -> BigInt {
        if self.exp >= 0 {
            &self.mant << self.exp as usize
        } else {
            self.mant.div_floor(&(BigInt::one() << (-self.exp) as usize))
        }
    }

    /// Nearest integer, ties away from zero.
    pub fn round(&self) -> BigInt {
        if self.exp >= 0 {
            &self.mant << self.exp as usize
        } else {
            round_shift(&self.mant, (-self.exp) as u64)
        }
    }

    pub fn sqr(&self) -> Real {
        self * self
    }

    pub fn recip(&self) -> Real {
        &Real::one(self.prec) / self
    }

    pub fn sqrt(&self) -> Real {
        assert!(!self.is_negative(), "sqrt of negative Real");
        if self.is_zero() {
            return self.clone();
        }
        let p = self.prec as i64;
        let bits = self.mant.bits() as i64;
        let mut k = (2 * p + 4 - bits).max(0);
        if (self.exp - k).rem_euclid(2) != 0 {
            k += 1;
        }
        let m = &self.mant << k as usize;
        let r = m.sqrt();
        Real::make(r, (self.exp - k) / 2, self.prec)
    }

    pub fn max_mag<'a>(&'a self, other: &'a Real) -> &'a Real {
        if self.abs() >= other.abs() {
            self
        } else {
            other
        }
    }

    pub fn to_sci_string(&self, digits: usize) -> String {
        format_sci(&self.to_rational(), digits.max(1))
    }
}

fn pow10(k: u32) -> BigInt {
    num_traits::pow(BigInt::from(10u32), k as usize)
}

/// Exact parse of a decimal literal.
pub fn parse_decimal_rational(s: &str) -> Option<BigRational> {
    let s = s.trim();
    if s.is_empty() {
        return None;
    }
    let (mant, ex) = match s.find(['e', 'E']) {
        Some(i) => (&s[..i], s[i + 1..].parse::<i64>().ok()?),
        None => (s, 0),
    };
    let (neg, mant) = match mant.strip_prefix('-') {
        Some(r) => (true, r),
        None => (false, mant.strip_prefix('+').unwrap_or(mant)),
    };
    let (ip, fp) = match mant.find('.') {
        Some(i) => (&mant[..i], &mant[i + 1..]),
        None => (mant, ""),
    };
    if ip.is_empty() && fp.is_empty() {
        return None;
    }
    if !ip.bytes().all(|c| c.is_ascii_digit()) || !fp.bytes().all(|c| c.is_ascii_digit()) {
        return None;
    }
    if ex.abs() > 100_000 {
        return None;
    }
    let digits = format!("{ip}{fp}");
    let mut n: BigInt = if digits.is_empty() { BigInt::zero() } else { digits.parse().ok()? };
    if neg {
        n = -n;
    }
    let e = ex - fp.len() as i64;
    Some(if e >= 0 { BigRational::from_integer(n * pow10(e as u32)) } else { BigRational::new(n, pow10((-e) as u32)) })
}

/// Scientific notation with `digits` significant digits, e.g. `-1.2500e-3`.
pub fn format_sci(q: &BigRational, digits: usize) -> String {
    if q.is_zero() {
        return "0".to_string();
    }
    let neg = q.is_negative();
    let a = q.abs();
    let num = a.numer();
    let den = a.denom();
    // decimal exponent estimate
    let est = (num.bits() as f64 - den.bits() as f64) * std::f64::consts::LOG10_2;
    let mut e10 = est.floor() as i64;
    let scaled = |e10: i64| -> BigInt {
        let k = digits as i64 - 1 - e10;
        let (n, d) = if k >= 0 { (num * pow10(k as u32), den.clone()) } else { (num.clone(), den * pow10((-k) as u32)) };
        // round half up
        (&n * 2u32 + &d).div_floor(&(&d * 2u32))
    };
    let mut n = scaled(e10);
    let lim = pow10(digits as u32);
    let low = pow10(digits as u32 - 1);
    for _ in 0..4 {
        if n >= lim {
            e10 += 1;
            n = scaled(e10);
        } else if n < low {
            e10 -= 1;
            n = scaled(e10);
        } else {
            break;
        }
    }
    let ds = n.to_string();
    let mut out = String::new();
    if neg {
        out.push('-');
    }
    out.push_str(&ds[..1]);
    if ds.len() > 1 {
        out.push('.');
        out.push_str(&ds[1..]);
    }
    if e10 != 0 {
        out.push_str(&format!("e{e10}"));
    }
    out
}

impl fmt::Debug for Real {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_sci_string(bits_to_digits(self.prec).max(1) as usize))
    }
}

impl fmt::Display for Real {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_sci_string(bits_to_digits(self.prec).max(1) as usize))
    }
}

impl PartialEq for Real {
    fn eq(&self, other: &Real) -> bool {
        self.cmp_value(other) == Ordering::Equal
    }
}

impl PartialOrd for Real {
    fn partial_cmp(&self, other: &Real) -> Option<Ordering> {
        Some(self.cmp_value(other))
    }
}

impl Real {
    fn cmp_value(&self, other: &Real) -> Ordering {
        let e = self.exp.min(other.exp);
        if (self.exp - e) > 1 << 20 || (other.exp - e) > 1 << 20 {
            // wildly different scales: compare signs then magnitudes
            let (sa, sb) = (self.signum(), other.signum());
            if sa != sb {
                return sa.cmp(&sb);
            }
            let ord = self.magnitude_exp().cmp(&other.magnitude_exp());
            return if sa >= 0 { ord } else { ord.reverse() };
        }
        let a = &self.mant << (self.exp - e) as usize;
        let b = &other.mant << (other.exp - e) as usize;
        a.cmp(&b)
    }
}

fn add_impl(a: &Real, b: &Real, negate_b: bool) -> Real {
    let p = a.prec.min(b.prec);
    if b.is_zero() {
        return a.with_prec(p);
    }
    if a.is_zero() {
        let r = b.with_prec(p);
        return if negate_b { -r } else { r };
    }
    let bm = if negate_b { -&b.mant } else { b.mant.clone() };
    let ta = a.magnitude_exp();
    let tb = b.magnitude_exp();
    let guard = p as i64 + 8;
    if ta < tb - guard {
        // a is below the rounding unit of b; keep it as a sticky bit
        return sticky_sum(&bm, b.exp, a.mant.signum(), p);
    }
    if tb < ta - guard {
        return sticky_sum(&a.mant, a.exp, bm.signum(), p);
    }
    let e = a.exp.min(b.exp);
    let x = &a.mant << (a.exp - e) as usize;
    let y = bm << (b.exp - e) as usize;
    Real::make(x + y, e, p)
}

fn sticky_sum(big: &BigInt, exp: i64, tiny_sign: BigInt, p: u32) -> Real {
    let shift = (p as i64 + 6 - big.bits() as i64).max(0) + 2;
    Real::make((big << shift as usize) + tiny_sign, exp - shift, p)
}

impl<'a> Add<&'a Real> for &'a Real {
    type Output = Real;
    fn add(self, rhs: &Real) -> Real {
        add_impl(self, rhs, false)
    }
}

impl<'a> Sub<&'a Real> for &'a Real {
    type Output = Real;
    fn sub(self, rhs: &Real) -> Real {
        add_impl(self, rhs, true)
    }
}

impl<'a> Mul<&'a Real> for &'a Real {
    type Output = Real;
    fn mul(self, rhs: &Real) -> Real {
        let p = self.prec.min(rhs.prec);
        Real::make(&self.mant * &rhs.mant, self.exp + rhs.exp, p)
    }
}

impl<'a> Div<&'a Real> for &'a Real {
    type Output = Real;
    fn div(self, rhs: &Real) -> Real {
        assert!(!rhs.is_zero(), "division by zero Real");
        let p = self.prec.min(rhs.prec);
        if self.is_zero() {
            return Real::zero(p);
        }
        let k = (p as i64 + 4 + rhs.mant.bits() as i64 - self.mant.bits() as i64).max(0);
        let n = &self.mant << k as usize;
        let (q, r) = n.div_rem(&rhs.mant);
        // sticky bit keeps rounding honest
        let q = (q << 1) + if r.is_zero() { BigInt::zero() } else { BigInt::from(q_sign(&n, &rhs.mant)) };
        Real::make(q, self.exp - rhs.exp - k - 1, p)
    }
}

fn q_sign(a: &BigInt, b: &BigInt) -> i32 {
    if a.is_negative() == b.is_negative() {
        1
    } else {
        -1
    }
}

impl Neg for Real {
    type Output = Real;
    fn neg(self) -> Real {
        Real { mant: -self.mant, exp: self.exp, prec: self.prec }
    }
}

impl Neg for &Real {
    type Output = Real;
    fn neg(self) -> Real {
        Real { mant: -&self.mant, exp: self.exp, prec: self.prec }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr<Real> for Real {
            type Output = Real;
            fn $m(self, rhs: Real) -> Real {
                (&self).$m(&rhs)
            }
        }
        impl<'a> $tr<&'a Real> for Real {
            type Output = Real;
            fn $m(self, rhs: &Real) -> Real {
                (&self).$m(rhs)
            }
        }
        impl<'a> $tr<Real> for &'a Real {
            type Output = Real;
            fn $m(self, rhs: Real) -> Real {
                self.$m(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);
forward_owned!(Div, div);

// ---------------------------------------------------------------------------
// Constants, cached at the highest precision requested so far.

static PI_CACHE: RwLock<Option<Real>> = RwLock::new(None);
static LN2_CACHE: RwLock<Option<Real>> = RwLock::new(None);

fn cached(cache: &RwLock<Option<Real>>, prec: u32, compute: fn(u32) -> Real) -> Real {
    if let Some(v) = cache.read().unwrap().as_ref() {
        if v.prec >= prec {
            return v.with_prec(prec);
        }
    }
    let v = compute(prec + 32);
    let out = v.with_prec(prec);
    let mut w = cache.write().unwrap();
    if w.as_ref().is_none_or(|c| c.prec < v.prec) {
        *w = Some(v);
    }
    out
}

/// `sum (-1)^k / ((2k+1) n^(2k+1))` scaled by `2^wp`, or the hyperbolic
/// variant without alternating signs.
fn arctan_inv_fixed(n: u32, wp: u32, hyperbolic: bool) -> BigInt {
    let one = BigInt::one() << wp as usize;
    let n2 = BigInt::from(n) * BigInt::from(n);
    let mut power = &one / BigInt::from(n);
    let mut sum = power.clone();
    let mut k = 1u64;
    loop {
        power /= &n2;
        if power.is_zero() {
            break;
        }
        let term = &power / BigInt::from(2 * k + 1);
        if !hyperbolic && k % 2 == 1 {
            sum -= term;
        } else {
            sum += term;
        }
        k += 1;
    }
    sum
}

fn compute_pi(prec: u32) -> Real {
    let wp = prec + 16;
    let s = arctan_inv_fixed(5, wp, false) * 16 - arctan_inv_fixed(239, wp, false) * 4;
    Real::make(s, -(wp as i64), prec)
}

fn compute_ln2(prec: u32) -> Real {
    let wp = prec + 16;
    // ln 2 = 2 atanh(1/3)
    let s = arctan_inv_fixed(3, wp, true) * 2;
    Real::make(s, -(wp as i64), prec)
}

pub fn pi(prec: u32) -> Real {
    cached(&PI_CACHE, prec, compute_pi)
}

pub fn ln2(prec: u32) -> Real {
    cached(&LN2_CACHE, prec, compute_ln2)
}

// ---------------------------------------------------------------------------
// Elementary functions.

impl Real {
    pub fn exp(&self) -> Real {
        let p = self.prec;
        if self.is_zero() {
            return Real::one(p);
        }
        let mag = self.magnitude_exp().max(0) as u32;
        let wp = p + 24 + mag;
        let x = self.with_prec(wp);
        let l2 = ln2(wp);
        let k = (&x / &l2).round();
        let r = &x - &(&l2 * &Real::from_bigint(&k, wp));
        let s = ((wp as f64).sqrt() / 2.0) as i64 + 2;
        let r = r.mul_2exp(-s);
        let wp2 = wp + s as u32;
        let r = r.with_prec(wp2);
        let mut sum = Real::one(wp2);
        let mut term = Real::one(wp2);
        let mut i = 1i64;
        loop {
            term = &(&term * &r) / &Real::from_i64(i, wp2);
            if term.is_zero() || term.magnitude_exp() < -(wp2 as i64) - 2 {
                break;
            }
            sum = &sum + &term;
            i += 1;
        }
        for _ in 0..s {
            sum = sum.sqr();
        }
        let kk = k.to_i64().expect("exp argument out of range");
        sum.mul_2exp(kk).with_prec(p)
    }

    pub fn ln(&self) -> Real {
        assert!(self.signum() > 0, "ln of non-positive Real");
        let p = self.prec;
        let wp = p + 32;
        // x = m 2^e with m in [1, 2)
        let e = self.magnitude_exp() - 1;
        let m = self.with_prec(wp).mul_2exp(-e);
        let j = 8;
        let mut y = m;
        for _ in 0..j {
            y = y.sqrt();
        }
        let one = Real::one(wp);
        let z = &(&y - &one) / &(&y + &one);
        let z2 = z.sqr();
        let mut sum = z.clone();
        let mut pw = z;
        let mut k = 1i64;
        loop {
            pw = &pw * &z2;
            let term = &pw / &Real::from_i64(2 * k + 1, wp);
            if term.is_zero() || term.magnitude_exp() < -(wp as i64) - 4 {
                break;
            }
            sum = &sum + &term;
            k += 1;
        }
        let lnm = sum.mul_2exp(1 + j);
        let res = &lnm + &(&ln2(wp) * &Real::from_i64(e, wp));
        res.with_prec(p)
    }

    /// `(sin x, cos x)`.
    pub fn sin_cos(&self) -> (Real, Real) {
        let p = self.prec;
        if self.is_zero() {
            return (Real::zero(p), Real::one(p));
        }
        let mag = self.magnitude_exp().max(0) as u32;
        let wp0 = p + 24 + mag;
        let x = self.with_prec(wp0);
        let half_pi = pi(wp0).mul_2exp(-1);
        let k = (&x / &half_pi).round();
        let r = &x - &(&half_pi * &Real::from_bigint(&k, wp0));
        let s = ((wp0 as f64).sqrt() / 2.0) as u32 + 2;
        let wp = wp0 + s;
        let r = r.with_prec(wp).mul_2exp(-(s as i64));
        let r2 = r.sqr();
        // sin series
        let mut sn = r.clone();
        let mut term = r.clone();
        let mut i = 1i64;
        loop {
            term = &(&term * &r2) / &Real::from_i64((2 * i) * (2 * i + 1), wp);
            term = -term;
            if term.is_zero() || term.magnitude_exp() < -(wp as i64) - 2 {
                break;
            }
            sn = &sn + &term;
            i += 1;
        }
        // cos series (avoids the cancellation of 1 - sin^2)
        let mut cs = Real::one(wp);
        let mut term = Real::one(wp);
        let mut i = 1i64;
        loop {
            term = &(&term * &r2) / &Real::from_i64((2 * i - 1) * (2 * i), wp);
            term = -term;
            if term.is_zero() || term.magnitude_exp() < -(wp as i64) - 2 {
                break;
            }
            cs = &cs + &term;
            i += 1;
        }
        let two = Real::from_i64(2, wp);
        for _ in 0..s {
            let ns = &two * &(&sn * &cs);
            let nc = &(&cs - &sn) * &(&cs + &sn);
            sn = ns;
            cs = nc;
        }
        let q = k.mod_floor(&BigInt::from(4)).to_u8().unwrap();
        let (sn, cs) = match q {
            0 => (sn, cs),
            1 => (cs, -sn),
            2 => (-sn, -cs),
            _ => (-cs, sn),
        };
        (sn.with_prec(p), cs.with_prec(p))
    }

    pub fn sin(&self) -> Real {
        self.sin_cos().0
    }

    pub fn cos(&self) -> Real {
        self.sin_cos().1
    }

    pub fn atan(&self) -> Real {
        let p = self.prec;
        if self.is_zero() {
            return Real::zero(p);
        }
        let wp = p + 32;
        let x = self.with_prec(wp);
        let one = Real::one(wp);
        if x.abs() > one {
            let hp = pi(wp).mul_2exp(-1);
            let r = (&one / &x).atan();
            let v = if x.is_negative() { &(-hp) - &r } else { &hp - &r };
            return v.with_prec(p);
        }
        let j = 8;
        let mut y = x;
        for _ in 0..j {
            // tan(t/2) = tan t / (1 + sqrt(1 + tan^2 t))
            y = &y / &(&one + &(&one + &y.sqr()).sqrt());
        }
        let y2 = y.sqr();
        let mut sum = y.clone();
        let mut pw = y;
        let mut k = 1i64;
        loop {
            pw = -(&pw * &y2);
            let term = &pw / &Real::from_i64(2 * k + 1, wp);
            if term.is_zero() || term.magnitude_exp() < -(wp as i64) - 4 {
                break;
            }
            sum = &sum + &term;
            k += 1;
        }
        sum.mul_2exp(j).with_prec(p)
    }

    /// Angle of the vector `(x, y)` in `(-pi, pi]`.
    pub fn atan2(y: &Real, x: &Real) -> Real {
        let p = y.prec.min(x.prec);
        if x.is_zero() {
            if y.is_zero() {
                return Real::zero(p);
            }
            let hp = pi(p).mul_2exp(-1);
            return if y.is_negative() { -hp } else { hp };
        }
        if y.is_zero() {
            return if x.is_negative() { pi(p) } else { Real::zero(p) };
        }
        if x.abs() >= y.abs() {
            let a = (y / x).atan();
            if !x.is_negative() {
                a
            } else if y.is_negative() {
                &a - &pi(p)
            } else {
                &a + &pi(p)
            }
        } else {
            let a = (x / y).atan();
            let hp = pi(p).mul_2exp(-1);
            if y.is_negative() {
                &(-hp) - &a
            } else {
                &hp - &a
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: &Real, b: f64, tol: f64) -> bool {
        (a.to_f64() - b).abs() <= tol * b.abs().max(1.0)
    }

    #[test]
    fn constants_match_known_digits() {
        let p = pi(200);
        assert!(p.to_sci_string(40).starts_with("3.14159265358979323846264338327950288419"));
        let l = ln2(200);
        assert!(l.to_sci_string(30).starts_with("6.9314718055994530941723212145"));
    }

    #[test]
    fn arithmetic_basics() {
        let a = Real::from_i64(7, 100);
        let b = Real::from_i64(3, 100);
        assert!(close(&(&a / &b), 7.0 / 3.0, 1e-15));
        assert!(close(&(&a - &b), 4.0, 0.0));
        assert!(close(&Real::from_i64(2, 100).sqrt(), 2f64.sqrt(), 1e-15));
        assert_eq!(Real::from_f64(-2.5, 64).round(), BigInt::from(-3));
        assert_eq!(Real::from_f64(-2.5, 64).floor(), BigInt::from(-3));
    }

    #[test]
    fn exp_ln_sin_cos_agree_with_f64() {
        for &x in &[0.3, -1.7, 5.5, 40.0, -0.001] {
            let r = Real::from_f64(x, 160);
            assert!(close(&r.exp(), x.exp(), 1e-14), "exp {x}");
            let (s, c) = r.sin_cos();
            assert!((s.to_f64() - x.sin()).abs() < 1e-14, "sin {x}");
            assert!((c.to_f64() - x.cos()).abs() < 1e-14, "cos {x}");
            assert!((r.atan().to_f64() - x.atan()).abs() < 1e-14, "atan {x}");
            let ax = r.abs();
            assert!(close(&ax.ln(), x.abs().ln(), 1e-14), "ln {x}");
        }
    }

    #[test]
    fn high_precision_identities() {
        let p = 400;
        let x = Real::parse_decimal("1.2345678901234567890123456789", p).unwrap();
        let back = x.exp().ln();
        assert!((&back - &x).abs().magnitude_exp() < -(p as i64) + 8);
        let (s, c) = x.sin_cos();
        let one = &s.sqr() + &c.sqr();
        assert!((&one - &Real::one(p)).abs().magnitude_exp() < -(p as i64) + 8);
        let t = Real::atan2(&s, &c);
        assert!((&t - &x).abs().magnitude_exp() < -(p as i64) + 8);
    }

    #[test]
    fn decimal_formatting() {
        let q = parse_decimal_rational("-0.00125").unwrap();
        assert_eq!(format_sci(&q, 3), "-1.25e-3");
        let q = parse_decimal_rational("12.5e2").unwrap();
        assert_eq!(format_sci(&q, 2), "1.3e3");
        assert!(parse_decimal_rational("1.2.3").is_none());
        assert!(parse_decimal_rational("").is_none());
    }
}
