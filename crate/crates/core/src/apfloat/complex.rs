use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_rational::BigRational;

use super::real::{bits_to_digits, format_sci, parse_decimal_rational, pi, Real};

/// Arbitrary-precision complex number.
#[derive(Clone, PartialEq)]
pub struct Complex {
    pub re: Real,
    pub im: Real,
}

impl Complex {
    pub fn new(re: Real, im: Real) -> Complex {
        Complex { re, im }
    }

    pub fn zero(prec: u32) -> Complex {
        Complex::new(Real::zero(prec), Real::zero(prec))
    }

    pub fn one(prec: u32) -> Complex {
        Complex::new(Real::one(prec), Real::zero(prec))
    }

    pub fn i(prec: u32) -> Complex {
        Complex::new(Real::zero(prec), Real::one(prec))
    }

    pub fn from_real(re: Real) -> Complex {
        let p = re.prec();
        Complex::new(re, Real::zero(p))
    }

    pub fn from_i64(v: i64, prec: u32) -> Complex {
        Complex::from_real(Real::from_i64(v, prec))
    }

    pub fn from_f64(re: f64, im: f64, prec: u32) -> Complex {
        Complex::new(Real::from_f64(re, prec), Real::from_f64(im, prec))
    }

    pub fn from_rational(q: &BigRational, prec: u32) -> Complex {
        Complex::from_real(Real::from_rational(q, prec))
    }

    pub fn from_c64(z: num_complex::Complex64, prec: u32) -> Complex {
        Complex::from_f64(z.re, z.im, prec)
    }

    pub fn to_c64(&self) -> num_complex::Complex64 {
        num_complex::Complex64::new(self.re.to_f64(), self.im.to_f64())
    }

    /// `2 pi i`.
    pub fn two_pi_i(prec: u32) -> Complex {
        Complex::new(Real::zero(prec), pi(prec).mul_2exp(1))
    }

    pub fn prec(&self) -> u32 {
        self.re.prec().min(self.im.prec())
    }

    pub fn with_prec(&self, prec: u32) -> Complex {
        Complex::new(self.re.with_prec(prec), self.im.with_prec(prec))
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn conj(&self) -> Complex {
        Complex::new(self.re.clone(), -&self.im)
    }

    pub fn mul_i(&self) -> Complex {
        Complex::new(-&self.im, self.re.clone())
    }

    pub fn scale(&self, r: &Real) -> Complex {
        Complex::new(&self.re * r, &self.im * r)
    }

    pub fn scale_i64(&self, k: i64) -> Complex {
        let r = Real::from_i64(k, self.prec());
        self.scale(&r)
    }

    pub fn mul_2exp(&self, k: i64) -> Complex {
        Complex::new(self.re.mul_2exp(k), self.im.mul_2exp(k))
    }

    pub fn norm_sqr(&self) -> Real {
        &self.re.sqr() + &self.im.sqr()
    }

    pub fn abs(&self) -> Real {
        self.norm_sqr().sqrt()
    }

    /// `log2 |z|` estimate, `-inf` for zero.
    pub fn log2_abs(&self) -> f64 {
        let a = self.re.log2_abs();
        let b = self.im.log2_abs();
        let m = a.max(b);
        if m == f64::NEG_INFINITY {
            return m;
        }
        m + 0.5 * (1.0 + 2f64.powf(2.0 * (a.min(b) - m))).log2()
    }

    pub fn arg(&self) -> Real {
        Real::atan2(&self.im, &self.re)
    }

    pub fn sqr(&self) -> Complex {
        self * self
    }

    pub fn recip(&self) -> Complex {
        &Complex::one(self.prec()) / self
    }

    pub fn powi(&self, n: i64) -> Complex {
        if n < 0 {
            return self.powi(-n).recip();
        }
        let mut result = Complex::one(self.prec());
        let mut base = self.clone();
        let mut k = n as u64;
        while k > 0 {
            if k & 1 == 1 {
                result = &result * &base;
            }
            k >>= 1;
            if k > 0 {
                base = base.sqr();
            }
        }
        result
    }

    pub fn exp(&self) -> Complex {
        let m = self.re.exp();
        let (s, c) = self.im.sin_cos();
        Complex::new(&m * &c, &m * &s)
    }

    /// Principal logarithm, imaginary part in `(-pi, pi]`.
    pub fn ln(&self) -> Complex {
        assert!(!self.is_zero(), "log of zero");
        Complex::new(self.abs().ln(), self.arg())
    }

    /// Principal square root (non-negative real part).
    pub fn sqrt(&self) -> Complex {
        let p = self.prec();
        if self.is_zero() {
            return Complex::zero(p);
        }
        let r = self.abs();
        if !self.re.is_negative() {
            let s = (&r + &self.re).mul_2exp(-1).sqrt();
            let t = &self.im / &s.mul_2exp(1);
            Complex::new(s, t)
        } else {
            let t = (&r - &self.re).mul_2exp(-1).sqrt();
            let s = &self.im.abs() / &t.mul_2exp(1);
            let t = if self.im.is_negative() { -t } else { t };
            Complex::new(s, t)
        }
    }

    /// `|a - b|` measured as `log2`, convenient for tolerance checks.
    pub fn dist_log2(&self, other: &Complex) -> f64 {
        (self - other).log2_abs()
    }

    /// Decimal rendering in the `re+im*i` form.
    pub fn to_string_digits(&self, digits: usize) -> String {
        let re = format_sci(&self.re.to_rational(), digits);
        let im = format_sci(&self.im.to_rational(), digits);
        if im.starts_with('-') {
            format!("{re}{im}*i")
        } else {
            format!("{re}+{im}*i")
        }
    }

    /// Parses `re`, `im*i`, `re+im*i`, `re-im*i`, `i`, `-i` with decimal
    /// literals.
    pub fn parse(s: &str, prec: u32) -> Option<Complex> {
        let (re, im) = parse_complex_rational(s)?;
        Some(Complex::new(Real::from_rational(&re, prec), Real::from_rational(&im, prec)))
    }
}

/// Exact parse of a complex decimal literal into `(re, im)`.
pub fn parse_complex_rational(s: &str) -> Option<(BigRational, BigRational)> {
    let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    if t.is_empty() {
        return None;
    }
    // split at the last sign that is not part of an exponent and not leading
    let bytes = t.as_bytes();
    let mut split = None;
    for i in (1..bytes.len()).rev() {
        if (bytes[i] == b'+' || bytes[i] == b'-') && !matches!(bytes[i - 1], b'e' | b'E') {
            split = Some(i);
            break;
        }
    }
    let zero = || BigRational::from_integer(0.into());
    let imag_part = |p: &str| -> Option<BigRational> {
        let body = p.strip_suffix("*i").or_else(|| p.strip_suffix('i'))?;
        match body {
            "" | "+" => Some(BigRational::from_integer(1.into())),
            "-" => Some(BigRational::from_integer((-1).into())),
            _ => parse_decimal_rational(body),
        }
    };
    if t.ends_with('i') {
        match split {
            Some(i) => Some((parse_decimal_rational(&t[..i])?, imag_part(&t[i..])?)),
            None => Some((zero(), imag_part(&t)?)),
        }
    } else {
        Some((parse_decimal_rational(&t)?, zero()))
    }
}

impl fmt::Debug for Complex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_string_digits(bits_to_digits(self.prec()).clamp(1, 60) as usize))
    }
}

impl fmt::Display for Complex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_string_digits(bits_to_digits(self.prec()).max(1) as usize))
    }
}

impl<'a> Add<&'a Complex> for &'a Complex {
    type Output = Complex;
    fn add(self, o: &Complex) -> Complex {
        Complex::new(&self.re + &o.re, &self.im + &o.im)
    }
}

impl<'a> Sub<&'a Complex> for &'a Complex {
    type Output = Complex;
    fn sub(self, o: &Complex) -> Complex {
        Complex::new(&self.re - &o.re, &self.im - &o.im)
    }
}

impl<'a> Mul<&'a Complex> for &'a Complex {
    type Output = Complex;
    fn mul(self, o: &Complex) -> Complex {
        Complex::new(&(&self.re * &o.re) - &(&self.im * &o.im), &(&self.re * &o.im) + &(&self.im * &o.re))
    }
}

impl<'a> Div<&'a Complex> for &'a Complex {
    type Output = Complex;
    fn div(self, o: &Complex) -> Complex {
        let d = o.norm_sqr();
        let n = self * &o.conj();
        Complex::new(&n.re / &d, &n.im / &d)
    }
}

impl Neg for &Complex {
    type Output = Complex;
    fn neg(self) -> Complex {
        Complex::new(-&self.re, -&self.im)
    }
}

impl Neg for Complex {
    type Output = Complex;
    fn neg(self) -> Complex {
        Complex::new(-self.re, -self.im)
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr<Complex> for Complex {
            type Output = Complex;
            fn $m(self, rhs: Complex) -> Complex {
                (&self).$m(&rhs)
            }
        }
        impl<'a> $tr<&'a Complex> for Complex {
            type Output = Complex;
            fn $m(self, rhs: &Complex) -> Complex {
                (&self).$m(rhs)
            }
        }
        impl<'a> $tr<Complex> for &'a Complex {
            type Output = Complex;
            fn $m(self, rhs: Complex) -> Complex {
                self.$m(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);
forward_owned!(Div, div);

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sqrt_is_principal_and_squares_back() {
        for &(a, b) in &[(3.0, 4.0), (-3.0, 4.0), (-3.0, -4.0), (-2.0, 0.0), (0.0, -1.0)] {
            let z = Complex::from_f64(a, b, 128);
            let r = z.sqrt();
            assert!(!r.re.is_negative());
            assert!(r.sqr().dist_log2(&z) < -100.0, "{a} {b}");
        }
    }

    #[test]
    fn exp_of_two_pi_i_is_one() {
        let z = Complex::two_pi_i(256).exp();
        assert!(z.dist_log2(&Complex::one(256)) < -240.0);
    }

    #[test]
    fn parse_forms() {
        let p = 64;
        let c = Complex::parse("0.3-0.1*i", p).unwrap();
        assert!((c.re.to_f64() - 0.3).abs() < 1e-15 && (c.im.to_f64() + 0.1).abs() < 1e-15);
        let c = Complex::parse("-i", p).unwrap();
        assert_eq!(c.im.to_f64(), -1.0);
        let c = Complex::parse("1e-3+2e+1i", p).unwrap();
        assert_eq!(c.im.to_f64(), 20.0);
        assert!((c.re.to_f64() - 1e-3).abs() < 1e-18);
        assert!(Complex::parse("1+", p).is_none());
        assert!(Complex::parse("x", p).is_none());
    }

    #[test]
    fn ln_inverts_exp() {
        let z = Complex::from_f64(0.7, -2.9, 200);
        assert!(z.exp().ln().dist_log2(&z) < -180.0);
    }
}
