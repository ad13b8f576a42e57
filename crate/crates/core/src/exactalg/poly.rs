//! Dense univariate polynomials over a `Field`.

use std::fmt;

use super::field::{Elem, Field};
use super::rational::Rational;
use crate::apfloat::Complex;
use crate::error::{Error, Result};

// ---------------------------------------------------------------------------
// Coefficient-slice algorithms (lowest degree first). Zero tests are the
// field's dynamic ones.

pub fn trim_dyn(v: &mut Vec<Elem>) {
    while v.last().is_some_and(|c| c.is_zero()) {
        v.pop();
    }
}

pub fn monic_slice(v: &[Elem], _f: &Field) -> Vec<Elem> {
    let lc = v.last().expect("monic of zero polynomial");
    if lc.is_one() {
        return v.to_vec();
    }
    let inv = lc.inv().expect("leading coefficient must be invertible");
    v.iter().map(|c| c * &inv).collect()
}

pub fn derivative_slice(v: &[Elem]) -> Vec<Elem> {
    let mut out: Vec<Elem> = v.iter().enumerate().skip(1).map(|(i, c)| c * &Elem::Q(Rational::from_integer((i as i64).into()))).collect();
    while out.last().is_some_and(|c| c.is_structural_zero()) {
        out.pop();
    }
    out
}

/// Long division; `b` must be trimmed and nonzero.
pub fn divrem_slices(a: &[Elem], b: &[Elem], f: &Field) -> (Vec<Elem>, Vec<Elem>) {
    let mut r: Vec<Elem> = a.iter().map(|c| f.lift(c).expect("field mismatch")).collect();
    trim_dyn(&mut r);
    let db = b.len() - 1;
    if r.len() < b.len() {
        return (Vec::new(), r);
    }
    let inv = b[db].inv().expect("zero leading coefficient in divisor");
    let mut q = vec![f.zero(); r.len() - db];
    for i in (db..r.len()).rev() {
        let c = std::mem::replace(&mut r[i], f.zero());
        if c.is_structural_zero() {
            continue;
        }
        let t = &c * &inv;
        for j in 0..db {
            if !b[j].is_structural_zero() {
                r[i - db + j] = &r[i - db + j] - &(&t * &b[j]);
            }
        }
        q[i - db] = t;
    }
    r.truncate(db);
    trim_dyn(&mut r);
    trim_dyn(&mut q);
    (q, r)
}

/// Monic gcd (empty when both inputs vanish).
pub fn gcd_slices(a: &[Elem], b: &[Elem], f: &Field) -> Vec<Elem> {
    let mut x = a.to_vec();
    let mut y = b.to_vec();
    trim_dyn(&mut x);
    trim_dyn(&mut y);
    while !y.is_empty() {
        let y_m = monic_slice(&y, f);
        let (_, r) = divrem_slices(&x, &y_m, f);
        x = y_m;
        y = r;
    }
    if x.is_empty() {
        x
    } else {
        monic_slice(&x, f)
    }
}

fn mul_slices(a: &[Elem], b: &[Elem], f: &Field) -> Vec<Elem> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![f.zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_structural_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            if !y.is_structural_zero() {
                out[i + j] = &out[i + j] + &(x * y);
            }
        }
    }
    out
}

fn sub_slices(a: &[Elem], b: &[Elem], f: &Field) -> Vec<Elem> {
    let n = a.len().max(b.len());
    let z = f.zero();
    let mut out: Vec<Elem> = (0..n).map(|i| a.get(i).unwrap_or(&z) - b.get(i).unwrap_or(&z)).collect();
    trim_dyn(&mut out);
    out
}

/// `(g, s, t)` with `s a + t b = g`, `g` monic.
pub fn xgcd_slices(a: &[Elem], b: &[Elem], f: &Field) -> (Vec<Elem>, Vec<Elem>, Vec<Elem>) {
    let mut r0 = a.to_vec();
    let mut r1 = b.to_vec();
    trim_dyn(&mut r0);
    trim_dyn(&mut r1);
    let mut s0 = vec![f.one()];
    let mut s1: Vec<Elem> = Vec::new();
    let mut t0: Vec<Elem> = Vec::new();
    let mut t1 = vec![f.one()];
    while !r1.is_empty() {
        let (q, r) = divrem_slices(&r0, &r1, f);
        let s2 = sub_slices(&s0, &mul_slices(&q, &s1, f), f);
        let t2 = sub_slices(&t0, &mul_slices(&q, &t1, f), f);
        r0 = std::mem::replace(&mut r1, r);
        s0 = std::mem::replace(&mut s1, s2);
        t0 = std::mem::replace(&mut t1, t2);
    }
    if r0.is_empty() {
        return (r0, s0, t0);
    }
    let inv = r0.last().unwrap().inv().unwrap();
    let sc = |v: Vec<Elem>| -> Vec<Elem> { v.iter().map(|c| c * &inv).collect() };
    (sc(r0), sc(s0), sc(t0))
}

fn fmt_coeff_term(c: &Elem, power: usize, var: &str, first: bool, out: &mut String) {
    let mono = match power {
        0 => String::new(),
        1 => var.to_string(),
        k => format!("{var}^{k}"),
    };
    if let Some(q) = c.as_rational() {
        let neg = q < Rational::from_integer(0.into());
        let a = if neg { -q } else { q };
        let body = if mono.is_empty() {
            super::rational::format_rational(&a)
        } else if a == Rational::from_integer(1.into()) {
            mono
        } else {
            format!("{}*{}", super::rational::format_rational(&a), mono)
        };
        if neg {
            out.push('-');
        } else if !first {
            out.push('+');
        }
        out.push_str(&body);
    } else {
        let inner = c.to_string_var();
        if !first && !(inner.starts_with('-') && !c.is_compound()) {
            out.push('+');
        }
        let cs = if c.is_compound() { format!("({inner})") } else { inner };
        if mono.is_empty() {
            out.push_str(&cs);
        } else {
            out.push_str(&format!("{cs}*{mono}"));
        }
    }
}

/// Text form, highest degree first, e.g. `x^4+x+1/4`.
pub fn format_slice(v: &[Elem], var: &str) -> String {
    let mut out = String::new();
    let mut first = true;
    for (i, c) in v.iter().enumerate().rev() {
        if c.is_structural_zero() {
            continue;
        }
        fmt_coeff_term(c, i, var, first, &mut out);
        first = false;
    }
    if first {
        out.push('0');
    }
    out
}

// ---------------------------------------------------------------------------

/// Dense polynomial with coefficients in `field`, lowest degree first and
/// no trailing zero coefficients.
#[derive(Clone)]
pub struct FieldPoly {
    field: Field,
    coeffs: Vec<Elem>,
}

impl fmt::Display for FieldPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_string_var("x"))
    }
}

impl fmt::Debug for FieldPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_string_var("x"))
    }
}

impl FieldPoly {
    /// Coefficients are lifted into `field`; panics on an incompatible one.
    pub fn new(field: &Field, coeffs: Vec<Elem>) -> FieldPoly {
        let mut c: Vec<Elem> = coeffs.iter().map(|e| field.lift(e).expect("coefficient outside the polynomial's field")).collect();
        trim_dyn(&mut c);
        FieldPoly { field: field.clone(), coeffs: c }
    }

    pub fn try_new(field: &Field, coeffs: Vec<Elem>) -> Result<FieldPoly> {
        let mut c: Vec<Elem> = coeffs.iter().map(|e| field.lift_checked(e)).collect::<Result<_>>()?;
        trim_dyn(&mut c);
        Ok(FieldPoly { field: field.clone(), coeffs: c })
    }

    pub fn from_rationals(coeffs: &[Rational]) -> FieldPoly {
        FieldPoly::new(&Field::Rational, coeffs.iter().map(|q| Elem::Q(q.clone())).collect())
    }

    pub fn from_i64s(coeffs: &[i64]) -> FieldPoly {
        let qs: Vec<Rational> = coeffs.iter().map(|&c| Rational::from_integer(c.into())).collect();
        FieldPoly::from_rationals(&qs)
    }

    pub fn zero(field: &Field) -> FieldPoly {
        FieldPoly { field: field.clone(), coeffs: Vec::new() }
    }

    pub fn one(field: &Field) -> FieldPoly {
        FieldPoly::constant(field, field.one())
    }

    pub fn constant(field: &Field, c: Elem) -> FieldPoly {
        FieldPoly::new(field, vec![c])
    }

    /// The monomial `c x^k`.
    pub fn monomial(field: &Field, c: Elem, k: usize) -> FieldPoly {
        let mut v = vec![field.zero(); k];
        v.push(c);
        FieldPoly::new(field, v)
    }

    pub fn x(field: &Field) -> FieldPoly {
        FieldPoly::monomial(field, field.one(), 1)
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn coeffs(&self) -> &[Elem] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<Elem> {
        self.coeffs
    }

    /// Coefficient of `x^i` (zero beyond the degree).
    pub fn coeff(&self, i: usize) -> Elem {
        self.coeffs.get(i).cloned().unwrap_or_else(|| self.field.zero())
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    /// Degree with `-1` for zero, convenient in comparisons.
    pub fn deg(&self) -> i64 {
        self.coeffs.len() as i64 - 1
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    pub fn lc(&self) -> Elem {
        self.coeffs.last().cloned().unwrap_or_else(|| self.field.zero())
    }

    /// Lifts into a larger field of the same tower.
    pub fn lift_to(&self, field: &Field) -> Result<FieldPoly> {
        FieldPoly::try_new(field, self.coeffs.clone())
    }

    fn common(&self, other: &FieldPoly) -> Result<(FieldPoly, FieldPoly)> {
        if self.field.same(&other.field) {
            return Ok((self.clone(), other.clone()));
        }
        let f = Field::join(&self.field, &other.field).ok_or(Error::FieldMismatch)?;
        Ok((self.lift_to(&f)?, other.lift_to(&f)?))
    }

    pub fn add(&self, other: &FieldPoly) -> FieldPoly {
        let (a, b) = self.common(other).expect("field mismatch");
        let n = a.coeffs.len().max(b.coeffs.len());
        let v = (0..n).map(|i| &a.coeff(i) + &b.coeff(i)).collect();
        FieldPoly::new(&a.field, v)
    }

    pub fn sub(&self, other: &FieldPoly) -> FieldPoly {
        let (a, b) = self.common(other).expect("field mismatch");
        let n = a.coeffs.len().max(b.coeffs.len());
        let v = (0..n).map(|i| &a.coeff(i) - &b.coeff(i)).collect();
        FieldPoly::new(&a.field, v)
    }

    pub fn neg(&self) -> FieldPoly {
        FieldPoly { field: self.field.clone(), coeffs: self.coeffs.iter().map(|c| -c).collect() }
    }

    pub fn mul(&self, other: &FieldPoly) -> FieldPoly {
        let (a, b) = self.common(other).expect("field mismatch");
        FieldPoly::new(&a.field, mul_slices(&a.coeffs, &b.coeffs, &a.field))
    }

    pub fn sqr(&self) -> FieldPoly {
        self.mul(self)
    }

    pub fn scale(&self, c: &Elem) -> FieldPoly {
        let f = Field::join(&self.field, &c.field()).expect("field mismatch");
        FieldPoly::new(&f, self.coeffs.iter().map(|a| a * c).collect())
    }

    pub fn pow(&self, n: u32) -> FieldPoly {
        let mut result = FieldPoly::one(&self.field);
        let mut base = self.clone();
        let mut k = n;
        while k > 0 {
            if k & 1 == 1 {
                result = result.mul(&base);
            }
            k >>= 1;
            if k > 0 {
                base = base.sqr();
            }
        }
        result
    }

    /// Multiplication by `x^k`.
    pub fn shift_up(&self, k: usize) -> FieldPoly {
        if self.is_zero() {
            return self.clone();
        }
        let mut v = vec![self.field.zero(); k];
        v.extend(self.coeffs.iter().cloned());
        FieldPoly { field: self.field.clone(), coeffs: v }
    }

    pub fn divrem(&self, b: &FieldPoly) -> Result<(FieldPoly, FieldPoly)> {
        let (a, b) = self.common(b)?;
        if b.is_zero() {
            return Err(Error::DivideByZeroPoly);
        }
        let (q, r) = divrem_slices(&a.coeffs, &b.coeffs, &a.field);
        Ok((FieldPoly { field: a.field.clone(), coeffs: q }, FieldPoly { field: a.field, coeffs: r }))
    }

    /// Quotient of an exact division; errors if the remainder is nonzero.
    pub fn div_exact(&self, b: &FieldPoly) -> Result<FieldPoly> {
        let (q, r) = self.divrem(b)?;
        if !r.is_zero() {
            return Err(Error::InternalCheckFailed(format!("inexact division of {self} by {b}")));
        }
        Ok(q)
    }

    pub fn rem(&self, b: &FieldPoly) -> Result<FieldPoly> {
        Ok(self.divrem(b)?.1)
    }

    pub fn monic(&self) -> FieldPoly {
        if self.is_zero() {
            return self.clone();
        }
        FieldPoly { field: self.field.clone(), coeffs: monic_slice(&self.coeffs, &self.field) }
    }

    pub fn gcd(&self, other: &FieldPoly) -> FieldPoly {
        let (a, b) = self.common(other).expect("field mismatch");
        FieldPoly { coeffs: gcd_slices(&a.coeffs, &b.coeffs, &a.field), field: a.field }
    }

    /// `(g, s, t)` with `s self + t other = g` monic.
    pub fn xgcd(&self, other: &FieldPoly) -> (FieldPoly, FieldPoly, FieldPoly) {
        let (a, b) = self.common(other).expect("field mismatch");
        let (g, s, t) = xgcd_slices(&a.coeffs, &b.coeffs, &a.field);
        let f = a.field;
        (FieldPoly { field: f.clone(), coeffs: g }, FieldPoly { field: f.clone(), coeffs: s }, FieldPoly { field: f, coeffs: t })
    }

    pub fn derivative(&self) -> FieldPoly {
        FieldPoly::new(&self.field, derivative_slice(&self.coeffs))
    }

    pub fn is_squarefree(&self) -> bool {
        self.gcd(&self.derivative()).deg() <= 0
    }

    /// Product of the distinct irreducible factors (monic).
    pub fn squarefree_part(&self) -> FieldPoly {
        if self.is_constant() {
            return self.monic();
        }
        let g = self.gcd(&self.derivative());
        self.div_exact(&g).unwrap().monic()
    }

    /// Yun's decomposition: `[(g_1, 1), (g_2, 2), ...]` with `self = lc * prod g_k^k`.
    pub fn squarefree_decomposition(&self) -> Vec<(FieldPoly, u32)> {
        let mut out = Vec::new();
        if self.is_constant() {
            return out;
        }
        let f = self.monic();
        let df = f.derivative();
        let a0 = f.gcd(&df);
        let mut b = f.div_exact(&a0).unwrap();
        let mut c = df.div_exact(&a0).unwrap();
        let mut d = c.sub(&b.derivative());
        let mut k = 1;
        while !b.is_constant() {
            let a = b.gcd(&d);
            if !a.is_constant() {
                out.push((a.clone(), k));
            }
            b = b.div_exact(&a).unwrap();
            c = d.div_exact(&a).unwrap();
            d = c.sub(&b.derivative());
            k += 1;
        }
        out
    }

    pub fn eval(&self, x: &Elem) -> Elem {
        let f = Field::join(&self.field, &x.field()).expect("field mismatch");
        let mut acc = f.zero();
        for c in self.coeffs.iter().rev() {
            acc = &(&acc * x) + c;
        }
        acc
    }

    /// `p(q(x))`.
    pub fn compose(&self, q: &FieldPoly) -> FieldPoly {
        let mut acc = FieldPoly::zero(&Field::join(&self.field, &q.field).expect("field mismatch"));
        for c in self.coeffs.iter().rev() {
            acc = acc.mul(q).add(&FieldPoly::constant(&acc.field.clone(), c.clone()));
        }
        acc
    }

    /// `p(x + c)`.
    pub fn translate(&self, c: &Elem) -> FieldPoly {
        let f = Field::join(&self.field, &c.field()).expect("field mismatch");
        let lin = FieldPoly::new(&f, vec![c.clone(), f.one()]);
        self.compose(&lin)
    }

    pub fn numeric_coeffs(&self, prec: u32) -> Vec<Complex> {
        self.coeffs.iter().map(|c| c.to_complex(prec)).collect()
    }

    pub fn eval_complex(&self, z: &Complex) -> Complex {
        let p = z.prec();
        let mut acc = Complex::zero(p);
        for c in self.coeffs.iter().rev() {
            acc = &(&acc * z) + &c.to_complex(p);
        }
        acc
    }

    pub fn equals(&self, other: &FieldPoly) -> bool {
        self.sub(other).is_zero()
    }

    pub fn max_coeff_bits(&self) -> u64 {
        self.coeffs.iter().map(|c| c.bit_size()).max().unwrap_or(0)
    }

    /// Rational coefficients when every coefficient is rational.
    pub fn rational_coeffs(&self) -> Option<Vec<Rational>> {
        self.coeffs.iter().map(|c| c.as_rational()).collect()
    }

    pub fn to_string_var(&self, var: &str) -> String {
        format_slice(&self.coeffs, var)
    }
}

impl PartialEq for FieldPoly {
    fn eq(&self, other: &FieldPoly) -> bool {
        self.equals(other)
    }
}

/// Polynomial part of the Laurent expansion of `sqrt(D)` in `1/x`: the
/// unique `A` with `lc(A)` the chosen square root of `lc(D)` and
/// `deg(D - A^2) < deg(D)/2`. Coefficients are solved top down from
/// `A^2 = D` in degrees `2m, ..., m`.
pub fn poly_sqrt_floor(d: &FieldPoly) -> Result<FieldPoly> {
    let n = d.degree().ok_or(Error::OddDegree(0))?;
    if n % 2 == 1 {
        return Err(Error::OddDegree(n));
    }
    if n == 0 {
        return Err(Error::InvalidArgument("discriminant must have degree at least 2".into()));
    }
    let m = n / 2;
    let c = d.lc().sqrt().ok_or(Error::NonSquareLeadingCoeff)?;
    let f = Field::join(d.field(), &c.field()).ok_or(Error::FieldMismatch)?;
    let two_c_inv = (&c + &c).inv().ok_or(Error::DivideByZeroPoly)?;
    // a[j] is the coefficient of x^(m-j)
    let mut a: Vec<Elem> = vec![c];
    for j in 1..=m {
        let mut s = f.zero();
        for i in 1..j {
            s = &s + &(&a[i] * &a[j - i]);
        }
        let target = &d.coeff(n - j) - &s;
        a.push(&target * &two_c_inv);
    }
    a.reverse();
    Ok(FieldPoly::new(&f, a))
}

/// Division with remainder; `FieldMismatch` for incompatible fields and
/// `DivideByZeroPoly` for a zero divisor.
pub fn poly_divrem(a: &FieldPoly, b: &FieldPoly) -> Result<(FieldPoly, FieldPoly)> {
    a.divrem(b)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::rational::{int, rat};
    use proptest::prelude::*;

    fn p(c: &[i64]) -> FieldPoly {
        FieldPoly::from_i64s(c)
    }

    #[test]
    fn sqrt_floor_examples() {
        assert_eq!(poly_sqrt_floor(&FieldPoly::from_i64s(&[1, 0, 1])).unwrap().to_string(), "x");
        assert_eq!(poly_sqrt_floor(&FieldPoly::from_i64s(&[0, 1, 0, 0, 1])).unwrap().to_string(), "x^2");
        assert!(matches!(poly_sqrt_floor(&FieldPoly::from_i64s(&[1, 0, 0, 1])), Err(Error::OddDegree(3))));
        assert!(matches!(poly_sqrt_floor(&FieldPoly::from_i64s(&[1, 0, 2])), Err(Error::NonSquareLeadingCoeff)));
        let d = FieldPoly::from_i64s(&[5, -3, 1, 2, 4]);
        let a = poly_sqrt_floor(&d).unwrap();
        assert_eq!(a.deg(), 2);
        assert!(d.sub(&a.sqr()).deg() <= 1);
    }

    #[test]
    fn divrem_examples() {
        let (q, r) = poly_divrem(&p(&[1, 0, 1]), &p(&[0, 1])).unwrap();
        assert!(q.equals(&p(&[0, 1])) && r.equals(&p(&[1])));
        // x^4 + x = (x^2 + 1)(x^2 - 1) + (x + 1)
        let (q, r) = poly_divrem(&p(&[0, 1, 0, 0, 1]), &p(&[-1, 0, 1])).unwrap();
        assert!(q.equals(&p(&[1, 0, 1])));
        assert!(r.equals(&p(&[1, 1])));
        let (q, r) = poly_divrem(&p(&[]), &p(&[1, 1])).unwrap();
        assert!(q.is_zero() && r.is_zero());
        assert!(matches!(poly_divrem(&p(&[1]), &p(&[])), Err(Error::DivideByZeroPoly)));
    }

    #[test]
    fn mismatched_fields_are_rejected() {
        let k1 = Field::number_field(&[int(-3), int(0), int(1)], 0, "t").unwrap();
        let k2 = Field::number_field(&[int(-11), int(0), int(1)], 0, "t").unwrap();
        let a = FieldPoly::new(&k1, vec![k1.gen(), k1.one()]);
        let b = FieldPoly::new(&k2, vec![k2.gen(), k2.one()]);
        assert!(matches!(poly_divrem(&a, &b), Err(Error::FieldMismatch)));
    }

    #[test]
    fn formatting() {
        assert_eq!(FieldPoly::from_rationals(&[rat(1, 4), int(1), int(0), int(0), int(1)]).to_string(), "x^4+x+1/4");
        assert_eq!(p(&[1, 0, 2]).to_string(), "2*x^2+1");
        assert_eq!(p(&[0, -1, -3]).to_string(), "-3*x^2-x");
        assert_eq!(p(&[]).to_string(), "0");
        let k = Field::number_field(&[int(1), int(0), int(1)], 0, "t").unwrap();
        let f = FieldPoly::new(&k, vec![k.gen(), &k.gen() + &k.one(), k.one()]);
        assert_eq!(f.to_string(), "x^2+(t+1)*x+t");
    }

    #[test]
    fn yun_decomposition() {
        // (x-1)^3 (x+2)^2 (x+5)
        let f = p(&[-1, 1]).pow(3).mul(&p(&[2, 1]).pow(2)).mul(&p(&[5, 1]));
        let dec = f.squarefree_decomposition();
        assert_eq!(dec.len(), 3);
        assert!(dec[0].0.equals(&p(&[5, 1])) && dec[0].1 == 1);
        assert!(dec[1].0.equals(&p(&[2, 1])) && dec[1].1 == 2);
        assert!(dec[2].0.equals(&p(&[-1, 1])) && dec[2].1 == 3);
        assert!(f.squarefree_part().equals(&p(&[-1, 1]).mul(&p(&[2, 1])).mul(&p(&[5, 1]))));
    }

    fn quartic_field() -> Field {
        // x^4 - 10x^2 + 1, the minimal polynomial of sqrt2 + sqrt3
        Field::number_field(&[int(1), int(0), int(-10), int(0), int(1)], 3, "t").unwrap()
    }

    fn nf_poly(k: &Field, coords: &[Vec<i64>]) -> FieldPoly {
        let t = k.gen();
        let cs = coords.iter().map(|c| c.iter().rev().fold(k.zero(), |acc, &a| &(&acc * &t) + &k.from_i64(a))).collect();
        FieldPoly::new(k, cs)
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(40))]

        #[test]
        fn divrem_reconstructs_over_q(a in prop::collection::vec(-50i64..50, 0..9), b in prop::collection::vec(-50i64..50, 1..6)) {
            let (a, b) = (p(&a), p(&b));
            prop_assume!(!b.is_zero());
            let (q, r) = a.divrem(&b).unwrap();
            prop_assert!(r.deg() < b.deg());
            prop_assert!(q.mul(&b).add(&r).equals(&a));
        }

        #[test]
        fn divrem_reconstructs_over_quartic_field(
            a in prop::collection::vec(prop::collection::vec(-9i64..9, 4), 0..6),
            b in prop::collection::vec(prop::collection::vec(-9i64..9, 4), 1..4),
        ) {
            let k = quartic_field();
            let (a, b) = (nf_poly(&k, &a), nf_poly(&k, &b));
            prop_assume!(!b.is_zero());
            let (q, r) = a.divrem(&b).unwrap();
            prop_assert!(r.deg() < b.deg());
            prop_assert!(q.mul(&b).add(&r).equals(&a));
        }

        #[test]
        fn sqrt_floor_recovers_root(a in prop::collection::vec(-20i64..20, 2..6), r in prop::collection::vec(-20i64..20, 0..5)) {
            let mut a = a;
            let last = a.last_mut().unwrap();
            *last = last.abs().max(1);
            let a = p(&a);
            let r = p(&r[..r.len().min(a.deg() as usize)]);
            prop_assert!(poly_sqrt_floor(&a.sqr().add(&r)).unwrap().equals(&a));
        }

        #[test]
        fn xgcd_bezout(a in prop::collection::vec(-20i64..20, 1..7), b in prop::collection::vec(-20i64..20, 1..7)) {
            let (a, b) = (p(&a), p(&b));
            prop_assume!(!a.is_zero() && !b.is_zero());
            let (g, s, t) = a.xgcd(&b);
            prop_assert!(s.mul(&a).add(&t.mul(&b)).equals(&g));
            prop_assert!(a.rem(&g).unwrap().is_zero() && b.rem(&g).unwrap().is_zero());
        }
    }
}
