//! Simultaneous root finding (Aberth–Ehrlich) with precision doubling.

use num_complex::Complex64;

use super::poly::FieldPoly;
use crate::apfloat::{digits_to_bits, Complex, Real};
use crate::error::{Error, Result};

fn aberth_f64(c: &[Complex64]) -> Option<Vec<Complex64>> {
    let n = c.len() - 1;
    let lc = c[n];
    let a: Vec<Complex64> = c.iter().map(|x| x / lc).collect();
    let mut r = 0f64;
    for k in 1..=n {
        let v = a[n - k].norm();
        if v > 0.0 {
            r = r.max(v.powf(1.0 / k as f64));
        }
    }
    let r = (2.0 * r).max(1e-300);
    let mut z: Vec<Complex64> = (0..n).map(|k| Complex64::from_polar(r, 0.4 + std::f64::consts::TAU * k as f64 / n as f64)).collect();
    for _ in 0..2000 {
        let mut done = true;
        for k in 0..n {
            let (f, df) = horner64(&a, z[k]);
            if f.norm() == 0.0 {
                continue;
            }
            let ratio = f / df;
            let mut s = Complex64::new(0.0, 0.0);
            for j in 0..n {
                if j != k {
                    s += (z[k] - z[j]).inv();
                }
            }
            let w = ratio / (Complex64::new(1.0, 0.0) - ratio * s);
            if !w.re.is_finite() || !w.im.is_finite() {
                return None;
            }
            z[k] -= w;
            if w.norm() > 1e-14 * z[k].norm().max(1e-300) {
                done = false;
            }
        }
        if done {
            break;
        }
    }
    // clustered roots stall at the f64 noise floor; they are still good seeds
    z.iter().all(|x| x.re.is_finite() && x.im.is_finite()).then_some(z)
}

fn horner64(a: &[Complex64], z: Complex64) -> (Complex64, Complex64) {
    let mut f = Complex64::new(0.0, 0.0);
    let mut df = Complex64::new(0.0, 0.0);
    for c in a.iter().rev() {
        df = df * z + f;
        f = f * z + c;
    }
    (f, df)
}

fn horner(a: &[Complex], z: &Complex) -> (Complex, Complex) {
    let p = z.prec();
    let mut f = Complex::zero(p);
    let mut df = Complex::zero(p);
    for c in a.iter().rev() {
        df = &(&df * z) + &f;
        f = &(&f * z) + c;
    }
    (f, df)
}

/// One Gauss–Seidel Aberth sweep; returns the largest relative correction
/// as a `log2`.
fn aberth_sweep(a: &[Complex], z: &mut [Complex]) -> f64 {
    let n = z.len();
    let mut worst = f64::NEG_INFINITY;
    for k in 0..n {
        let (f, df) = horner(a, &z[k]);
        if f.is_zero() {
            continue;
        }
        let ratio = &f / &df;
        let p = z[k].prec();
        let mut s = Complex::zero(p);
        for j in 0..n {
            if j != k {
                s = &s + &(&z[k] - &z[j]).recip();
            }
        }
        let denom = &Complex::one(p) - &(&ratio * &s);
        let w = &ratio / &denom;
        z[k] = &z[k] - &w;
        let rel = w.log2_abs() - z[k].log2_abs().max(0.0);
        worst = worst.max(rel);
    }
    worst
}

fn seeds_high(a: &[Complex], prec: u32) -> Option<Vec<Complex>> {
    let n = a.len() - 1;
    let lc = a[n].clone();
    let a: Vec<Complex> = a.iter().map(|x| (x / &lc).with_prec(prec)).collect();
    let mut lr = f64::NEG_INFINITY;
    for k in 1..=n {
        let v = a[n - k].log2_abs();
        if v.is_finite() {
            lr = lr.max(v / k as f64);
        }
    }
    let lr = if lr.is_finite() { lr + 1.0 } else { 0.0 };
    let r = Real::from_f64(2f64.powf(lr.clamp(-1000.0, 1000.0)), prec);
    let mut z: Vec<Complex> = (0..n)
        .map(|k| {
            let ang = Real::from_f64(0.4 + std::f64::consts::TAU * k as f64 / n as f64, prec);
            let (s, c) = ang.sin_cos();
            Complex::new(&c * &r, &s * &r)
        })
        .collect();
    for _ in 0..3000 {
        if aberth_sweep(&a, &mut z) < -(prec as f64) + 24.0 {
            return Some(z);
        }
    }
    None
}

/// Distinct roots of a squarefree polynomial given by numeric coefficients
/// (lowest degree first), refined to `prec` bits. `None` when iteration or
/// the separation check fails at this precision.
pub fn aberth(coeffs: &[Complex], prec: u32) -> Option<Vec<Complex>> {
    let mut c = coeffs.to_vec();
    while c.last().is_some_and(|x| x.is_zero()) {
        c.pop();
    }
    let n = c.len().checked_sub(1)?;
    if n == 0 {
        return Some(Vec::new());
    }
    let wp = prec + 32;
    if n == 1 {
        let r = -(&c[0].with_prec(wp) / &c[1].with_prec(wp));
        return Some(vec![r.with_prec(prec)]);
    }
    let in_range = c.iter().all(|x| x.is_zero() || x.log2_abs().abs() < 900.0);
    let mut z: Vec<Complex> = match in_range.then(|| aberth_f64(&c.iter().map(|x| x.to_c64()).collect::<Vec<_>>())).flatten() {
        Some(s) => s.into_iter().map(|x| Complex::from_c64(x, 64)).collect(),
        None => seeds_high(&c, 128)?,
    };
    // precision doubling
    let mut p = 64u32;
    loop {
        p = (p * 2).min(wp);
        let a: Vec<Complex> = c.iter().map(|x| x.with_prec(p)).collect();
        for zk in z.iter_mut() {
            *zk = zk.with_prec(p);
        }
        // ill-conditioned clusters stall above the target; half the bits
        // is accepted and the caller's residual check decides
        let mut worst = 0f64;
        for _ in 0..40 {
            worst = aberth_sweep(&a, &mut z);
            if worst < -(p as f64) + 16.0 {
                break;
            }
        }
        if worst >= -(p as f64) / 2.0 {
            return None;
        }
        if p == wp {
            break;
        }
    }
    // separation: the roots of a squarefree polynomial are distinct
    let scale = z.iter().map(|x| x.log2_abs()).fold(0f64, f64::max);
    for i in 0..n {
        for j in i + 1..n {
            if z[i].dist_log2(&z[j]) < scale - (prec as f64) / 2.0 {
                return None;
            }
        }
    }
    Some(z.into_iter().map(|x| x.with_prec(prec)).collect())
}

fn is_real_root(z: &Complex) -> bool {
    let p = z.prec() as f64;
    z.im.is_zero() || z.im.log2_abs() < z.re.log2_abs().max(0.0) - p / 2.0
}

/// Canonical order: real roots ascending, then the others by real part and
/// then imaginary part. Imaginary noise on real roots is cleared.
pub fn sort_roots(r: &mut [Complex]) {
    for z in r.iter_mut() {
        if is_real_root(z) {
            z.im = Real::zero(z.prec());
        }
    }
    r.sort_by(|a, b| {
        let ra = a.im.is_zero();
        let rb = b.im.is_zero();
        if ra != rb {
            return rb.cmp(&ra);
        }
        let tol = (a.prec().min(b.prec()) / 2) as f64;
        let d = (&a.re - &b.re).log2_abs();
        let scale = a.re.log2_abs().max(b.re.log2_abs()).max(0.0);
        if d < scale - tol {
            a.im.partial_cmp(&b.im).unwrap()
        } else {
            a.re.partial_cmp(&b.re).unwrap()
        }
    });
}

/// All complex roots with multiplicity, each certified by
/// `|f(r)| < 10^(-digits+10) max|coeff|`, retrying at twice and four times
/// the working precision before giving up.
pub fn complex_roots(f: &FieldPoly, digits: u32) -> Result<Vec<Complex>> {
    if f.is_zero() {
        return Err(Error::InvalidArgument("zero polynomial has no finite root set".into()));
    }
    if digits < 15 {
        return Err(Error::InvalidArgument("precision must be at least 15 digits".into()));
    }
    let bits = digits_to_bits(digits);
    let parts = f.squarefree_decomposition();
    let mut ladder = bits + 32;
    for _ in 0..3 {
        if let Some(r) = attempt(f, &parts, bits, ladder, digits) {
            return Ok(r);
        }
        ladder *= 2;
    }
    Err(Error::PrecisionExhausted(format!("roots of {f}")))
}

fn attempt(f: &FieldPoly, parts: &[(FieldPoly, u32)], bits: u32, wp: u32, digits: u32) -> Option<Vec<Complex>> {
    let mut out = Vec::new();
    for (g, k) in parts {
        let cs = g.numeric_coeffs(wp + 32);
        let r = aberth(&cs, wp)?;
        for z in r {
            for _ in 0..*k {
                out.push(z.clone());
            }
        }
    }
    let coeffs = f.numeric_coeffs(wp);
    let maxc = coeffs.iter().map(|c| c.log2_abs()).fold(f64::NEG_INFINITY, f64::max);
    let thr = maxc + (-(digits as f64) + 10.0) * std::f64::consts::LOG2_10;
    for z in &out {
        let (v, _) = horner(&coeffs, z);
        if v.log2_abs() >= thr {
            return None;
        }
    }
    let mut out: Vec<Complex> = out.into_iter().map(|z| z.with_prec(bits)).collect();
    sort_roots(&mut out);
    Some(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::rational::{int, rat};
    use proptest::prelude::*;

    #[test]
    fn unit_imaginary_roots() {
        let f = FieldPoly::from_i64s(&[1, 0, 1]);
        let r = complex_roots(&f, 30).unwrap();
        assert_eq!(r.len(), 2);
        assert!((r[0].im.to_f64() + 1.0).abs() < 1e-15 && (r[1].im.to_f64() - 1.0).abs() < 1e-15);
        assert!(r[0].re.abs().log2_abs() < -90.0);
    }

    #[test]
    fn double_root_at_zero() {
        let f = FieldPoly::from_i64s(&[0, 0, 16]);
        let r = complex_roots(&f, 30).unwrap();
        assert_eq!(r.len(), 2);
        assert!(r.iter().all(|z| z.is_zero()));
    }

    #[test]
    fn half_point_quartic_has_two_real_roots() {
        // m^4 - 8m + 16/4
        let f = FieldPoly::from_rationals(&[int(4), int(-8), int(0), int(0), int(1)]);
        let r = complex_roots(&f, 40).unwrap();
        let real: Vec<_> = r.iter().filter(|z| z.im.is_zero()).collect();
        assert_eq!(real.len(), 2);
        assert!((real[0].re.to_f64() - 0.50834742498666).abs() < 1e-12);
        assert!((real[1].re.to_f64() - 1.79358042552885).abs() < 1e-12);
    }

    #[test]
    fn clustered_and_large_roots() {
        // (x - 1000)(x - 1000.001)(x + 1/3)
        let f = FieldPoly::from_rationals(&[int(-1000), int(1)])
            .mul(&FieldPoly::from_rationals(&[rat(-1000001, 1000), int(1)]))
            .mul(&FieldPoly::from_rationals(&[rat(1, 3), int(1)]));
        let r = complex_roots(&f, 50).unwrap();
        assert!((r[0].re.to_f64() + 1.0 / 3.0).abs() < 1e-14);
        assert!((r[2].re.to_f64() - 1000.001).abs() < 1e-10);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(12))]
        #[test]
        fn product_of_linear_factors_matches(coeffs in prop::collection::vec(-20i64..20, 3..9)) {
            let mut c = coeffs.clone();
            if *c.last().unwrap() == 0 { *c.last_mut().unwrap() = 1; }
            let f = FieldPoly::from_i64s(&c);
            let digits = 40;
            let r = complex_roots(&f, digits).unwrap();
            prop_assert_eq!(r.len(), c.len() - 1);
            let wp = digits_to_bits(digits);
            let lc = Complex::from_i64(*c.last().unwrap(), wp);
            let mut prod = vec![lc];
            for z in &r {
                let mut next = vec![Complex::zero(wp); prod.len() + 1];
                for (i, a) in prod.iter().enumerate() {
                    next[i + 1] = &next[i + 1] + a;
                    next[i] = &next[i] - &(a * z);
                }
                prod = next;
            }
            let maxc = c.iter().map(|x| x.abs()).max().unwrap() as f64;
            for (i, a) in prod.iter().enumerate() {
                let want = Complex::from_i64(c[i], wp);
                let tol = (maxc.log2() + 8.0) - (digits as f64) * std::f64::consts::LOG2_10 + 12.0 * std::f64::consts::LOG2_10;
                prop_assert!(a.dist_log2(&want) < tol, "coefficient {} off", i);
            }
        }
    }
}
