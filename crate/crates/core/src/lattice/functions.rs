//! `wp`, `wp'`, `zeta` and `sigma` through the odd Jacobi theta function.
//!
//! With `v = pi z / omega1` and nome `q = exp(i pi tau)`,
//! `theta(v) = sum_n (-1)^n q^(n(n+1)) sin((2n+1) v)` (the common factor
//! `2 q^(1/4)` cancels everywhere it is used).

use super::Lattice;
use crate::apfloat::{pi, Complex, Real};
use crate::error::{Error, Result};

/// `[theta, theta', theta'', theta''']` at `v`.
pub(crate) fn theta_derivatives(l: &Lattice, v: &Complex) -> [Complex; 4] {
    let bits = l.bits;
    let w = v.mul_i().exp();
    let w_inv = w.recip();
    let w2 = w.sqr();
    let w2_inv = w_inv.sqr();
    let q2 = l.nome.sqr();
    let mut out = [Complex::zero(bits), Complex::zero(bits), Complex::zero(bits), Complex::zero(bits)];
    // q^(n(n+1)) with ratio q^(2(n+1)) between consecutive terms
    let mut qpow = Complex::one(bits);
    let mut ratio = q2.clone();
    let (mut wp_, mut wm) = (w, w_inv);
    let mut peak = f64::NEG_INFINITY;
    for n in 0i64..10_000 {
        let m = 2 * n + 1;
        let t = if n % 2 == 0 { qpow.clone() } else { -&qpow };
        // sin = (w^m - w^-m) / 2i, cos = (w^m + w^-m) / 2
        let s = (&wp_ - &wm).mul_i().mul_2exp(-1);
        let s = -&s;
        let c = (&wp_ + &wm).mul_2exp(-1);
        let ts = &t * &s;
        let tc = &t * &c;
        let mag = ts.log2_abs().max(tc.log2_abs()) + 3.0 * (m as f64).log2();
        peak = peak.max(mag);
        out[0] = &out[0] + &ts;
        out[1] = &out[1] + &tc.scale_i64(m);
        out[2] = &out[2] - &ts.scale_i64(m * m);
        out[3] = &out[3] - &tc.scale_i64(m * m * m);
        if n > 0 && mag < peak - bits as f64 - 16.0 {
            break;
        }
        qpow = &qpow * &ratio;
        ratio = &ratio * &q2;
        wp_ = &wp_ * &w2;
        wm = &wm * &w2_inv;
    }
    out
}

/// Real coordinates of `z` in the basis `omega1, omega2`.
pub(crate) fn coords(l: &Lattice, z: &Complex) -> (Real, Real) {
    let im = |a: &Complex, b: &Complex| (a * &b.conj()).im;
    let b2 = &im(z, &l.omega1) / &im(&l.omega2, &l.omega1);
    let b1 = &im(z, &l.omega2) / &im(&l.omega1, &l.omega2);
    (b1, b2)
}

/// `z = z0 + m1 omega1 + m2 omega2` with `z0` in the centred parallelogram.
pub fn reduce(l: &Lattice, z: &Complex) -> (Complex, i64, i64) {
    let (b1, b2) = coords(l, z);
    let to_i = |r: &Real| -> i64 { r.round().try_into().unwrap_or(0) };
    let (m1, m2) = (to_i(&b1), to_i(&b2));
    let z0 = &(z - &l.omega1.scale_i64(m1)) - &l.omega2.scale_i64(m2);
    (z0, m1, m2)
}

/// `PoleProximity` when `z` is within `10^(-prec/2)` of the lattice.
pub(crate) fn check_off_lattice(l: &Lattice, z: &Complex, what: &str) -> Result<()> {
    let (z0, _, _) = reduce(l, &z.with_prec(l.bits));
    check_pole(l, &z0).map_err(|_| Error::PoleProximity(format!("{what} lies in the lattice")))
}

/// `log2` of the distance from a reduced `z0` to the nearest lattice point.
fn lattice_distance_log2(l: &Lattice, z0: &Complex) -> f64 {
    let mut best = f64::INFINITY;
    for a in -1i64..=1 {
        for b in -1i64..=1 {
            let w = &l.omega1.scale_i64(a) + &l.omega2.scale_i64(b);
            best = best.min(z0.dist_log2(&w));
        }
    }
    best
}

fn check_pole(l: &Lattice, z0: &Complex) -> Result<()> {
    let limit = l.omega1.log2_abs() - (l.digits as f64) * std::f64::consts::LOG2_10 / 2.0;
    if lattice_distance_log2(l, z0) < limit {
        return Err(Error::PoleProximity("z is within 10^(-prec/2) of a lattice point".into()));
    }
    Ok(())
}

struct Logs {
    l1: Complex,
    l2: Complex,
    l3: Complex,
    s: Complex,
}

fn logs(l: &Lattice, z: &Complex) -> Logs {
    let s = &Complex::from_real(pi(l.bits)) / &l.omega1;
    let th = theta_derivatives(l, &(&s * z));
    let inv = th[0].recip();
    Logs { l1: &th[1] * &inv, l2: &th[2] * &inv, l3: &th[3] * &inv, s }
}

/// `zeta` without reduction, for arguments already near the origin.
pub(crate) fn zeta_unreduced(l: &Lattice, z: &Complex) -> Complex {
    let g = logs(l, z);
    &(&(&l.eta1 * z) / &l.omega1) + &(&g.s * &g.l1)
}

/// `(wp(z), wp'(z))`.
pub fn wp(l: &Lattice, z: &Complex) -> Result<(Complex, Complex)> {
    let (z0, _, _) = reduce(l, &z.with_prec(l.bits));
    check_pole(l, &z0)?;
    let g = logs(l, &z0);
    let s2 = g.s.sqr();
    let p = &(-&(&l.eta1 / &l.omega1)) - &(&s2 * &(&g.l2 - &g.l1.sqr()));
    let cubic = &(&g.l3 - &(&g.l1 * &g.l2).scale_i64(3)) + &g.l1.powi(3).scale_i64(2);
    let dp = -&(&(&s2 * &g.s) * &cubic);
    Ok((p, dp))
}

/// Weierstrass `zeta`, with `zeta(z + omega_i) = zeta(z) + eta_i`.
pub fn wzeta(l: &Lattice, z: &Complex) -> Result<Complex> {
    let (z0, m1, m2) = reduce(l, &z.with_prec(l.bits));
    check_pole(l, &z0)?;
    let base = zeta_unreduced(l, &z0);
    Ok(&(&base + &l.eta1.scale_i64(m1)) + &l.eta2.scale_i64(m2))
}

/// Weierstrass `sigma`, entire, odd, vanishing exactly on the lattice.
pub fn wsigma(l: &Lattice, z: &Complex) -> Complex {
    let (z0, m1, m2) = reduce(l, &z.with_prec(l.bits));
    let s = &Complex::from_real(pi(l.bits)) / &l.omega1;
    let th = theta_derivatives(l, &(&s * &z0));
    let th0 = theta_derivatives(l, &Complex::zero(l.bits));
    let gauss = (&(&l.eta1 * &z0.sqr()) / &l.omega1.scale_i64(2)).exp();
    let base = &(&(&l.omega1 / &Complex::from_real(pi(l.bits))) * &gauss) * &(&th[0] / &th0[1]);
    if m1 == 0 && m2 == 0 {
        return base;
    }
    // sigma(z0 + w) = (-1)^(m1 + m2 + m1 m2) sigma(z0) exp(eta_w (z0 + w/2))
    let w = &l.omega1.scale_i64(m1) + &l.omega2.scale_i64(m2);
    let eta_w = &l.eta1.scale_i64(m1) + &l.eta2.scale_i64(m2);
    let f = (&eta_w * &(&z0 + &w.mul_2exp(-1))).exp();
    let v = &base * &f;
    if (m1 + m2 + m1 * m2).rem_euclid(2) == 1 {
        -v
    } else {
        v
    }
}
