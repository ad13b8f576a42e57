//! Elliptic logarithm, Betti coordinates and path continuation.

use num_complex::Complex64;
use serde_json::{json, Value};

use super::functions::{coords, wp};
use super::Lattice;
use crate::apfloat::{Complex, Real};
use crate::error::{Error, Result};

/// Real coordinates of `u = b1 omega1 + b2 omega2`.
#[derive(Clone, Debug)]
pub struct EBetti {
    pub b1: Real,
    pub b2: Real,
}

impl EBetti {
    pub fn to_json(&self, digits: usize) -> Value {
        json!({ "b1": self.b1.to_sci_string(digits), "b2": self.b2.to_sci_string(digits) })
    }
}

pub fn betti_e(l: &Lattice, u: &Complex) -> Result<EBetti> {
    let det = (&l.omega2 * &l.omega1.conj()).im;
    let scale = l.omega1.log2_abs() + l.omega2.log2_abs();
    if det.is_zero() || det.log2_abs() < scale - l.bits as f64 / 2.0 {
        return Err(Error::IllConditioned);
    }
    let (b1, b2) = coords(l, &u.with_prec(l.bits));
    let back = &l.omega1.scale(&b1) + &l.omega2.scale(&b2);
    let tol = l.tol_log2(12) + u.log2_abs().max(0.0);
    if back.dist_log2(u) > tol {
        return Err(Error::IllConditioned);
    }
    Ok(EBetti { b1, b2 })
}

/// Carlson's `R_F` in double precision.
fn carlson_rf(mut x: Complex64, mut y: Complex64, mut z: Complex64) -> Complex64 {
    for _ in 0..200 {
        let (sx, sy, sz) = (x.sqrt(), y.sqrt(), z.sqrt());
        let lam = sx * sy + sy * sz + sz * sx;
        x = (x + lam) / 4.0;
        y = (y + lam) / 4.0;
        z = (z + lam) / 4.0;
        let mu = (x + y + z) / 3.0;
        let dev = ((x - mu).norm()).max((y - mu).norm()).max((z - mu).norm());
        if dev < 1e-4 * mu.norm() {
            let (dx, dy, dz) = (1.0 - x / mu, 1.0 - y / mu, 1.0 - z / mu);
            let e2 = dx * dy - dz * dz;
            let e3 = dx * dy * dz;
            return (1.0 - e2 / 10.0 + e3 / 14.0 + e2 * e2 / 24.0 - 3.0 * e2 * e3 / 44.0) / mu.sqrt();
        }
    }
    x.sqrt().inv()
}

fn initial_guess(l: &Lattice, x: &Complex) -> Complex {
    let xf = x.to_c64();
    if !xf.is_finite() || xf.norm() > 1e150 {
        return x.sqrt().recip();
    }
    let e: Vec<Complex64> = (1..=3).map(|k| l.half_period_value(k).map(|v| v.to_c64()).unwrap_or_default()).collect();
    let g = carlson_rf(xf - e[0], xf - e[1], xf - e[2]);
    if g.is_finite() {
        Complex::from_c64(g, l.bits)
    } else {
        l.omega1.mul_2exp(-2)
    }
}

/// `z` in `[0,1) omega1 + [0,1) omega2` with `(wp(z), wp'(z)) = (x, y)`;
/// `None` is the point at infinity and maps to `0`.
pub fn elog(l: &Lattice, point: Option<(&Complex, &Complex)>) -> Result<Complex> {
    let bits = l.bits;
    let (x, y) = match point {
        None => return Ok(Complex::zero(bits)),
        Some((x, y)) => (x.with_prec(bits), y.with_prec(bits)),
    };
    let rhs = &(&(&x.powi(3).scale_i64(4) - &(&l.g2 * &x)) - &l.g3);
    let scale = (3.0 * x.log2_abs()).max(0.0);
    if (&y.sqr() - rhs).log2_abs() > l.tol_log2(12) + scale {
        return Err(Error::PointNotOnCurve);
    }
    let small_y = y.log2_abs() < l.tol_log2(0) / 2.0 + scale / 2.0;
    let mut z = if small_y {
        // 2-torsion: the half period whose value is nearest x
        let halves = [l.omega1.mul_2exp(-1), l.omega2.mul_2exp(-1), (&l.omega1 + &l.omega2).mul_2exp(-1)];
        let mut best = (f64::INFINITY, halves[0].clone());
        for h in halves {
            let d = wp(l, &h)?.0.dist_log2(&x);
            if d < best.0 {
                best = (d, h);
            }
        }
        best.1
    } else {
        let mut z = initial_guess(l, &x);
        for _ in 0..200 {
            let (p, dp) = wp(l, &z)?;
            let step = &(&p - &x) / &dp;
            z = &z - &step;
            if step.log2_abs() < z.log2_abs().max(l.omega1.log2_abs()) - bits as f64 + 8.0 {
                break;
            }
        }
        let (_, dp) = wp(l, &z)?;
        if dp.dist_log2(&y) > dp.dist_log2(&-&y) {
            z = -z;
        }
        z
    };
    let (b1, b2) = coords(l, &z);
    let f1: i64 = b1.floor().try_into().unwrap_or(0);
    let f2: i64 = b2.floor().try_into().unwrap_or(0);
    z = &(&z - &l.omega1.scale_i64(f1)) - &l.omega2.scale_i64(f2);
    let (p, dp) = wp(l, &z)?;
    let tol = l.tol_log2(14) + scale;
    if p.dist_log2(&x) > tol || (!small_y && dp.dist_log2(&y) > tol) {
        return Err(Error::InternalCheckFailed("elliptic logarithm did not converge".into()));
    }
    Ok(z)
}

/// Picks, along a parameter path, the lattice translate nearest the previous
/// value.
#[derive(Clone, Debug, Default)]
pub struct Continuation {
    prev: Option<Complex>,
}

impl Continuation {
    pub fn new() -> Continuation {
        Continuation { prev: None }
    }

    pub fn starting_at(z: Complex) -> Continuation {
        Continuation { prev: Some(z) }
    }

    pub fn last(&self) -> Option<&Complex> {
        self.prev.as_ref()
    }

    /// Moves `z` by a lattice vector of `l` towards the previous value.
    /// Fails with `BranchJump` when the nearest translate is still more than
    /// a quarter of the shortest period away.
    pub fn step(&mut self, l: &Lattice, z: &Complex) -> Result<Complex> {
        let z = z.with_prec(l.bits);
        let out = match &self.prev {
            None => z,
            Some(p) => {
                let (d1, d2) = coords(l, &(&z - p));
                let r1: i64 = d1.round().try_into().unwrap_or(0);
                let r2: i64 = d2.round().try_into().unwrap_or(0);
                let mut best: Option<(f64, Complex)> = None;
                for a in -1..=1 {
                    for b in -1..=1 {
                        let cand = &(&z - &l.omega1.scale_i64(r1 + a)) - &l.omega2.scale_i64(r2 + b);
                        let d = cand.dist_log2(p);
                        if best.as_ref().is_none_or(|(bd, _)| d < *bd) {
                            best = Some((d, cand));
                        }
                    }
                }
                let (d, cand) = best.unwrap();
                let limit = l.omega1.log2_abs().min(l.omega2.log2_abs()) - 2.0;
                if d > limit {
                    return Err(Error::BranchJump);
                }
                cand
            }
        };
        self.prev = Some(out.clone());
        Ok(out)
    }
}

/// `elog` followed by a continuation step.
pub fn elog_continued(l: &Lattice, point: Option<(&Complex, &Complex)>, cont: &mut Continuation) -> Result<Complex> {
    let z = elog(l, point)?;
    cont.step(l, &z)
}
