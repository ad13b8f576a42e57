//! Certificate that an expansion over Q has no constant `Q_i` for many
//! steps, computed modulo a large prime.
//!
//! For `deg D = 2m` and `i >= 1` the partial quotients have degree
//! `m - deg Q_i`, so a constant `Q_i` is a partial quotient of degree `m`.
//! The expansion is called normal up to step `N` when every `Q_i`,
//! `1 <= i <= N`, has degree `m - 1`. Normality up to `N` is the
//! nonvanishing of finitely many Hankel determinants in the Laurent
//! coefficients of `sqrt(D)`, which are p-integral for good `p`. A normal
//! expansion modulo `p` therefore forces a normal expansion over Q, and for
//! `m >= 2` a normal expansion has no constant `Q_i`. The modular run costs
//! nothing while the rational one grows quadratically in height.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::exactalg::modp::{is_prime, PolyP};
use crate::exactalg::{poly_sqrt_floor, FieldPoly};

/// Largest prime below 2^61.
const START_PRIME: u64 = (1 << 61) - 1;
const PRIMES_TRIED: usize = 3;

#[derive(Clone, Debug, Serialize)]
pub struct NormalityCertificate {
    pub prime: u64,
    pub steps: usize,
    /// Degree of every `Q_i` modulo the prime.
    pub q_degree: usize,
}

fn reduce(f: &FieldPoly, p: u64) -> Option<PolyP> {
    PolyP::from_rationals(&f.rational_coeffs()?, p)
}

/// Runs the expansion modulo `p`; `true` when it is normal for `steps`.
fn normal_mod_p(d: &PolyP, a0: &PolyP, m: usize, steps: usize) -> bool {
    let p = d.p;
    let mut pp = PolyP::zero(p);
    let mut q = PolyP::one(p);
    let mut a = a0.clone();
    for _ in 0..steps {
        let p_next = a.mul(&q).sub(&pp);
        let (q_next, r) = d.sub(&p_next.mul(&p_next)).divrem(&q);
        if !r.is_zero() || q_next.deg() != m as i64 - 1 {
            return false;
        }
        pp = p_next;
        q = q_next;
        a = pp.add(a0).divrem(&q).0;
    }
    true
}

/// A certificate that `D` over Q has no constant `Q_i` for
/// `1 <= i <= steps`, or `None` if no tried prime gives one (inconclusive).
pub fn normality_certificate(d: &FieldPoly, steps: usize) -> Result<Option<NormalityCertificate>> {
    let a = poly_sqrt_floor(d)?;
    let n = d.deg() as usize;
    let m = n / 2;
    if m < 2 {
        return Err(Error::InvalidArgument("normality certificates need degree at least 4".into()));
    }
    if a.rational_coeffs().is_none() || d.rational_coeffs().is_none() {
        return Err(Error::InvalidArgument("normality certificates need rational coefficients".into()));
    }
    let mut p = START_PRIME;
    let mut tried = 0;
    while tried < PRIMES_TRIED && p > 3 {
        if is_prime(p) {
            if let (Some(dp), Some(ap)) = (reduce(d, p), reduce(&a, p)) {
                if dp.deg() == n as i64 && dp.is_squarefree() {
                    tried += 1;
                    if normal_mod_p(&dp, &ap, m, steps) {
                        return Ok(Some(NormalityCertificate { prime: p, steps, q_degree: m - 1 }));
                    }
                }
            }
        }
        p -= 2;
    }
    Ok(None)
}
