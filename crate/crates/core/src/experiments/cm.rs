//! Torsion of the Ribet section over a CM curve, with the section
//! `p = identity` so that the torsion parameters are the torsion points.

use std::collections::BTreeMap;
use std::str::FromStr;
use std::time::Instant;

use num_integer::Integer;
use rayon::prelude::*;
use serde_json::{json, Value};

use super::{elapsed_ms, error_json, Provenance, ScanReport};
use crate::apfloat::{Complex, Real};
use crate::elliptic::{psi_squared, ShortWeierstrass};
use crate::error::{Error, Result};
use crate::lattice::{periods_cached, wp, Lattice};
use crate::semiabelian::{ribet_order_check, GBetti, RibetCheck};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CmFamily {
    /// `g2 = 4, g3 = 0`, `alpha = 2i`.
    Lemniscatic,
    /// `g2 = 0, g3 = 1`, `alpha = 2 sqrt(-3)`.
    J0,
}

impl FromStr for CmFamily {
    type Err = Error;
    fn from_str(s: &str) -> Result<CmFamily> {
        match s {
            "lemniscatic" => Ok(CmFamily::Lemniscatic),
            "j0" => Ok(CmFamily::J0),
            _ => Err(Error::InvalidArgument(format!("family must be lemniscatic or j0, got '{s}'"))),
        }
    }
}

impl CmFamily {
    pub fn name(self) -> &'static str {
        match self {
            CmFamily::Lemniscatic => "lemniscatic",
            CmFamily::J0 => "j0",
        }
    }

    fn invariants(self) -> (i64, i64) {
        match self {
            CmFamily::Lemniscatic => (4, 0),
            CmFamily::J0 => (0, 1),
        }
    }

    pub fn lattice(self, digits: u32) -> Result<std::sync::Arc<Lattice>> {
        let (g2, g3) = self.invariants();
        periods_cached(&Complex::from_i64(g2, 64), &Complex::from_i64(g3, 64), digits)
    }

    pub fn alpha(self, bits: u32) -> Complex {
        match self {
            CmFamily::Lemniscatic => Complex::i(bits).scale_i64(2),
            CmFamily::J0 => Complex::new(Real::zero(bits), Real::from_i64(12, bits).sqrt()),
        }
    }

    /// `Y^2 = X^3 - 4 g2 X - 16 g3`, the curve with `x = X/4, y = Y/4`.
    fn short_model(self) -> Result<ShortWeierstrass> {
        let (g2, g3) = self.invariants();
        ShortWeierstrass::from_rationals(-4 * g2, -16 * g3)
    }
}

/// `(k1, k2)` in `[0, n)^2` with `gcd(k1, k2, n) = 1`.
pub(crate) fn primitive_pairs(n: u64) -> Vec<(i64, i64)> {
    let n = n as i64;
    (0..n).flat_map(|k1| (0..n).map(move |k2| (k1, k2))).filter(|(k1, k2)| k1.gcd(k2).gcd(&n) == 1).collect()
}

/// Jordan's totient `J2(m) = m^2 prod (1 - 1/p^2)`.
pub(crate) fn jordan2(m: u64) -> u64 {
    let (mut r, mut x, mut p) = (m * m, m, 2);
    while p * p <= x {
        if x % p == 0 {
            r = r / (p * p) * (p * p - 1);
            while x % p == 0 {
                x /= p;
            }
        }
        p += 1;
    }
    if x > 1 {
        r = r / (x * x) * (x * x - 1);
    }
    r
}

/// Points of exact order `m` counted from division polynomial degrees:
/// distinct `X` of nonzero `m`-torsion minus those of proper divisors, two
/// points per `X` except for 2-torsion.
fn divpoly_count(e: &ShortWeierstrass, m: u64, memo: &mut BTreeMap<u64, u64>) -> u64 {
    if let Some(&c) = memo.get(&m) {
        return c;
    }
    let all_x = psi_squared(e, m as usize).squarefree_part().deg().max(0) as u64;
    let mut prim_x = all_x;
    for d in 2..m {
        if m.is_multiple_of(d) {
            let c = divpoly_count(e, d, memo);
            prim_x -= if d == 2 { c } else { c / 2 };
        }
    }
    let c = if m == 2 { prim_x } else { 2 * prim_x };
    memo.insert(m, c);
    c
}

fn point(l: &Lattice, k1: i64, k2: i64, n: u64) -> Complex {
    (&l.omega1.scale_i64(k1) + &l.omega2.scale_i64(k2)).scale(&Real::from_i64(n as i64, l.bits()).recip())
}

/// Betti coordinates of `delta (2 + x(u))`: the closed-form logarithm plus
/// `log(2 + x(u))`.
fn perturbed(l: &Lattice, c: &RibetCheck) -> Result<GBetti> {
    let (x, _) = wp(l, &point(l, c.k1, c.k2, c.n))?;
    let h = &x + &Complex::from_i64(2, l.bits());
    let mut b = c.direct.clone();
    b.a = &b.a + &(&h.ln() / &Complex::two_pi_i(l.bits()));
    Ok(b)
}

struct Outcome {
    check: Result<RibetCheck>,
    perturbed_m: Option<Option<u64>>,
    ms: u64,
}

fn run_point(l: &Lattice, alpha: &Complex, k1: i64, k2: i64, n: u64) -> Outcome {
    let t = Instant::now();
    let check = ribet_order_check(l, alpha, k1, k2, n);
    let perturbed_m = check.as_ref().ok().map(|c| perturbed(l, c).ok().and_then(|b| b.recognize(n * n)).map(|r| r.m));
    Outcome { check, perturbed_m, ms: elapsed_ms(t) }
}

fn is_degenerate(o: &Outcome) -> bool {
    matches!(o.check, Err(Error::TorsionZeroQ))
}

/// `a n^2` and `n b1, n b2` integral.
fn in_expected_lattice(c: &RibetCheck) -> bool {
    match c.betti.recognize(c.n * c.n) {
        Some(r) => {
            let (m, n) = (r.m as i64, c.n as i64);
            (r.k0 * n * n) % m == 0 && (r.k1 * n) % m == 0 && (r.k2 * n) % m == 0
        }
        None => false,
    }
}

fn ribet_certificate(family: CmFamily, digits: u32, n: u64, k1: i64, k2: i64, o: &Outcome) -> Value {
    let verdict = match &o.check {
        Ok(c) => json!({"m": c.m, "divides_n2": c.divides_n2}),
        Err(e) => json!({"error": e.code()}),
    };
    json!({"kind": "ribet", "family": family.name(), "digits": digits, "n": n, "k1": k1, "k2": k2, "verdict": verdict})
}

fn ribet_row(family: CmFamily, digits: u32, n: u64, k1: i64, k2: i64, o: &Outcome) -> Value {
    let mut r = json!({
        "n": n,
        "k1": k1,
        "k2": k2,
        "certificate": ribet_certificate(family, digits, n, k1, k2, o),
        "elapsed_ms": o.ms,
        "degenerate": is_degenerate(o),
    });
    match &o.check {
        Ok(c) => {
            r["m"] = json!(c.m);
            r["divides_n2"] = json!(c.divides_n2);
            r["betti_in_lattice"] = json!(in_expected_lattice(c));
            r["betti"] = c.betti.to_json(c.n * c.n);
            r["extrapolation_gap_log2"] = json!(c.extrapolation_gap_log2);
            r["perturbed_m"] = json!(o.perturbed_m.flatten());
        }
        Err(e) => r["error"] = error_json(e),
    }
    r
}

fn work(ns: impl Iterator<Item = u64>) -> Vec<(u64, i64, i64)> {
    ns.flat_map(|n| primitive_pairs(n).into_iter().map(move |(a, b)| (n, a, b))).collect()
}

pub fn ribet_scan(n_max: u64, family: CmFamily, digits: u32) -> Result<ScanReport> {
    if n_max < 3 {
        return Err(Error::InvalidArgument("n_max must be at least 3".into()));
    }
    let l = family.lattice(digits)?;
    let alpha = family.alpha(l.bits());
    let items = work(3..=n_max);
    let outcomes: Vec<Outcome> = items.par_iter().map(|&(n, k1, k2)| run_point(&l, &alpha, k1, k2, n)).collect();
    let rows: Vec<Value> = items.iter().zip(&outcomes).map(|(&(n, k1, k2), o)| ribet_row(family, digits, n, k1, k2, o)).collect();

    let mut orders: BTreeMap<u64, BTreeMap<u64, u64>> = BTreeMap::new();
    let (mut tested, mut divides, mut in_lattice, mut broken, mut failed, mut degenerate) = (0u64, 0u64, 0u64, 0u64, 0u64, 0u64);
    for (&(n, _, _), o) in items.iter().zip(&outcomes) {
        match &o.check {
            Ok(c) => {
                tested += 1;
                *orders.entry(n).or_default().entry(c.m).or_default() += 1;
                divides += c.divides_n2 as u64;
                in_lattice += in_expected_lattice(c) as u64;
                broken += (o.perturbed_m == Some(None)) as u64;
            }
            Err(Error::TorsionZeroQ) => degenerate += 1,
            Err(_) => failed += 1,
        }
    }
    let frac = |k: u64| if tested == 0 { Value::Null } else { json!(k as f64 / tested as f64) };
    let mut prov = Provenance::new(digits, 0);
    prov.inference = vec![
        "each order m is read from Betti coordinates recognized with tolerance 10^(-digits/2) and denominator at most 4 n^2".into(),
        "the ray limit and the closed-form logarithm must agree before recognition".into(),
        "control: delta (2 + x(u)) is expected to lose torsion".into(),
    ];
    let mut report = ScanReport::new("ribet", prov);
    report.parameters.insert("n_max".into(), json!(n_max));
    report.parameters.insert("family".into(), json!(family.name()));
    report.parameters.insert("alpha".into(), json!(alpha.to_string_digits(20)));
    report.summary.insert(
        "orders".into(),
        json!(orders
            .iter()
            .map(|(n, ms)| (n.to_string(), ms.iter().map(|(m, c)| (m.to_string(), *c)).collect::<BTreeMap<_, _>>()))
            .collect::<BTreeMap<_, _>>()),
    );
    report.summary.insert("tested".into(), json!(tested));
    report.summary.insert("divides_n2_fraction".into(), frac(divides));
    report.summary.insert("betti_in_lattice_fraction".into(), frac(in_lattice));
    report.summary.insert("perturbed_broken_fraction".into(), frac(broken));
    report.summary.insert("recognition_failed".into(), json!(failed));
    report.summary.insert("degenerate".into(), json!(degenerate));
    report.rows = rows;
    Ok(report)
}

fn surface_certificate(family: CmFamily, digits: u32, m: u64, ribet: u64, generic: u64, tested: u64) -> Value {
    json!({"kind": "surface_m", "family": family.name(), "digits": digits, "m": m, "verdict": {"ribet_lifts": ribet, "generic_lifts": generic, "tested": tested}})
}

/// Lift counts at one `m`: `(ribet, generic, tested, degenerate)`.
fn surface_counts(outcomes: &[&Outcome]) -> (u64, u64, u64, u64) {
    let (mut r, mut g, mut t, mut d) = (0, 0, 0, 0);
    for o in outcomes {
        if is_degenerate(o) {
            d += 1;
            continue;
        }
        t += 1;
        if let Ok(c) = &o.check {
            r += c.divides_n2 as u64;
        }
        g += matches!(o.perturbed_m, Some(Some(_))) as u64;
    }
    (r, g, t, d)
}

pub fn surface_count(family: CmFamily, m_max: u64, digits: u32) -> Result<ScanReport> {
    if m_max < 2 {
        return Err(Error::InvalidArgument("m_max must be at least 2".into()));
    }
    let l = family.lattice(digits)?;
    let alpha = family.alpha(l.bits());
    let e = family.short_model()?;
    let items = work(2..=m_max);
    let outcomes: Vec<Outcome> = items.par_iter().map(|&(n, k1, k2)| run_point(&l, &alpha, k1, k2, n)).collect();

    let mut memo = BTreeMap::new();
    let mut rows = Vec::new();
    let mut hist: BTreeMap<String, Value> = BTreeMap::new();
    for m in 2..=m_max {
        let t = Instant::now();
        let at_m: Vec<&Outcome> = items.iter().zip(&outcomes).filter(|((n, _, _), _)| *n == m).map(|(_, o)| o).collect();
        let (ribet, generic, tested, degenerate) = surface_counts(&at_m);
        let count = at_m.len() as u64;
        let oracle = divpoly_count(&e, m, &mut memo);
        let frac = |k: u64| if tested == 0 { Value::Null } else { json!(k as f64 / tested as f64) };
        hist.insert(m.to_string(), json!({"ribet": ribet, "generic": generic, "tested": tested}));
        rows.push(json!({
            "m": m,
            "count": count,
            "divpoly_count": oracle,
            "jordan_totient": jordan2(m),
            "count_consistent": count == oracle && count == jordan2(m),
            "degenerate": degenerate,
            "tested": tested,
            "ribet_lifts": ribet,
            "generic_lifts": generic,
            "ribet_fraction": frac(ribet),
            "generic_fraction": frac(generic),
            "certificate": surface_certificate(family, digits, m, ribet, generic, tested),
            "elapsed_ms": elapsed_ms(t) + at_m.iter().map(|o| o.ms).sum::<u64>(),
        }));
    }
    let tested_rows: Vec<&Value> = rows.iter().filter(|r| r["tested"] != 0).collect();
    let all = |key: &str, v: f64| tested_rows.iter().all(|r| r[key].as_f64() == Some(v));
    let mut prov = Provenance::new(digits, 0);
    prov.inference = vec![
        "S_m is the set of points of exact order m on the CM curve, the section being the identity".into(),
        "a member lifts when the Betti coordinates of the section are recognized with denominator at most m^2".into(),
        "points with alpha u in the lattice give a split extension and are excluded as degenerate".into(),
        "this is an empirical count, not a counting theorem".into(),
    ];
    let mut report = ScanReport::new("surface_count", prov);
    report.parameters.insert("m_max".into(), json!(m_max));
    report.parameters.insert("family".into(), json!(family.name()));
    report.summary.insert("histogram".into(), json!(hist));
    report.summary.insert("ribet_all_lift".into(), json!(all("ribet_fraction", 1.0)));
    report.summary.insert("generic_none_lift".into(), json!(all("generic_fraction", 0.0)));
    report.summary.insert("counts_consistent".into(), json!(rows.iter().all(|r| r["count_consistent"] == true)));
    report.rows = rows;
    Ok(report)
}

pub(super) fn replay(kind: &str, cert: &Value) -> Result<Value> {
    let family: CmFamily = cert["family"].as_str().unwrap_or("").parse()?;
    let digits = cert["digits"].as_u64().ok_or_else(|| Error::Parse("certificate needs digits".into()))? as u32;
    let l = family.lattice(digits)?;
    let alpha = family.alpha(l.bits());
    if kind == "ribet" {
        let get = |k: &str| cert[k].as_i64().ok_or_else(|| Error::Parse(format!("certificate needs {k}")));
        let (n, k1, k2) = (get("n")? as u64, get("k1")?, get("k2")?);
        return Ok(ribet_certificate(family, digits, n, k1, k2, &run_point(&l, &alpha, k1, k2, n)));
    }
    let m = cert["m"].as_u64().ok_or_else(|| Error::Parse("certificate needs m".into()))?;
    let outcomes: Vec<Outcome> = primitive_pairs(m).into_iter().map(|(k1, k2)| run_point(&l, &alpha, k1, k2, m)).collect();
    let (r, g, t, _) = surface_counts(&outcomes.iter().collect::<Vec<_>>());
    Ok(surface_certificate(family, digits, m, r, g, t))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn totient_and_pairs_agree() {
        for m in 2..=12 {
            assert_eq!(primitive_pairs(m).len() as u64, jordan2(m), "m = {m}");
        }
        assert_eq!(jordan2(6), 24);
    }

    #[test]
    fn divpoly_counts_match_totient() {
        for fam in [CmFamily::Lemniscatic, CmFamily::J0] {
            let e = fam.short_model().unwrap();
            let mut memo = BTreeMap::new();
            for m in 2..=7 {
                assert_eq!(divpoly_count(&e, m, &mut memo), jordan2(m), "{} m = {m}", fam.name());
            }
        }
    }

    #[test]
    fn lemniscatic_order_three_scan() {
        let r = ribet_scan(3, CmFamily::Lemniscatic, 40).unwrap();
        assert_eq!(r.rows.len(), 8);
        assert_eq!(r.summary["divides_n2_fraction"], json!(1.0));
        assert_eq!(r.summary["betti_in_lattice_fraction"], json!(1.0));
        assert_eq!(r.summary["perturbed_broken_fraction"], json!(1.0));
        assert!(r.replay_all().is_empty());
    }

    #[test]
    fn j0_kernel_points_are_degenerate() {
        // 2 sqrt(-3) kills the two 3-torsion points in the kernel of sqrt(-3)
        let r = ribet_scan(3, CmFamily::J0, 40).unwrap();
        assert_eq!(r.summary["degenerate"], 2);
        assert_eq!(r.summary["divides_n2_fraction"], json!(1.0));
    }

    #[test]
    fn surface_small() {
        let r = surface_count(CmFamily::Lemniscatic, 3, 40).unwrap();
        assert_eq!(r.rows[0]["m"], 2);
        assert_eq!(r.rows[0]["degenerate"], 3);
        assert!(r.rows[0]["ribet_fraction"].is_null());
        assert_eq!(r.rows[1]["ribet_fraction"], json!(1.0));
        assert_eq!(r.rows[1]["generic_fraction"], json!(0.0));
        assert_eq!(r.summary["counts_consistent"], true);
        assert!(r.replay_all().is_empty());
    }

    #[test]
    fn family_names_parse() {
        assert_eq!("j0".parse::<CmFamily>().unwrap(), CmFamily::J0);
        assert!("x".parse::<CmFamily>().is_err());
    }
}
