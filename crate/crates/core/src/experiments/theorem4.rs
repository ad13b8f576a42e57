//! Search for `Y_k(rho) = 0` over torsion parameters.
//!
//! Case i takes `rho = 0` and is exact. Case ii takes `rho` from the
//! half-section construction and is numeric, over every root selector.

use std::collections::BTreeMap;
use std::str::FromStr;
use std::time::Instant;

use rayon::prelude::*;
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use super::{elapsed_ms, error_json, lambda_desc, lambda_from_desc, rational_desc, Provenance, ScanReport};
use crate::apfloat::{digits_to_bits, Complex};
use crate::elliptic::rho::{E3_CHOICES, M_ROOTS};
use crate::elliptic::{family_quartic, rho_case_ii, rho_case_ii_numeric, torsion_parameters, TorsionParam};
use crate::error::{Error, Result};
use crate::exactalg::parse::format_nf_elem;
use crate::exactalg::rational::rat;
use crate::exactalg::{complex_roots, Elem, FieldPoly};
use crate::pell::{pell_fundamental_with, pell_square_factor_search, CfOptions, PellSolution};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Case {
    I,
    II,
}

impl FromStr for Case {
    type Err = Error;
    fn from_str(s: &str) -> Result<Case> {
        match s {
            "i" | "1" => Ok(Case::I),
            "ii" | "2" => Ok(Case::II),
            _ => Err(Error::InvalidArgument(format!("case must be i or ii, got '{s}'"))),
        }
    }
}

impl Case {
    fn name(self) -> &'static str {
        match self {
            Case::I => "i",
            Case::II => "ii",
        }
    }
}

fn digest(values: &[Elem]) -> String {
    let mut h = Sha256::new();
    for v in values {
        h.update(format_nf_elem(v).as_bytes());
        h.update(b"\n");
    }
    format!("{:x}", h.finalize())
}

/// Exact search at `rho = 0`; the certificate stores a digest of every
/// `Y_k(0)` computed.
fn exact_certificate(desc: &Value, lam: &Elem, k_max: usize, opts: &CfOptions) -> Result<Value> {
    let s = pell_square_factor_search(&lam.field().zero(), &family_quartic(lam), k_max, opts)?;
    Ok(json!({
        "kind": "square_factor_exact",
        "lambda": desc,
        "rho": "0",
        "k_max": k_max,
        "max_steps": opts.max_steps,
        "y_count": s.y_values.len(),
        "y_digest": digest(&s.y_values),
        "verdict": s.hit,
    }))
}

/// Complex value of an exact element of `Q(t)` at `t = z`.
fn at_embedding(e: &Elem, z: &Complex) -> Complex {
    let c = e.rational_coords().expect("absolute number field");
    FieldPoly::from_rationals(&c).eval_complex(z)
}

fn poly_at(p: &FieldPoly, x: &Complex, z: &Complex) -> Complex {
    p.coeffs().iter().rev().fold(Complex::zero(x.prec()), |acc, c| &(&acc * x) + &at_embedding(c, z))
}

/// `(X_k, Y_k)` recurrence at `rho` in floating point; a hit is
/// `|Y_k sqrt Q(rho)| < tol |X_k|`.
fn numeric_hit(sol: &PellSolution, q: &FieldPoly, z: &Complex, rho: &Complex, k_max: usize, tol_log2: f64) -> Option<usize> {
    let x1 = poly_at(&sol.x, rho, z);
    let y1 = poly_at(&sol.y, rho, z);
    let qr = poly_at(q, rho, z);
    let sq = qr.sqrt();
    let (mut xk, mut yk) = (x1.clone(), y1.clone());
    for k in 1..=k_max {
        if k > 1 {
            let xs = &(&xk * &x1) + &(&qr * &(&yk * &y1));
            yk = &(&xk * &y1) + &(&yk * &x1);
            xk = xs;
        }
        if (&yk * &sq).log2_abs() < xk.log2_abs() + tol_log2 {
            return Some(k);
        }
    }
    None
}

fn embedding(minpoly_desc: &Value, lam: &Elem, digits: u32) -> Result<Complex> {
    let bits = digits_to_bits(digits) + 64;
    if let Some(q) = lam.as_rational() {
        return Ok(Complex::from_rational(&q, bits));
    }
    let idx = minpoly_desc["root_index"].as_u64().unwrap_or(0) as usize;
    let m = lam.field().modulus().expect("number field");
    let rs = m.iter().map(|c| c.as_rational().expect("absolute field")).collect::<Vec<_>>();
    Ok(complex_roots(&FieldPoly::from_rationals(&rs), digits + 20)?[idx].with_prec(bits))
}

/// Every selector pair at one embedding; the fundamental solution is exact.
fn numeric_certificate(desc: &Value, lam: &Elem, sol: &PellSolution, k_max: usize, digits: u32) -> Result<Value> {
    let z = embedding(desc, lam, digits)?;
    let q = family_quartic(lam);
    let tol_log2 = -(digits_to_bits(digits) as f64) / 2.0;
    let mut selectors = Vec::new();
    let mut hits = Vec::new();
    for m in 0..M_ROOTS {
        for e3 in 0..E3_CHOICES {
            match rho_case_ii_numeric(&z, m, e3, digits) {
                Ok(r) => {
                    let hit = numeric_hit(sol, &q, &z, &r.rho_value, k_max, tol_log2);
                    if let Some(k) = hit {
                        hits.push(json!([m, e3, k]));
                    }
                    selectors.push(json!({"m": m, "e3": e3, "rho": r.rho, "q_order": r.q_order, "hit": hit}));
                }
                Err(e) => selectors.push(json!({"m": m, "e3": e3, "error": error_json(&e)})),
            }
        }
    }
    Ok(json!({
        "kind": "square_factor_numeric",
        "lambda": desc,
        "k_max": k_max,
        "digits": digits,
        "tolerance_log2": tol_log2,
        "selectors": selectors,
        "verdict": hits,
    }))
}

fn rho_control() -> Result<Value> {
    let lam = Elem::Q(rat(1, 4));
    let mut orders = Vec::new();
    for m in 0..2 {
        let r = rho_case_ii(&lam, m, 0)?;
        orders.push(json!({"m": m, "e3": 0, "rho": format_nf_elem(&r.rho), "q_order": r.q_order}));
    }
    let pass = orders.iter().all(|o| o["q_order"] == 3);
    Ok(json!({"kind": "rho_q_order", "lambda": rational_desc(&rat(1, 4)), "orders": orders, "verdict": pass}))
}

struct Group {
    n: usize,
    params: Vec<TorsionParam>,
}

fn groups(n_max: usize) -> (Vec<Group>, Vec<(usize, Error)>) {
    let mut out: Vec<Group> = Vec::new();
    let mut failed = Vec::new();
    for n in 2..=n_max {
        match torsion_parameters(n) {
            Ok(ps) => {
                for p in ps {
                    match out.iter_mut().find(|g| g.n == n && g.params[0].minpoly == p.minpoly) {
                        Some(g) => g.params.push(p),
                        None => out.push(Group { n, params: vec![p] }),
                    }
                }
            }
            Err(e) => failed.push((n, e)),
        }
    }
    (out, failed)
}

fn row(case: Case, n: usize, desc: Value, cert: Result<Value>, shared: bool, ms: u64) -> Value {
    let mut r = json!({"case": case.name(), "order": n, "lambda": desc, "shared_with_conjugates": shared, "elapsed_ms": ms});
    match cert {
        Ok(c) => {
            r["hit"] = match case {
                Case::I => c["verdict"].clone(),
                Case::II => json!(c["verdict"].as_array().is_some_and(|h| !h.is_empty())),
            };
            r["certificate"] = c;
        }
        Err(e) => r["error"] = error_json(&e),
    }
    r
}

/// Conjugate rows of case i share one exact computation: `Y_k(0)` is an
/// element of `Q(lambda)` and its vanishing does not depend on the
/// embedding.
fn group_rows(case: Case, g: &Group, k_max: usize, digits: u32, opts: &CfOptions) -> Vec<Value> {
    let t = Instant::now();
    let descs: Vec<Value> = g.params.iter().map(lambda_desc).collect();
    match case {
        Case::I => {
            let first = g.params[0].value().and_then(|lam| exact_certificate(&descs[0], &lam, k_max, opts));
            let ms = elapsed_ms(t);
            descs
                .into_iter()
                .map(|d| {
                    let c = first.clone().map(|mut c| {
                        c["lambda"] = d.clone();
                        c
                    });
                    row(case, g.n, d, c, g.params.len() > 1, ms)
                })
                .collect()
        }
        Case::II => {
            let lam = g.params[0].value();
            let sol = lam.clone().and_then(|l| pell_fundamental_with(&family_quartic(&l), opts)?.ok_or(Error::PellUnsolvable(opts.max_steps)));
            descs
                .into_iter()
                .map(|d| {
                    let t = Instant::now();
                    let c = match (&lam, &sol) {
                        (Ok(l), Ok(s)) => numeric_certificate(&d, l, s, k_max, digits).map(|mut c| {
                            c["max_steps"] = json!(opts.max_steps);
                            c
                        }),
                        (Err(e), _) | (_, Err(e)) => Err(e.clone()),
                    };
                    row(case, g.n, d, c, g.params.len() > 1, elapsed_ms(t))
                })
                .collect()
        }
    }
}

pub fn theorem4_scan(case: Case, n_max: usize, k_max: usize, digits: u32, opts: &CfOptions) -> Result<ScanReport> {
    if n_max < 3 || k_max < 1 {
        return Err(Error::InvalidArgument("need n_max >= 3 and k_max >= 1".into()));
    }
    if digits < 15 {
        return Err(Error::InvalidArgument("precision must be at least 15 digits".into()));
    }
    let (gs, failed) = groups(n_max);
    let mut rows: Vec<Value> = gs.par_iter().flat_map_iter(|g| group_rows(case, g, k_max, digits, opts)).collect();
    rows.extend(failed.iter().map(|(n, e)| json!({"case": case.name(), "order": n, "error": error_json(e)})));

    let hits: Vec<Value> = rows.iter().filter(|r| !r["hit"].is_null() && r["hit"] != false).map(|r| r["lambda"].clone()).collect();
    let mut per_order: BTreeMap<String, u64> = BTreeMap::new();
    for r in &rows {
        *per_order.entry(r["order"].to_string()).or_default() += 1;
    }
    let errors: Vec<Value> = rows.iter().filter(|r| !r["error"].is_null()).map(|r| json!({"lambda": r["lambda"], "error": r["error"]["error"]})).collect();

    let mut prov = Provenance::new(if case == Case::II { digits } else { 0 }, 0)
        .budget("k_max", k_max as u64)
        .budget("cf_max_steps", opts.max_steps as u64)
        .budget("coeff_bit_cap", opts.bit_cap);
    prov.inference = vec![
        "a hit at k means Y_k(rho) = 0, so X_k^2 - (x - rho)^2 Q (Y_k/(x - rho))^2 = 1 is a solution".into(),
        "the hit set covers torsion parameters of order at most n_max and k at most k_max only".into(),
        "a hit set that is stable under doubling k_max is evidence for finiteness, not a proof".into(),
    ];
    if case == Case::II {
        prov.inference.push("case ii hits are numeric: relative size of Y_k sqrt(Q(rho)) below the stated tolerance".into());
    }
    let mut report = ScanReport::new(&format!("theorem4_{}", case.name()), prov);
    report.parameters.insert("case".into(), json!(case.name()));
    report.parameters.insert("n_max".into(), json!(n_max));
    report.parameters.insert("k_max".into(), json!(k_max));
    report.summary.insert("hit_count".into(), json!(hits.len()));
    report.summary.insert("hits".into(), json!(hits));
    report.summary.insert("rows_per_order".into(), json!(per_order));
    report.summary.insert("errors".into(), json!(errors));
    report.summary.insert("status".into(), json!("evidence, not proof"));
    if case == Case::II {
        let t = Instant::now();
        let ctl = rho_control();
        report.summary.insert("control_q_order_3".into(), json!(ctl.as_ref().map(|c| c["verdict"] == true).unwrap_or(false)));
        rows.push(match ctl {
            Ok(c) => json!({"case": "ii", "kind": "control", "lambda": c["lambda"], "hit": Value::Null, "certificate": c, "elapsed_ms": elapsed_ms(t)}),
            Err(e) => json!({"case": "ii", "kind": "control", "error": error_json(&e)}),
        });
    }
    report.rows = rows;
    Ok(report)
}

pub(super) fn replay(kind: &str, cert: &Value) -> Result<Value> {
    if kind == "rho_q_order" {
        return rho_control();
    }
    let lam = lambda_from_desc(&cert["lambda"])?;
    let k_max = cert["k_max"].as_u64().ok_or_else(|| Error::Parse("certificate needs k_max".into()))? as usize;
    let opts = CfOptions { max_steps: cert["max_steps"].as_u64().unwrap_or(crate::pell::DEFAULT_MAX_STEPS as u64) as usize, ..CfOptions::default() };
    if kind == "square_factor_exact" {
        return exact_certificate(&cert["lambda"], &lam, k_max, &opts);
    }
    let digits = cert["digits"].as_u64().ok_or_else(|| Error::Parse("certificate needs digits".into()))? as u32;
    let sol = pell_fundamental_with(&family_quartic(&lam), &opts)?.ok_or(Error::PellUnsolvable(opts.max_steps))?;
    numeric_certificate(&cert["lambda"], &lam, &sol, k_max, digits)
}
