//! Reproducible scans over torsion parameters with replayable certificates.
//!
//! Every row carries a `certificate` object. [`replay`] recomputes the
//! verdict from that object alone.

mod cm;
mod pell_torsion;
mod theorem4;

use std::collections::BTreeMap;
use std::time::Instant;

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::elliptic::TorsionParam;
use crate::error::{Error, Result};
use crate::exactalg::rational::format_rational;
use crate::exactalg::{parse_poly_in, Elem, Field, FieldPoly, Rational};

pub use cm::{ribet_scan, surface_count, CmFamily};
pub use pell_torsion::{pell_torsion_scan, EXACT_PREFIX};
pub use theorem4::{theorem4_scan, Case};

pub const SCHEMA_VERSION: u32 = 1;
pub const DEFAULT_SEED: u64 = 0x5EED;
/// Digits for scans and for Ribet verification.
pub const SCAN_DIGITS: u32 = 50;
pub const RIBET_DIGITS: u32 = 80;

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct Provenance {
    pub precision_digits: u32,
    pub budgets: BTreeMap<String, u64>,
    pub seed: u64,
    pub code_version: String,
    /// How aggregated verdicts follow from row verdicts.
    pub inference: Vec<String>,
}

impl Provenance {
    pub fn new(precision_digits: u32, seed: u64) -> Provenance {
        Provenance { precision_digits, budgets: BTreeMap::new(), seed, code_version: env!("CARGO_PKG_VERSION").to_string(), inference: Vec::new() }
    }

    pub fn budget(mut self, name: &str, value: u64) -> Provenance {
        self.budgets.insert(name.to_string(), value);
        self
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ScanReport {
    pub schema_version: u32,
    pub experiment_id: String,
    pub parameters: BTreeMap<String, Value>,
    pub rows: Vec<Value>,
    pub summary: BTreeMap<String, Value>,
    pub provenance: Provenance,
}

impl ScanReport {
    pub fn new(experiment_id: &str, provenance: Provenance) -> ScanReport {
        ScanReport {
            schema_version: SCHEMA_VERSION,
            experiment_id: experiment_id.to_string(),
            parameters: BTreeMap::new(),
            rows: Vec::new(),
            summary: BTreeMap::new(),
            provenance,
        }
    }

    pub fn to_json(&self) -> Value {
        serde_json::to_value(self).expect("report serializes")
    }

    /// One line per row; nested values are written as JSON text.
    pub fn to_csv(&self) -> String {
        let mut cols: Vec<String> = Vec::new();
        for r in &self.rows {
            if let Value::Object(m) = r {
                for k in m.keys() {
                    if !cols.contains(k) {
                        cols.push(k.clone());
                    }
                }
            }
        }
        cols.sort();
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(&cols).expect("in-memory write");
        for r in &self.rows {
            let rec: Vec<String> = cols
                .iter()
                .map(|c| match r.get(c) {
                    None | Some(Value::Null) => String::new(),
                    Some(Value::String(s)) => s.clone(),
                    Some(v) => v.to_string(),
                })
                .collect();
            w.write_record(&rec).expect("in-memory write");
        }
        String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf8")
    }

    /// Rows whose certificates do not replay to the stored verdict.
    pub fn replay_all(&self) -> Vec<(usize, Result<Replay>)> {
        self.rows
            .iter()
            .enumerate()
            .filter_map(|(i, r)| r.get("certificate").filter(|c| !c.is_null()).map(|c| (i, replay(c))))
            .filter(|(_, r)| !matches!(r, Ok(Replay { matches: true, .. })))
            .collect()
    }
}

/// `{minpoly, root_index, value, irreducible_certified}` for a parameter.
pub fn lambda_desc(p: &TorsionParam) -> Value {
    json!({
        "minpoly": p.minpoly_text(),
        "root_index": p.root_index,
        "value": if p.is_rational() { Some(format_rational(&(-&p.minpoly[0] / &p.minpoly[1]))) } else { None },
        "irreducible_certified": p.irreducible,
        "embedding": p.embedding.to_string_digits(30),
    })
}

pub fn rational_desc(q: &Rational) -> Value {
    json!({
        "minpoly": FieldPoly::from_rationals(&[-q, Rational::from_integer(1.into())]).to_string_var("t"),
        "root_index": 0,
        "value": format_rational(q),
        "irreducible_certified": true,
    })
}

/// Rebuilds the exact parameter from a descriptor.
pub fn lambda_from_desc(v: &Value) -> Result<Elem> {
    let text = v["minpoly"].as_str().ok_or_else(|| Error::Parse("lambda descriptor needs minpoly".into()))?;
    let idx = v["root_index"].as_u64().unwrap_or(0) as usize;
    let m = parse_poly_in(text, &Field::Rational, "t", &[])?;
    let q = m.rational_coeffs().ok_or_else(|| Error::Parse("minpoly must be rational".into()))?;
    if q.len() == 2 {
        return Ok(Elem::Q(-&q[0] / &q[1]));
    }
    let certified = v["irreducible_certified"].as_bool().unwrap_or(false);
    Ok(Field::number_field_from_factor(&q, idx, "t", certified)?.gen())
}

pub(crate) fn elapsed_ms(t: Instant) -> u64 {
    t.elapsed().as_millis() as u64
}

pub(crate) fn error_json(e: &Error) -> Value {
    json!({ "error": e.code(), "message": e.to_string() })
}

/// Outcome of re-running a certificate.
#[derive(Clone, Debug, Serialize)]
pub struct Replay {
    pub kind: String,
    pub matches: bool,
    pub recomputed: Value,
}

pub fn replay(cert: &Value) -> Result<Replay> {
    let kind = cert["kind"].as_str().ok_or_else(|| Error::Parse("certificate needs a kind".into()))?;
    let recomputed = match kind {
        "pell_cf" | "pell_control" => pell_torsion::replay(kind, cert)?,
        "square_factor_exact" | "square_factor_numeric" | "rho_q_order" => theorem4::replay(kind, cert)?,
        "ribet" | "surface_m" => cm::replay(kind, cert)?,
        other => return Err(Error::Parse(format!("unknown certificate kind '{other}'"))),
    };
    let matches = cert.get("verdict") == recomputed.get("verdict");
    Ok(Replay { kind: kind.to_string(), matches, recomputed })
}

/// Runs `f` on a pool with `jobs` workers (all cores when `None`).
pub fn with_jobs<T: Send>(jobs: Option<usize>, f: impl FnOnce() -> T + Send) -> T {
    match jobs {
        None => f(),
        Some(n) => rayon::ThreadPoolBuilder::new().num_threads(n.max(1)).build().map(|p| p.install(f)).unwrap_or_else(|_| panic!("thread pool")),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::elliptic::torsion_parameters;

    #[test]
    fn descriptors_round_trip() {
        for p in torsion_parameters(4).unwrap() {
            let back = lambda_from_desc(&lambda_desc(&p)).unwrap();
            assert!(back.to_complex(128).dist_log2(&p.embedding) < -100.0);
        }
        let q = crate::exactalg::rational::rat(1, 4);
        assert_eq!(lambda_from_desc(&rational_desc(&q)).unwrap().as_rational().unwrap(), q);
    }

    #[test]
    fn csv_flattens_nested_values() {
        let mut r = ScanReport::new("t", Provenance::new(50, DEFAULT_SEED));
        r.rows.push(json!({"b": 1, "a": {"x": 2}}));
        r.rows.push(json!({"a": "s", "c": null}));
        let text = r.to_csv();
        let mut lines = text.lines();
        assert_eq!(lines.next(), Some("a,b,c"));
        assert_eq!(lines.next(), Some("\"{\"\"x\"\":2}\",1,"));
        assert_eq!(lines.next(), Some("s,,"));
    }

    #[test]
    fn unknown_certificates_are_rejected() {
        assert!(replay(&json!({"kind": "nope"})).is_err());
        assert!(replay(&json!({})).is_err());
    }
}
