use std::process::Command;

use serde_json::Value;
use torsionlab_cli::run_with;

fn run(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("torsionlab").chain(args.iter().copied());
    let code = run_with(argv, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

fn json(args: &[&str]) -> (i32, Value) {
    let (code, out, _) = run(args);
    (code, serde_json::from_str(&out).unwrap_or_else(|e| panic!("not JSON ({e}): {out}")))
}

#[test]
fn pell_solve_quadratic() {
    let (code, v) = json(&["pell", "solve", "--D", "x^2+1"]);
    assert_eq!(code, 0);
    assert_eq!(v["X"], "2*x^2+1");
    assert_eq!(v["Y"], "2*x");
    assert_eq!(v["provenance"]["precision_digits"], 50);
}

#[test]
fn odd_degree_is_a_domain_error() {
    let (code, v) = json(&["pell", "solve", "--D", "x^3+1"]);
    assert_eq!(code, 1);
    assert_eq!(v["error"], "OddDegree");
    assert_eq!(v["context"]["degree"], 3);
    assert!(v["message"].is_string());
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(run(&["frobnicate"]).0, 2);
    assert_eq!(run(&["pell", "solve"]).0, 2);
    assert_eq!(run(&["--precision", "5", "torsion", "params", "--order", "3"]).0, 2);
}

#[test]
fn torsion_params_of_order_three() {
    let (code, v) = json(&["torsion", "params", "--order", "3"]);
    assert_eq!(code, 0);
    assert_eq!(v["count"], 1);
    assert_eq!(v["parameters"][0]["value"], "0");
}

#[test]
fn pell_over_a_number_field_and_squared() {
    let (code, v) = json(&["pell", "solve", "--D", "x^2+t", "--field", "t^2-2", "--root", "1"]);
    assert_eq!(code, 0, "{v}");
    assert_eq!(v["solvable"], true);
    let (code, v) = json(&["pell", "squared", "--D", "x^2+1", "--rho", "0", "--k-max", "3"]);
    assert_eq!(code, 0);
    assert_eq!(v["hit"], 1);
    let (code, v) = json(&["pell", "power", "--D", "x^2+1", "--n", "3"]);
    assert_eq!(code, 0);
    assert_eq!(v["verified"], true);
}

#[test]
fn lattice_and_extension_commands() {
    let (code, v) = json(&["--precision", "20", "lattice", "periods", "--g2", "4", "--g3", "0"]);
    assert_eq!(code, 0);
    assert!(v["omega1"].as_str().unwrap().starts_with("2.6220575542"));
    let (code, v) = json(&["--precision", "20", "lattice", "eval", "--g2", "4", "--g3", "0", "--z", "0"]);
    assert_eq!(code, 1);
    assert_eq!(v["error"], "PoleProximity");
    let base = ["--precision", "20", "gext", "betti", "--g2", "4", "--g3", "0", "--v", "0.3+0.2*i", "--delta", "1.5", "--z", "0.4-0.1*i"];
    let (code, v) = json(&base);
    assert_eq!(code, 0, "{v}");
    assert!(v["betti"]["b1"].is_string());
    let (code, _) = json(&["--precision", "20", "gext", "make", "--g2", "4", "--g3", "0", "--v", "0"]);
    assert_eq!(code, 1);
}

#[test]
fn ribet_check_order_three() {
    let (code, v) = json(&["ribet", "check", "--n", "3", "--k1", "1", "--k2", "0"]);
    assert_eq!(code, 0);
    assert_eq!(v["m"], 9);
    assert_eq!(v["divides_n2"], true);
}

#[test]
fn config_file_is_overridden_by_flags() {
    let d = tempfile::tempdir().unwrap();
    let cfg = d.path().join("run.cfg");
    std::fs::write(&cfg, "precision_digits = 30\nseed = 7\n").unwrap();
    let c = cfg.to_str().unwrap();
    let (_, v) = json(&["--config", c, "torsion", "params", "--order", "3"]);
    assert_eq!(v["provenance"]["precision_digits"], 30);
    assert_eq!(v["provenance"]["seed"], 7);
    let (_, v) = json(&["--config", c, "--seed", "9", "torsion", "params", "--order", "3"]);
    assert_eq!(v["provenance"]["seed"], 9);
    std::fs::write(&cfg, "colour = blue\n").unwrap();
    assert_eq!(run(&["--config", c, "torsion", "params", "--order", "3"]).0, 2);
}

#[test]
fn scans_are_cached_and_replayable() {
    let d = tempfile::tempdir().unwrap();
    let dir = d.path().to_str().unwrap();
    let args = ["--cache-dir", dir, "--jobs", "1", "scan", "pell-torsion", "--n-max", "3", "--cf-budget", "32"];
    let (code, first) = json(&args);
    assert_eq!(code, 0);
    assert_eq!(first["schema_version"], 1);
    assert_eq!(first["summary"]["violations"], serde_json::json!([]));
    let entries: Vec<_> = std::fs::read_dir(d.path().join("pell_torsion")).unwrap().collect();
    assert_eq!(entries.len(), 1);
    let (_, second) = json(&args);
    let strip = |mut v: Value| {
        v.as_object_mut().unwrap().remove("provenance");
        v
    };
    assert_eq!(strip(first.clone()), strip(second));

    let report = d.path().join("report.json");
    std::fs::write(&report, first.to_string()).unwrap();
    let (code, v) = json(&["replay", report.to_str().unwrap()]);
    assert_eq!(code, 0, "{v}");
    assert_eq!(v["replayed"], first["rows"].as_array().unwrap().len());

    let mut bad = first["rows"][0]["certificate"].clone();
    bad["verdict"] = "inconclusive".into();
    let (code, v) = json(&["replay", &bad.to_string()]);
    assert_eq!(code, 1);
    assert_eq!(v["error"], "InternalCheckFailed");
}

#[test]
fn csv_output() {
    let (code, out, _) = run(&["scan", "theorem4", "--case", "i", "--n-max", "3", "--k-max", "2", "--format", "csv"]);
    assert_eq!(code, 0);
    assert!(out.lines().next().unwrap().contains("lambda"));
}

#[test]
fn binary_exit_codes() {
    let bin = env!("CARGO_BIN_EXE_torsionlab");
    let ok = Command::new(bin).args(["pell", "solve", "--D", "x^2+1"]).output().unwrap();
    assert_eq!(ok.status.code(), Some(0));
    let v: Value = serde_json::from_slice(&ok.stdout).unwrap();
    assert_eq!(v["X"], "2*x^2+1");
    assert_eq!(Command::new(bin).args(["pell", "solve", "--D", "x^3+1"]).output().unwrap().status.code(), Some(1));
    assert_eq!(Command::new(bin).arg("nope").output().unwrap().status.code(), Some(2));
}
