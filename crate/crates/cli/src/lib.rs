//! The `torsionlab` command line.
//!
//! Output is one JSON document on standard output with sorted keys. Exit
//! code 0 on success, 1 on domain errors (an `{error, message, context}`
//! record), 2 on usage errors.

pub mod cache;
pub mod config;

use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use torsionlab::apfloat::{digits_to_bits, Complex};
use torsionlab::elliptic::{family_curve, family_point, torsion_order, torsion_parameters, torsion_parameters_json, NumPoint};
use torsionlab::exactalg::parse::format_nf_elem;
use torsionlab::exactalg::{parse_nf_elem, parse_number_field, parse_poly, parse_poly_in, FieldPoly};
use torsionlab::experiments::{self, pell_torsion_scan, ribet_scan, surface_count, theorem4_scan, Case, CmFamily, ScanReport};
use torsionlab::lattice::{elog, periods_cached, wp, wsigma, wzeta, Lattice, GUARD_BITS};
use torsionlab::pell::{cf_expand_with, pell_fundamental_with, pell_power, pell_square_factor_search, PellSolution};
use torsionlab::semiabelian::{betti_g, extension_make, g_log, g_torsion_test, ribet_delta, ribet_order_check, GExtension, GPoint};
use torsionlab::{Error, Result};

use config::Config;

#[derive(Parser, Debug)]
#[command(name = "torsionlab", version, about = "Polynomial Pell equations, elliptic torsion and semi-abelian logarithms")]
pub struct Cli {
    /// Flat key = value configuration file.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Decimal digits for analytic work.
    #[arg(long, global = true)]
    precision: Option<u32>,
    /// Step budget for continued fraction expansions.
    #[arg(long, global = true)]
    cf_max_steps: Option<usize>,
    /// Coefficient height cap, in bits, for exact expansions.
    #[arg(long, global = true)]
    coeff_bit_cap: Option<u64>,
    /// Directory for cached scan reports.
    #[arg(long, global = true)]
    cache_dir: Option<PathBuf>,
    /// Seed for randomized choices (control parameters).
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Worker threads for scans (default: logical cores).
    #[arg(long, global = true)]
    jobs: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Polynomial Pell equations via continued fractions.
    #[command(subcommand)]
    Pell(PellCmd),
    /// Torsion of the section on the quartic family.
    #[command(subcommand)]
    Torsion(TorsionCmd),
    /// Period lattices and Weierstrass functions.
    #[command(subcommand)]
    Lattice(LatticeCmd),
    /// Extensions of an elliptic curve by the multiplicative group.
    #[command(subcommand)]
    Gext(GextCmd),
    /// Ribet sections on CM curves.
    #[command(subcommand)]
    Ribet(RibetCmd),
    /// Batch experiments with JSON or CSV reports.
    #[command(subcommand)]
    Scan(ScanCmd),
    /// Re-checks a certificate, a report row, or every row of a report.
    Replay {
        /// A JSON file, or inline JSON.
        certificate: String,
    },
}

#[derive(Args, Debug)]
struct PolyArgs {
    /// Polynomial in x, e.g. "x^4+x+1/4".
    #[arg(long = "D", alias = "d")]
    d: String,
    /// Minimal polynomial of a number field for the coefficients, e.g. "t^2-2".
    #[arg(long)]
    field: Option<String>,
    /// Root of the minimal polynomial used as the embedding.
    #[arg(long, default_value_t = 0)]
    root: usize,
}

#[derive(Subcommand, Debug)]
enum PellCmd {
    /// Fundamental solution of X^2 - D Y^2 = 1.
    Solve(PolyArgs),
    /// Least k with Y_k(rho) = 0, i.e. a solution with D replaced by (x - rho)^2 D.
    Squared {
        #[command(flatten)]
        poly: PolyArgs,
        #[arg(long)]
        rho: String,
        #[arg(long, default_value_t = 20)]
        k_max: usize,
    },
    /// The n-th power of the fundamental solution.
    Power {
        #[command(flatten)]
        poly: PolyArgs,
        #[arg(long)]
        n: u64,
    },
}

#[derive(Subcommand, Debug)]
enum TorsionCmd {
    /// Parameters at which the section has exact order n.
    Params {
        #[arg(long)]
        order: usize,
    },
    /// Order of the section at one parameter ("minpoly : element" or a rational).
    Order {
        #[arg(long, allow_hyphen_values = true)]
        lambda: String,
        #[arg(long, default_value_t = 0)]
        root: usize,
        #[arg(long, default_value_t = 30)]
        n_max: u64,
    },
}

#[derive(Args, Debug, Clone)]
struct CurveArgs {
    #[arg(long, allow_hyphen_values = true)]
    g2: String,
    #[arg(long, allow_hyphen_values = true)]
    g3: String,
}

#[derive(Subcommand, Debug)]
enum LatticeCmd {
    /// Reduced periods and quasi-periods for invariants g2, g3.
    Periods(CurveArgs),
    /// wp, wp', zeta and sigma at z.
    Eval {
        #[command(flatten)]
        curve: CurveArgs,
        #[arg(long, allow_hyphen_values = true)]
        z: String,
    },
}

#[derive(Args, Debug)]
struct PointArgs {
    #[command(flatten)]
    curve: CurveArgs,
    /// Extension parameter v.
    #[arg(long, allow_hyphen_values = true)]
    v: String,
    #[arg(long, allow_hyphen_values = true)]
    /// Coordinate on the multiplicative group.
    delta: String,
    /// Logarithm of the point of E; alternative to --x/--y.
    #[arg(long, allow_hyphen_values = true)]
    z: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    x: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    y: Option<String>,
}

#[derive(Subcommand, Debug)]
enum GextCmd {
    /// Quasi-periods of the extension with parameter v.
    Make {
        #[command(flatten)]
        curve: CurveArgs,
        #[arg(long, allow_hyphen_values = true)]
        v: String,
    },
    /// Logarithm of the point (z, delta).
    Log(PointArgs),
    /// Betti coordinates of the logarithm.
    Betti(PointArgs),
    /// Order of the point, searched up to m-max.
    Torsion {
        #[command(flatten)]
        point: PointArgs,
        #[arg(long, default_value_t = 100)]
        m_max: u64,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum FamilyArg {
    Lemniscatic,
    J0,
}

impl From<FamilyArg> for CmFamily {
    fn from(f: FamilyArg) -> CmFamily {
        match f {
            FamilyArg::Lemniscatic => CmFamily::Lemniscatic,
            FamilyArg::J0 => CmFamily::J0,
        }
    }
}

#[derive(Subcommand, Debug)]
enum RibetCmd {
    /// The Ribet section and its logarithm at u.
    Delta {
        #[arg(long, value_enum, default_value = "lemniscatic")]
        family: FamilyArg,
        #[arg(long, allow_hyphen_values = true)]
        u: String,
    },
    /// Order of the section at u = (k1 omega1 + k2 omega2) / n.
    Check {
        #[arg(long, value_enum, default_value = "lemniscatic")]
        family: FamilyArg,
        #[arg(long)]
        n: u64,
        #[arg(long)]
        k1: i64,
        #[arg(long)]
        k2: i64,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum, PartialEq)]
enum Format {
    Json,
    Csv,
}

#[derive(Args, Debug)]
struct ScanOpts {
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
    /// Recompute even if a cached report exists.
    #[arg(long)]
    no_cache: bool,
}

#[derive(Subcommand, Debug)]
enum ScanCmd {
    /// Torsion parameters against periodicity of the continued fraction.
    PellTorsion {
        #[arg(long, default_value_t = 6)]
        n_max: usize,
        /// Defaults to cf_max_steps.
        #[arg(long)]
        cf_budget: Option<usize>,
        #[command(flatten)]
        opts: ScanOpts,
    },
    /// Square-factor solutions (x - rho)^2 D at torsion parameters.
    Theorem4 {
        #[arg(long, value_parser = ["i", "ii"])]
        case: String,
        #[arg(long, default_value_t = 6)]
        n_max: usize,
        #[arg(long, default_value_t = 20)]
        k_max: usize,
        #[command(flatten)]
        opts: ScanOpts,
    },
    /// Orders and Betti coordinates of Ribet sections at n-torsion.
    Ribet {
        #[arg(long, default_value_t = 6)]
        n_max: u64,
        #[arg(long, value_enum, default_value = "lemniscatic")]
        family: FamilyArg,
        #[command(flatten)]
        opts: ScanOpts,
    },
    /// Torsion points of each order and which sections lift.
    Surface {
        #[arg(long, value_enum, default_value = "lemniscatic")]
        family: FamilyArg,
        #[arg(long, default_value_t = 8)]
        m_max: u64,
        #[command(flatten)]
        opts: ScanOpts,
    },
}

/// What a command produced: a JSON record or preformatted text.
enum Output {
    Json(Value),
    Text(String),
}

struct Ctx {
    cfg: Config,
    jobs: Option<usize>,
}

impl Ctx {
    fn digits(&self) -> u32 {
        self.cfg.precision_digits
    }

    fn bits(&self) -> u32 {
        digits_to_bits(self.digits()) + GUARD_BITS
    }

    fn complex(&self, what: &str, s: &str) -> Result<Complex> {
        Complex::parse(s.trim(), self.bits()).ok_or_else(|| Error::Parse(format!("{what}: expected a complex number like 1.5-2*i, got '{s}'")))
    }

    fn fmt(&self, z: &Complex) -> String {
        z.to_string_digits(self.digits() as usize)
    }

    fn lattice(&self, c: &CurveArgs) -> Result<std::sync::Arc<Lattice>> {
        periods_cached(&self.complex("g2", &c.g2)?, &self.complex("g3", &c.g3)?, self.digits())
    }
}

fn poly_of(a: &PolyArgs) -> Result<FieldPoly> {
    match &a.field {
        None => parse_poly(&a.d),
        Some(m) => {
            let k = parse_number_field(m, a.root)?;
            parse_poly_in(&a.d, &k, "x", &[(k.name().to_string(), k.gen())])
        }
    }
}

fn solution_json(s: &PellSolution) -> Value {
    json!({"X": s.x.to_string(), "Y": s.y.to_string()})
}

fn pell(ctx: &Ctx, cmd: &PellCmd) -> Result<Value> {
    let opts = ctx.cfg.cf_options();
    match cmd {
        PellCmd::Solve(a) => {
            let d = poly_of(a)?;
            let cf = cf_expand_with(&d, &opts)?;
            let sol = torsionlab::pell::fundamental_from_expansion(&cf)?;
            let mut out = json!({"D": d.to_string(), "solvable": sol.is_some(), "trace": cf.trace()});
            if let Some(s) = sol {
                out.as_object_mut().unwrap().extend(solution_json(&s).as_object().unwrap().clone());
            }
            Ok(out)
        }
        PellCmd::Squared { poly, rho, k_max } => {
            let q = poly_of(poly)?;
            let rho = match &poly.field {
                Some(m) if !rho.contains(':') => parse_nf_elem(&format!("{m} : {rho}"), poly.root)?,
                _ => parse_nf_elem(rho, poly.root)?,
            };
            let s = pell_square_factor_search(&rho, &q, *k_max, &opts)?;
            Ok(json!({
                "Q": q.to_string(),
                "rho": format_nf_elem(&rho),
                "fundamental": solution_json(&s.fundamental),
                "y_values": s.y_values.iter().map(format_nf_elem).collect::<Vec<_>>(),
                "hit": s.hit,
            }))
        }
        PellCmd::Power { poly, n } => {
            let d = poly_of(poly)?;
            let f = pell_fundamental_with(&d, &opts)?.ok_or(Error::PellUnsolvable(opts.max_steps))?;
            let p = pell_power(&f, &d, *n)?;
            Ok(json!({"D": d.to_string(), "n": n, "X": p.x.to_string(), "Y": p.y.to_string(), "verified": p.verify(&d)}))
        }
    }
}

fn torsion(cmd: &TorsionCmd) -> Result<Value> {
    match cmd {
        TorsionCmd::Params { order } => {
            let ps = torsion_parameters(*order)?;
            Ok(json!({"order": order, "count": ps.len(), "parameters": torsion_parameters_json(&ps)}))
        }
        TorsionCmd::Order { lambda, root, n_max } => {
            let lam = parse_nf_elem(lambda, *root)?;
            let ord = torsion_order(&family_curve(&lam)?, &family_point(&lam), *n_max)?;
            Ok(json!({"lambda": format_nf_elem(&lam), "root_index": root, "n_max": n_max, "order": ord}))
        }
    }
}

fn lattice(ctx: &Ctx, cmd: &LatticeCmd) -> Result<Value> {
    match cmd {
        LatticeCmd::Periods(c) => Ok(ctx.lattice(c)?.to_json()),
        LatticeCmd::Eval { curve, z } => {
            let l = ctx.lattice(curve)?;
            let z = ctx.complex("z", z)?;
            let (p, dp) = wp(&l, &z)?;
            Ok(json!({"z": ctx.fmt(&z), "wp": ctx.fmt(&p), "wp_prime": ctx.fmt(&dp), "zeta": ctx.fmt(&wzeta(&l, &z)?), "sigma": ctx.fmt(&wsigma(&l, &z))}))
        }
    }
}

fn extension_json(ctx: &Ctx, e: &GExtension) -> Value {
    json!({"v": ctx.fmt(&e.v), "zeta_v": ctx.fmt(&e.zeta_v), "kappa1": ctx.fmt(&e.kappa1), "kappa2": ctx.fmt(&e.kappa2), "lattice": e.lattice.to_json()})
}

/// The extension, the point, and a logarithm of its projection.
fn point_of(ctx: &Ctx, a: &PointArgs) -> Result<(GExtension, GPoint, Complex)> {
    let l = ctx.lattice(&a.curve)?;
    let ext = extension_make(&l, &ctx.complex("v", &a.v)?)?;
    let delta = ctx.complex("delta", &a.delta)?;
    let (x, y, hint) = match (&a.z, &a.x, &a.y) {
        (Some(z), None, None) => {
            let z = ctx.complex("z", z)?;
            let (x, y) = wp(&l, &z)?;
            (x, y, z)
        }
        (None, Some(x), Some(y)) => {
            let (x, y) = (ctx.complex("x", x)?, ctx.complex("y", y)?);
            let z = elog(&l, Some((&x, &y)))?;
            (x, y, z)
        }
        _ => return Err(Error::InvalidArgument("give either --z or both --x and --y".into())),
    };
    Ok((ext, GPoint { delta, epoint: NumPoint::Affine(x, y) }, hint))
}

fn gext(ctx: &Ctx, cmd: &GextCmd) -> Result<Value> {
    match cmd {
        GextCmd::Make { curve, v } => {
            let l = ctx.lattice(curve)?;
            Ok(extension_json(ctx, &extension_make(&l, &ctx.complex("v", v)?)?))
        }
        GextCmd::Log(a) => {
            let (ext, s, hint) = point_of(ctx, a)?;
            let u = g_log(&ext, &s, &hint)?;
            Ok(json!({"t": ctx.fmt(&u.t), "z": ctx.fmt(&u.z)}))
        }
        GextCmd::Betti(a) => {
            let (ext, s, hint) = point_of(ctx, a)?;
            let u = g_log(&ext, &s, &hint)?;
            let b = betti_g(&ext, &u)?;
            Ok(json!({"t": ctx.fmt(&u.t), "z": ctx.fmt(&u.z), "betti": b.to_json(100)}))
        }
        GextCmd::Torsion { point, m_max } => {
            let (ext, s, hint) = point_of(ctx, point)?;
            Ok(json!({"m_max": m_max, "order": g_torsion_test(&ext, &s, &hint, *m_max)?}))
        }
    }
}

fn ribet(ctx: &Ctx, cmd: &RibetCmd) -> Result<Value> {
    match cmd {
        RibetCmd::Delta { family, u } => {
            let f = CmFamily::from(*family);
            let l = f.lattice(ctx.digits())?;
            let alpha = f.alpha(l.bits());
            let r = ribet_delta(&l, &alpha, &ctx.complex("u", u)?)?;
            Ok(
                json!({"family": f.name(), "alpha": ctx.fmt(&alpha), "delta": ctx.fmt(&r.delta), "v": ctx.fmt(&r.v), "s2": ctx.fmt(&r.s2), "log": {"t": ctx.fmt(&r.log.t), "z": ctx.fmt(&r.log.z)}}),
            )
        }
        RibetCmd::Check { family, n, k1, k2 } => {
            let f = CmFamily::from(*family);
            let l = f.lattice(ctx.digits().max(experiments::RIBET_DIGITS))?;
            let c = ribet_order_check(&l, &f.alpha(l.bits()), *k1, *k2, *n)?;
            Ok(json!({
                "family": f.name(), "n": n, "k1": k1, "k2": k2, "m": c.m, "divides_n2": c.divides_n2,
                "betti": c.betti.to_json(4 * n * n), "extrapolation_gap_log2": c.extrapolation_gap_log2,
            }))
        }
    }
}

fn scan(ctx: &Ctx, cmd: &ScanCmd) -> Result<Output> {
    let (id, input, opts) = match cmd {
        ScanCmd::PellTorsion { n_max, cf_budget, opts } => {
            ("pell_torsion", json!({"n_max": n_max, "cf_budget": cf_budget.unwrap_or(ctx.cfg.cf_max_steps)}), opts)
        }
        ScanCmd::Theorem4 { case, n_max, k_max, opts } => ("theorem4", json!({"case": case, "n_max": n_max, "k_max": k_max}), opts),
        ScanCmd::Ribet { n_max, family, opts } => ("ribet", json!({"n_max": n_max, "family": CmFamily::from(*family).name()}), opts),
        ScanCmd::Surface { family, m_max, opts } => ("surface_count", json!({"m_max": m_max, "family": CmFamily::from(*family).name()}), opts),
    };
    let mut cfg_key = ctx.cfg.to_json();
    cfg_key.as_object_mut().unwrap().remove("cache_dir");
    let key = json!({"experiment": id, "parameters": input, "config": cfg_key});
    let path = ctx.cfg.cache_dir.as_ref().map(|d| cache::entry_path(d, id, &key));
    let cached = path.as_ref().filter(|_| !opts.no_cache).and_then(|p| cache::load(p)).and_then(|v| serde_json::from_value::<ScanReport>(v).ok());
    let report = match cached {
        Some(r) => r,
        None => {
            let digits = ctx.digits();
            let r = experiments::with_jobs(ctx.jobs, || match cmd {
                ScanCmd::PellTorsion { n_max, cf_budget, .. } => pell_torsion_scan(*n_max, cf_budget.unwrap_or(ctx.cfg.cf_max_steps), ctx.cfg.seed),
                ScanCmd::Theorem4 { case, n_max, k_max, .. } => theorem4_scan(case.parse::<Case>()?, *n_max, *k_max, digits, &ctx.cfg.cf_options()),
                ScanCmd::Ribet { n_max, family, .. } => ribet_scan(*n_max, (*family).into(), digits.max(experiments::RIBET_DIGITS)),
                ScanCmd::Surface { family, m_max, .. } => surface_count((*family).into(), *m_max, digits.max(experiments::RIBET_DIGITS)),
            })?;
            if let Some(p) = &path {
                cache::store(p, &r.to_json()).map_err(|e| Error::InvalidArgument(format!("cache write failed: {e}")))?;
            }
            r
        }
    };
    Ok(match opts.format {
        Format::Csv => Output::Text(report.to_csv()),
        Format::Json => Output::Json(report.to_json()),
    })
}

fn replay(arg: &str) -> Result<Value> {
    let text = match std::fs::read_to_string(arg) {
        Ok(t) => t,
        Err(_) if arg.trim_start().starts_with('{') => arg.to_string(),
        Err(e) => return Err(Error::InvalidArgument(format!("cannot read '{arg}': {e}"))),
    };
    let v: Value = serde_json::from_str(&text).map_err(|e| Error::Parse(format!("certificate is not JSON: {e}")))?;
    let certs: Vec<Value> = if let Some(rows) = v["rows"].as_array() {
        rows.iter().filter_map(|r| r.get("certificate").cloned()).collect()
    } else if let Some(c) = v.get("certificate") {
        vec![c.clone()]
    } else {
        vec![v]
    };
    let mut results = Vec::new();
    for c in &certs {
        let r = experiments::replay(c)?;
        results.push(json!({"kind": r.kind, "matches": r.matches, "recomputed": r.recomputed, "stored": c["verdict"]}));
    }
    let mismatches = results.iter().filter(|r| r["matches"] != true).count();
    if mismatches > 0 {
        return Err(Error::InternalCheckFailed(format!("{mismatches} of {} certificates did not reproduce", results.len())));
    }
    Ok(json!({"replayed": results.len(), "results": results}))
}

fn dispatch(ctx: &Ctx, cmd: &Command) -> Result<Output> {
    Ok(Output::Json(match cmd {
        Command::Pell(c) => pell(ctx, c)?,
        Command::Torsion(c) => torsion(c)?,
        Command::Lattice(c) => lattice(ctx, c)?,
        Command::Gext(c) => gext(ctx, c)?,
        Command::Ribet(c) => ribet(ctx, c)?,
        Command::Scan(c) => return scan(ctx, c),
        Command::Replay { certificate } => replay(certificate)?,
    }))
}

fn effective_config(cli: &Cli) -> std::result::Result<Config, String> {
    let mut cfg = Config::default();
    if let Some(p) = &cli.config {
        let text = std::fs::read_to_string(p).map_err(|e| format!("cannot read config {}: {e}", p.display()))?;
        cfg.apply_text(&text)?;
    }
    if let Some(v) = cli.precision {
        cfg.precision_digits = v;
    }
    if let Some(v) = cli.cf_max_steps {
        cfg.cf_max_steps = v;
    }
    if let Some(v) = cli.coeff_bit_cap {
        cfg.coeff_bit_cap = v;
    }
    if let Some(v) = &cli.cache_dir {
        cfg.cache_dir = Some(v.clone());
    }
    if let Some(v) = cli.seed {
        cfg.seed = v;
    }
    cfg.validate()?;
    Ok(cfg)
}

fn error_record(e: &Error) -> Value {
    json!({"error": e.code(), "message": e.to_string(), "context": e.context()})
}

fn with_provenance(mut v: Value, cfg: &Config) -> Value {
    let mut prov = cfg.to_json();
    if let (Some(p), Some(existing)) = (prov.as_object_mut(), v.get("provenance").and_then(Value::as_object)) {
        for (k, x) in existing {
            p.insert(k.clone(), x.clone());
        }
    }
    match v.as_object_mut() {
        Some(o) => {
            o.insert("provenance".into(), prov);
            v
        }
        None => json!({"result": v, "provenance": prov}),
    }
}

/// Runs one invocation, writing to `out` and `err`; returns the exit code.
pub fn run_with<I, S>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = if code == 0 { write!(out, "{e}") } else { write!(err, "{e}") };
            return code;
        }
    };
    let cfg = match effective_config(&cli) {
        Ok(c) => c,
        Err(m) => {
            let _ = writeln!(err, "{}", json!({"error": "UsageError", "message": m, "context": {}}));
            return 2;
        }
    };
    let ctx = Ctx { cfg, jobs: cli.jobs };
    match dispatch(&ctx, &cli.command) {
        Ok(Output::Json(v)) => {
            let _ = writeln!(out, "{}", serde_json::to_string_pretty(&with_provenance(v, &ctx.cfg)).unwrap());
            0
        }
        Ok(Output::Text(t)) => {
            let _ = write!(out, "{t}");
            0
        }
        Err(e) => {
            let _ = writeln!(out, "{}", serde_json::to_string_pretty(&with_provenance(error_record(&e), &ctx.cfg)).unwrap());
            1
        }
    }
}

pub fn run<I, S>(argv: I) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    run_with(argv, &mut std::io::stdout().lock(), &mut std::io::stderr().lock())
}
