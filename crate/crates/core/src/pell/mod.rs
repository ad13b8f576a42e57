//! Polynomial Pell equations `X^2 - D Y^2 = 1` by continued fractions of
//! `sqrt(D)` in `K((1/x))`.
//!
//! With `A` the polynomial part of `sqrt(D)` and `x_i = (P_i + sqrt D)/Q_i`
//! the expansion runs
//!
//! ```text
//! P_0 = 0, Q_0 = 1, a_i = (P_i + A) quo Q_i,
//! P_{i+1} = A - (P_i + A) rem Q_i,
//! l_{i+1} Q_{i+1} = (D - P_{i+1}^2) / Q_i   with Q_{i+1} monic,
//! x_i = a_i + l_{i+1} / x_{i+1}.
//! ```
//!
//! The textbook recursion keeps the scale of `Q_i` inside the sequence,
//! and the scales compound so heights grow cubically in the step count.
//! Monic `Q_i` give the same `P_i` with quadratic growth. The equation is
//! solvable exactly when some `Q_k` with `k >= 1` is constant.

pub mod modular;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::exactalg::{poly_sqrt_floor, Elem, Field, FieldPoly};

pub use modular::{normality_certificate, NormalityCertificate};

pub const DEFAULT_MAX_STEPS: usize = 512;
pub const DEFAULT_BIT_CAP: u64 = 1 << 20;

#[derive(Clone, Debug)]
pub struct CfOptions {
    pub max_steps: usize,
    /// Abort with `BudgetExceeded` once any coefficient is this many bits.
    pub bit_cap: u64,
}

impl Default for CfOptions {
    fn default() -> Self {
        CfOptions { max_steps: DEFAULT_MAX_STEPS, bit_cap: DEFAULT_BIT_CAP }
    }
}

#[derive(Clone, Debug)]
pub struct CFExpansion {
    pub d: FieldPoly,
    /// `a_i` of the monic-normalized expansion.
    pub partial_quotients: Vec<FieldPoly>,
    /// `(P_i, Q_i)` for `i = 0..=steps_used`, each `Q_i` monic.
    pub pq_track: Vec<(FieldPoly, FieldPoly)>,
    /// `l_i` for `i = 1..=steps_used`, the constants split off the `Q_i`.
    pub scales: Vec<Elem>,
    pub periodic: bool,
    /// The expansion of a square root is purely periodic after `a_0`, up to
    /// constant scaling; the quasi-period is the first `k` with `Q_k`
    /// constant.
    pub period_start: Option<usize>,
    pub period_length: Option<usize>,
    pub steps_used: usize,
}

/// Degrees per step, for JSON output.
#[derive(Clone, Debug, Serialize)]
pub struct CfTrace {
    pub steps_used: usize,
    pub periodic: bool,
    pub period_start: Option<usize>,
    pub period_length: Option<usize>,
    pub a_degrees: Vec<i64>,
    pub q_degrees: Vec<i64>,
    pub max_coeff_bits: u64,
}

impl CFExpansion {
    pub fn trace(&self) -> CfTrace {
        CfTrace {
            steps_used: self.steps_used,
            periodic: self.periodic,
            period_start: self.period_start,
            period_length: self.period_length,
            a_degrees: self.partial_quotients.iter().map(|a| a.deg()).collect(),
            q_degrees: self.pq_track.iter().map(|(_, q)| q.deg()).collect(),
            max_coeff_bits: self.pq_track.iter().map(|(p, q)| p.max_coeff_bits().max(q.max_coeff_bits())).max().unwrap_or(0),
        }
    }
}

#[derive(Clone, Debug)]
pub struct PellSolution {
    pub x: FieldPoly,
    pub y: FieldPoly,
}

impl PellSolution {
    /// `X^2 - D Y^2 - 1`, which is zero for a valid solution.
    pub fn defect(&self, d: &FieldPoly) -> FieldPoly {
        let one = FieldPoly::one(d.field());
        self.x.sqr().sub(&d.mul(&self.y.sqr())).sub(&one)
    }

    pub fn verify(&self, d: &FieldPoly) -> bool {
        self.defect(d).is_zero()
    }

    /// `(X1 + Y1 sqrt D)(X2 + Y2 sqrt D)`.
    pub fn compose(&self, other: &PellSolution, d: &FieldPoly) -> PellSolution {
        PellSolution { x: self.x.mul(&other.x).add(&d.mul(&self.y.mul(&other.y))), y: self.x.mul(&other.y).add(&self.y.mul(&other.x)) }
    }
}

fn check_discriminant(d: &FieldPoly) -> Result<FieldPoly> {
    let a = poly_sqrt_floor(d)?;
    if !d.is_squarefree() {
        return Err(Error::NotSquarefree);
    }
    Ok(a)
}

pub fn cf_expand(d: &FieldPoly, max_steps: usize) -> Result<CFExpansion> {
    cf_expand_with(d, &CfOptions { max_steps, ..CfOptions::default() })
}

pub fn cf_expand_with(d: &FieldPoly, opts: &CfOptions) -> Result<CFExpansion> {
    if opts.max_steps == 0 {
        return Err(Error::InvalidArgument("max_steps must be at least 1".into()));
    }
    let a0 = check_discriminant(d)?;
    let d = d.lift_to(a0.field())?;
    let f = d.field().clone();
    let mut p = FieldPoly::zero(&f);
    let mut q = FieldPoly::one(&f);
    let mut out = CFExpansion {
        d: d.clone(),
        partial_quotients: vec![a0.clone()],
        pq_track: vec![(p.clone(), q.clone())],
        scales: Vec::new(),
        periodic: false,
        period_start: None,
        period_length: None,
        steps_used: 0,
    };
    for step in 1..=opts.max_steps {
        let (quo, r) = p.add(&a0).divrem(&q)?;
        if step > 1 {
            out.partial_quotients.push(quo);
        }
        p = a0.sub(&r);
        let q_full = d.sub(&p.sqr()).div_exact(&q)?;
        let l = q_full.lc();
        q = q_full.monic();
        out.pq_track.push((p.clone(), q.clone()));
        out.scales.push(l);
        out.steps_used = step;
        if q.is_constant() {
            out.periodic = true;
            out.period_start = Some(1);
            out.period_length = Some(step);
            return Ok(out);
        }
        let bits = p.max_coeff_bits().max(q.max_coeff_bits());
        if bits > opts.bit_cap {
            return Err(Error::BudgetExceeded { cap: opts.bit_cap, step });
        }
    }
    Ok(out)
}

/// Convergent `(p_{k-1}, q_{k-1})` of `a_0 + l_1/(a_1 + l_2/(a_2 + ...))`
/// from `a_0..a_{k-1}` and `l_1..l_{k-1}`.
fn convergent(quotients: &[FieldPoly], scales: &[Elem], f: &Field) -> (FieldPoly, FieldPoly) {
    let (mut p0, mut p1) = (FieldPoly::one(f), quotients[0].clone());
    let (mut q0, mut q1) = (FieldPoly::zero(f), FieldPoly::one(f));
    for (a, l) in quotients[1..].iter().zip(scales) {
        let p2 = a.mul(&p1).add(&p0.scale(l));
        let q2 = a.mul(&q1).add(&q0.scale(l));
        (p0, p1, q0, q1) = (p1, p2, q1, q2);
    }
    (p1, q1)
}

/// Over Q the sign is fixed by a positive leading coefficient of `X`.
fn normalize_sign(sol: PellSolution) -> PellSolution {
    match sol.x.lc().as_rational() {
        Some(c) if c < num_traits::Zero::zero() => PellSolution { x: sol.x.neg(), y: sol.y.neg() },
        _ => sol,
    }
}

/// Fundamental solution of `X^2 - D Y^2 = 1` from the first constant `Q_k`,
/// or `None` when the expansion is inconclusive within `max_steps`.
///
/// The convergent at the step before the constant has constant norm `c`.
/// When `c` has a square root
/// `g` in the field the pair is divided by `g`; otherwise the square
/// `(X + Y sqrt D)^2 / c` is returned, which has norm 1.
pub fn pell_fundamental(d: &FieldPoly, max_steps: usize) -> Result<Option<PellSolution>> {
    pell_fundamental_with(d, &CfOptions { max_steps, ..CfOptions::default() })
}

pub fn pell_fundamental_with(d: &FieldPoly, opts: &CfOptions) -> Result<Option<PellSolution>> {
    let cf = cf_expand_with(d, opts)?;
    fundamental_from_expansion(&cf)
}

pub fn fundamental_from_expansion(cf: &CFExpansion) -> Result<Option<PellSolution>> {
    if !cf.periodic {
        return Ok(None);
    }
    let d = &cf.d;
    let f = d.field().clone();
    let k = cf.steps_used;
    let (x, y) = convergent(&cf.partial_quotients[..k], &cf.scales, &f);
    let norm = x.sqr().sub(&d.mul(&y.sqr()));
    if !norm.is_constant() || norm.is_zero() {
        return Err(Error::InternalCheckFailed(format!("convergent norm {norm} is not a nonzero constant")));
    }
    let c = norm.lc();
    let sol = match c.sqrt() {
        Some(g) => {
            let gi = g.inv().unwrap();
            PellSolution { x: x.scale(&gi), y: y.scale(&gi) }
        }
        None => {
            let ci = c.inv().unwrap();
            let base = PellSolution { x, y };
            let sq = base.compose(&base, d);
            PellSolution { x: sq.x.scale(&ci), y: sq.y.scale(&ci) }
        }
    };
    let sol = normalize_sign(sol);
    if !sol.verify(d) {
        return Err(Error::InternalCheckFailed(format!("X^2 - D Y^2 - 1 = {}", sol.defect(d))));
    }
    Ok(Some(sol))
}

/// `X_n + Y_n sqrt D = (X + Y sqrt D)^n`.
pub fn pell_power(sol: &PellSolution, d: &FieldPoly, n: u64) -> Result<PellSolution> {
    if n == 0 {
        return Err(Error::InvalidArgument("power must be at least 1".into()));
    }
    if !sol.verify(d) {
        return Err(Error::InvalidArgument("input is not a solution for this D".into()));
    }
    let f = d.field().clone();
    let mut acc = PellSolution { x: FieldPoly::one(&f), y: FieldPoly::zero(&f) };
    let mut base = sol.clone();
    let mut k = n;
    while k > 0 {
        if k & 1 == 1 {
            acc = acc.compose(&base, d);
        }
        k >>= 1;
        if k > 0 {
            base = base.compose(&base, d);
        }
    }
    if !acc.verify(d) {
        return Err(Error::InternalCheckFailed(format!("power {n} violates the Pell identity")));
    }
    Ok(acc)
}

/// Result of the search for `Y_n(rho) = 0`.
#[derive(Clone, Debug)]
pub struct SquareFactorSearch {
    pub fundamental: PellSolution,
    /// `Y_n(rho)` for `n = 1..` up to the hit or `n_max`.
    pub y_values: Vec<Elem>,
    pub hit: Option<usize>,
}

/// Least `n <= n_max` with `Y_n(rho) = 0`, which is exactly the solvability
/// of `X^2 - (x - rho)^2 Q Y^2 = 1` with `Y = Y_n / (x - rho)`.
pub fn pell_square_factor(rho: &Elem, q: &FieldPoly, n_max: usize) -> Result<Option<usize>> {
    Ok(pell_square_factor_search(rho, q, n_max, &CfOptions::default())?.hit)
}

pub fn pell_square_factor_search(rho: &Elem, q: &FieldPoly, n_max: usize, opts: &CfOptions) -> Result<SquareFactorSearch> {
    let fundamental = pell_fundamental_with(q, opts)?.ok_or(Error::PellUnsolvable(opts.max_steps))?;
    let q_rho = q.eval(rho);
    if q_rho.is_zero() {
        return Err(Error::RhoOnCurveBranch);
    }
    // only values at rho matter: recur on (X_n(rho), Y_n(rho))
    let x1 = fundamental.x.eval(rho);
    let y1 = fundamental.y.eval(rho);
    let (mut xn, mut yn) = (x1.clone(), y1.clone());
    let mut y_values = Vec::new();
    let mut hit = None;
    for n in 1..=n_max {
        if n > 1 {
            let xs = &(&xn * &x1) + &(&q_rho * &(&yn * &y1));
            let ys = &(&xn * &y1) + &(&yn * &x1);
            xn = xs;
            yn = ys;
        }
        y_values.push(yn.clone());
        if yn.is_zero() {
            hit = Some(n);
            break;
        }
    }
    Ok(SquareFactorSearch { fundamental, y_values, hit })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::rational::{int, rat};
    use crate::exactalg::{parse_nf_elem, parse_poly};
    use proptest::prelude::*;

    fn poly(s: &str) -> FieldPoly {
        parse_poly(s).unwrap()
    }

    #[test]
    fn quadratic_discriminant_expands_in_one_step() {
        let cf = cf_expand(&poly("x^2+1"), 10).unwrap();
        assert!(cf.periodic);
        assert_eq!(cf.steps_used, 1);
        assert_eq!(cf.partial_quotients[0].to_string(), "x");
        assert!(cf.pq_track[1].1.is_constant());
        let sol = pell_fundamental(&poly("x^2+1"), 10).unwrap().unwrap();
        assert_eq!(sol.x.to_string(), "2*x^2+1");
        assert_eq!(sol.y.to_string(), "2*x");
    }

    #[test]
    fn cf_steps_satisfy_divisibility() {
        let d = poly("x^4+x");
        let cf = cf_expand(&d, 50).unwrap();
        assert!(cf.periodic);
        for (i, (p, q)) in cf.pq_track.iter().enumerate() {
            assert!(d.sub(&p.sqr()).rem(q).unwrap().is_zero());
            assert!(p.deg() <= 2);
            if i >= 1 && i < cf.partial_quotients.len() {
                assert!(cf.partial_quotients[i].deg() >= 1);
            }
        }
        let sol = pell_fundamental(&d, 50).unwrap().unwrap();
        assert!(sol.verify(&d));
        assert!(!sol.y.is_zero());
    }

    #[test]
    fn non_torsion_parameter_stays_aperiodic() {
        let d = poly("x^4+x+1/4");
        let cf = cf_expand(&d, 80).unwrap();
        assert!(!cf.periodic);
        assert_eq!(cf.steps_used, 80);
        assert!(fundamental_from_expansion(&cf).unwrap().is_none());
    }

    #[test]
    fn precondition_errors() {
        assert!(matches!(cf_expand(&poly("x^3+1"), 5), Err(Error::OddDegree(3))));
        assert!(matches!(cf_expand(&poly("2*x^2+1"), 5), Err(Error::NonSquareLeadingCoeff)));
        assert!(matches!(cf_expand(&poly("x^4-2*x^2+1"), 5), Err(Error::NotSquarefree)));
    }

    #[test]
    fn bit_cap_aborts_loudly() {
        let opts = CfOptions { max_steps: 400, bit_cap: 256 };
        match cf_expand_with(&poly("x^4+x+1/4"), &opts) {
            Err(Error::BudgetExceeded { cap: 256, step }) => assert!(step > 1 && step < 400),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn powers_of_the_quadratic_solution() {
        let d = poly("x^2+1");
        let sol = pell_fundamental(&d, 10).unwrap().unwrap();
        let s1 = pell_power(&sol, &d, 1).unwrap();
        assert!(s1.x.equals(&sol.x) && s1.y.equals(&sol.y));
        let s2 = pell_power(&sol, &d, 2).unwrap();
        assert_eq!(s2.x.to_string(), "8*x^4+8*x^2+1");
        assert!(s2.y.equals(&sol.x.mul(&sol.y).scale(&Elem::Q(int(2)))));
        assert_eq!(pell_power(&sol, &d, 3).unwrap().y.deg(), 5);
        for n in 1..=5 {
            assert!(pell_power(&sol, &d, n).unwrap().verify(&d));
        }
    }

    #[test]
    fn non_square_norm_is_squared_away() {
        // x^2 - 2: first convergent x has norm 2, not a square in Q
        let d = poly("x^2-2");
        let sol = pell_fundamental(&d, 10).unwrap().unwrap();
        assert!(sol.verify(&d));
        assert_eq!(sol.x.to_string(), "x^2-1");
        // over Q(sqrt 2) the norm is a square and the degree halves
        let k = crate::exactalg::parse_number_field("s^2-2", 1).unwrap();
        let dk = d.lift_to(&k).unwrap();
        let solk = pell_fundamental(&dk, 10).unwrap().unwrap();
        assert!(solk.verify(&dk));
        assert_eq!(solk.x.deg(), 1);
    }

    #[test]
    fn square_factor_search() {
        let q = poly("x^2+1");
        assert_eq!(pell_square_factor(&Elem::Q(int(0)), &q, 5).unwrap(), Some(1));
        // exhaustive oracle on x^4 + x at rho = 1
        let q4 = poly("x^4+x");
        let sol = pell_fundamental(&q4, 50).unwrap().unwrap();
        let one = Elem::Q(int(1));
        let want = (1..=10).find(|&n| pell_power(&sol, &q4, n).unwrap().y.eval(&one).is_zero());
        assert_eq!(pell_square_factor(&one, &q4, 10).unwrap(), want.map(|n| n as usize));
        assert!(matches!(pell_square_factor(&Elem::Q(int(0)), &q4, 3), Err(Error::RhoOnCurveBranch)));
        let short = CfOptions { max_steps: 40, ..CfOptions::default() };
        assert!(matches!(pell_square_factor_search(&one, &poly("x^4+x+1/4"), 3, &short), Err(Error::PellUnsolvable(40))));
    }

    #[test]
    fn number_field_discriminant() {
        // x^4 + x translated by sqrt 2 stays solvable
        let s = parse_nf_elem("s^2-2 : s", 1).unwrap();
        let d = poly("x^4+x").translate(&s);
        assert!(!d.field().is_rational());
        let sol = pell_fundamental(&d, 50).unwrap().unwrap();
        assert!(sol.verify(&d));
    }

    #[test]
    fn trace_serializes() {
        let cf = cf_expand(&poly("x^4+x"), 50).unwrap();
        let j = serde_json::to_value(cf.trace()).unwrap();
        assert_eq!(j["periodic"], true);
        assert_eq!(j["q_degrees"][0], 0);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(16))]

        #[test]
        fn power_is_a_homomorphism(a in 1u64..4, b in 1u64..4) {
            let d = poly("x^4+x");
            let s = pell_fundamental(&d, 50).unwrap().unwrap();
            let lhs = pell_power(&pell_power(&s, &d, a).unwrap(), &d, b).unwrap();
            let rhs = pell_power(&s, &d, a * b).unwrap();
            prop_assert!(lhs.x.equals(&rhs.x) && lhs.y.equals(&rhs.y));
        }

        #[test]
        fn solvability_is_translation_invariant(c in -6i64..6, lam in prop::sample::select(vec![(0i64, 1i64), (1, 4), (-3, 1), (1, 2)])) {
            let d = FieldPoly::from_rationals(&[rat(lam.0, lam.1), int(1), int(0), int(0), int(1)]);
            let shifted = d.translate(&Elem::Q(int(c)));
            let v0 = cf_expand(&d, 60).unwrap().periodic;
            let v1 = cf_expand(&shifted, 60).unwrap().periodic;
            prop_assert_eq!(v0, v1);
        }
    }
}
