//! Factorization of polynomials over Q.
//!
//! Rational roots come from high-precision numerics verified exactly. The
//! remaining part is tested modulo three small good primes: the possible
//! factor degrees are the subset sums common to all three distinct-degree
//! patterns. Any degree still possible is searched among products of
//! numerically computed roots, each candidate confirmed by exact division.
//! If the search budget runs out the result is marked uncertified.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::modp::{is_prime, PolyP};
use super::poly::FieldPoly;
use super::rational::{denominator_lcm, Rational};
use super::recognize::recognize_big;
use super::roots::aberth;
use crate::apfloat::{Complex, Real};

/// Subsets examined before giving up on certification.
const SUBSET_BUDGET: u64 = 400_000;

pub struct Factorization {
    /// Monic irreducible factors with multiplicities, in ascending degree.
    pub factors: Vec<(Vec<Rational>, u32)>,
    /// False when some factor could not be proven irreducible.
    pub certified: bool,
}

/// Primitive integer polynomial with positive leading coefficient.
pub fn primitive_part(f: &[Rational]) -> Vec<BigInt> {
    let l = denominator_lcm(f.iter());
    let ints: Vec<BigInt> = f.iter().map(|q| (q * Rational::from_integer(l.clone())).to_integer()).collect();
    let g = ints.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
    let sign = if ints.last().is_some_and(|x| x.is_negative()) { -BigInt::one() } else { BigInt::one() };
    if g.is_zero() {
        return ints;
    }
    ints.iter().map(|x| x / &g * &sign).collect()
}

fn to_rationals(f: &[BigInt]) -> Vec<Rational> {
    f.iter().map(|x| Rational::from_integer(x.clone())).collect()
}

fn monic_q(f: &[Rational]) -> Vec<Rational> {
    let lc = f.last().unwrap().clone();
    f.iter().map(|x| x / &lc).collect()
}

pub fn factor_rational(f: &[Rational]) -> Factorization {
    let fp = FieldPoly::from_rationals(f);
    let mut factors = Vec::new();
    let mut certified = true;
    for (g, k) in fp.squarefree_decomposition() {
        let qs = g.rational_coeffs().unwrap();
        let (parts, cert) = factor_squarefree(&qs);
        certified &= cert;
        for p in parts {
            factors.push((monic_q(&p), k));
        }
    }
    factors.sort_by_key(|(p, k)| (p.len(), *k));
    Factorization { factors, certified }
}

fn bit_len(x: &BigInt) -> u64 {
    x.bits()
}

/// Working precision for numeric roots of an integer polynomial that is
/// enough to read off the coefficients of any factor.
fn factor_precision(f: &[BigInt]) -> u32 {
    let n = f.len() as u64;
    let norm = f.iter().map(bit_len).max().unwrap_or(1);
    (2 * n + norm + 2 * bit_len(f.last().unwrap()) + 96) as u32
}

fn numeric_roots_int(f: &[BigInt], prec: u32) -> Option<Vec<Complex>> {
    let cs: Vec<Complex> = f.iter().map(|x| Complex::from_real(Real::from_bigint(x, prec + 32))).collect();
    aberth(&cs, prec)
}

fn exact_divides(f: &[Rational], g: &[Rational]) -> Option<Vec<Rational>> {
    let (q, r) = FieldPoly::from_rationals(f).divrem(&FieldPoly::from_rationals(g)).ok()?;
    if r.is_zero() {
        q.rational_coeffs()
    } else {
        None
    }
}

/// Irreducible factors of a squarefree polynomial, and whether the split is
/// certified.
fn factor_squarefree(f: &[Rational]) -> (Vec<Vec<Rational>>, bool) {
    let n = f.len() - 1;
    if n <= 1 {
        return (vec![f.to_vec()], true);
    }
    let mut g = primitive_part(f);
    let mut out = Vec::new();
    // rational roots
    let prec = factor_precision(&g);
    let roots = match numeric_roots_int(&g, prec).or_else(|| numeric_roots_int(&g, 2 * prec)) {
        Some(r) => r,
        None => return (vec![f.to_vec()], false),
    };
    let lc = g.last().unwrap().abs();
    let bound = lc.clone();
    for z in &roots {
        if !z.im.is_zero() && z.im.log2_abs() > z.re.log2_abs().max(0.0) - (prec as f64) / 2.0 {
            continue;
        }
        let tol = Real::one(prec).mul_2exp(-((prec / 2) as i64));
        if let Some((k, m)) = recognize_big(&z.re, &bound, &tol) {
            let lin = vec![Rational::new(-k, m), Rational::one()];
            if let Some(q) = exact_divides(&to_rationals(&g), &lin) {
                out.push(lin);
                g = primitive_part(&q);
            }
        }
    }
    if g.len() <= 1 {
        return (out, true);
    }
    if g.len() <= 4 {
        // degree 2 or 3 without rational roots
        out.push(to_rationals(&g));
        return (out, true);
    }
    let (mut rest, cert) = split_by_degrees(&g);
    out.append(&mut rest);
    (out, cert)
}

fn subset_sums(degs: &[usize], n: usize) -> Vec<bool> {
    let mut can = vec![false; n + 1];
    can[0] = true;
    for &d in degs {
        for s in (d..=n).rev() {
            if can[s - d] {
                can[s] = true;
            }
        }
    }
    can
}

/// Possible factor degrees of `g` from three good primes.
fn modular_degree_sieve(g: &[BigInt]) -> Vec<bool> {
    let n = g.len() - 1;
    let mut allowed = vec![true; n + 1];
    let mut used = 0;
    let mut p = 3u64;
    let qs = to_rationals(g);
    while used < 3 && p < 10_000 {
        if is_prime(p) {
            if let Some(fp) = PolyP::from_rationals(&qs, p) {
                if fp.deg() == n as i64 && fp.is_squarefree() {
                    let can = subset_sums(&fp.factor_degrees(), n);
                    for d in 0..=n {
                        allowed[d] &= can[d];
                    }
                    used += 1;
                }
            }
        }
        p += 2;
    }
    allowed
}

fn split_by_degrees(g: &[BigInt]) -> (Vec<Vec<Rational>>, bool) {
    let n = g.len() - 1;
    let allowed = modular_degree_sieve(g);
    let candidates: Vec<usize> = (1..=n / 2).filter(|&d| allowed[d] && allowed[n - d]).collect();
    if candidates.is_empty() {
        return (vec![to_rationals(g)], true);
    }
    let prec = factor_precision(g);
    let roots = match numeric_roots_int(g, prec).or_else(|| numeric_roots_int(g, 2 * prec)) {
        Some(r) => r,
        None => return (vec![to_rationals(g)], false),
    };
    let mut budget = SUBSET_BUDGET;
    for d in candidates {
        match search_factor(g, &roots, d, prec, &mut budget) {
            SearchResult::Found(h) => {
                let q = exact_divides(&to_rationals(g), &h).unwrap();
                let (mut a, ca) = factor_squarefree(&h);
                let (mut b, cb) = factor_squarefree(&q);
                a.append(&mut b);
                return (a, ca && cb);
            }
            SearchResult::Exhausted => return (vec![to_rationals(g)], false),
            SearchResult::None => {}
        }
    }
    (vec![to_rationals(g)], true)
}

enum SearchResult {
    Found(Vec<Rational>),
    None,
    Exhausted,
}

fn search_factor(g: &[BigInt], roots: &[Complex], d: usize, prec: u32, budget: &mut u64) -> SearchResult {
    let n = roots.len();
    let lc = Complex::from_real(Real::from_bigint(g.last().unwrap(), prec));
    let tol = -(prec as f64) / 3.0;
    let mut idx: Vec<usize> = (0..d).collect();
    loop {
        if *budget == 0 {
            return SearchResult::Exhausted;
        }
        *budget -= 1;
        // trace test first: lc * sum of roots must be an integer
        let mut s = Complex::zero(prec);
        for &i in &idx {
            s = &s + &roots[i];
        }
        let t = &s * &lc;
        let near_int = |z: &Complex| -> Option<BigInt> {
            let k = z.re.round();
            let dz = &z.re - &Real::from_bigint(&k, prec);
            let scale = z.log2_abs().max(0.0);
            if dz.log2_abs() < scale + tol && z.im.log2_abs() < scale + tol {
                Some(k)
            } else {
                None
            }
        };
        if near_int(&t).is_some() {
            let mut prod = vec![lc.clone()];
            for &i in &idx {
                let mut next = vec![Complex::zero(prec); prod.len() + 1];
                for (j, a) in prod.iter().enumerate() {
                    next[j + 1] = &next[j + 1] + a;
                    next[j] = &next[j] - &(a * &roots[i]);
                }
                prod = next;
            }
            let ints: Option<Vec<BigInt>> = prod.iter().map(near_int).collect();
            if let Some(ints) = ints {
                let h = to_rationals(&primitive_part(&to_rationals(&ints)));
                if exact_divides(&to_rationals(g), &h).is_some() {
                    return SearchResult::Found(h);
                }
            }
        }
        // next combination
        let mut i = d;
        loop {
            if i == 0 {
                return SearchResult::None;
            }
            i -= 1;
            if idx[i] < n - d + i {
                idx[i] += 1;
                for j in i + 1..d {
                    idx[j] = idx[j - 1] + 1;
                }
                break;
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::rational::{int, rat};

    fn ints(c: &[i64]) -> Vec<Rational> {
        c.iter().map(|&x| int(x)).collect()
    }

    fn degrees(f: &Factorization) -> Vec<(usize, u32)> {
        f.factors.iter().map(|(p, k)| (p.len() - 1, *k)).collect()
    }

    #[test]
    fn splits_rational_roots_and_quadratics() {
        // (2x - 1)(4x^2 + 2x + 1), the order-4 condition of the quartic family
        let f = FieldPoly::from_i64s(&[-1, 2]).mul(&FieldPoly::from_i64s(&[1, 2, 4]));
        let fac = factor_rational(&f.rational_coeffs().unwrap());
        assert!(fac.certified);
        assert_eq!(degrees(&fac), vec![(1, 1), (2, 1)]);
        assert_eq!(fac.factors[0].0, vec![rat(-1, 2), int(1)]);
    }

    #[test]
    fn swinnerton_dyer_style_quartic_is_irreducible() {
        // x^4 - 10x^2 + 1 is reducible modulo every prime
        let fac = factor_rational(&ints(&[1, 0, -10, 0, 1]));
        assert!(fac.certified);
        assert_eq!(degrees(&fac), vec![(4, 1)]);
    }

    #[test]
    fn product_of_two_quartics() {
        let a = FieldPoly::from_i64s(&[1, 0, -10, 0, 1]);
        let b = FieldPoly::from_i64s(&[2, 1, 0, 0, 1]);
        let f = a.mul(&b).mul(&FieldPoly::from_i64s(&[3, 1]).pow(2));
        let fac = factor_rational(&f.rational_coeffs().unwrap());
        assert!(fac.certified);
        assert_eq!(degrees(&fac), vec![(1, 2), (4, 1), (4, 1)]);
        let mut prod = FieldPoly::from_i64s(&[1]);
        for (p, k) in &fac.factors {
            prod = prod.mul(&FieldPoly::from_rationals(p).pow(*k));
        }
        assert!(prod.equals(&f.monic()));
    }

    #[test]
    fn cyclotomic_is_irreducible() {
        let fac = factor_rational(&ints(&[1, 1, 1, 1, 1, 1, 1]));
        assert!(fac.certified);
        assert_eq!(degrees(&fac), vec![(6, 1)]);
    }
}
