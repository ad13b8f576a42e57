//! Square roots in absolute number fields by sign search over embeddings.

use super::field::Elem;
use super::rational::Rational;
use super::recognize::recognize_exact;
use crate::apfloat::Complex;

/// Largest number of independent sign choices tried.
const MAX_SIGN_BITS: usize = 14;

fn solve(mut a: Vec<Vec<Complex>>, mut b: Vec<Complex>) -> Option<Vec<Complex>> {
    let n = b.len();
    for col in 0..n {
        let piv = (col..n).max_by(|&i, &j| a[i][col].log2_abs().partial_cmp(&a[j][col].log2_abs()).unwrap())?;
        if a[piv][col].is_zero() {
            return None;
        }
        a.swap(col, piv);
        b.swap(col, piv);
        for r in col + 1..n {
            let f = &a[r][col] / &a[col][col];
            for c in col..n {
                let v = &a[r][c] - &(&f * &a[col][c]);
                a[r][c] = v;
            }
            let v = &b[r] - &(&f * &b[col]);
            b[r] = v;
        }
    }
    let mut x = vec![Complex::zero(b[0].prec()); n];
    for r in (0..n).rev() {
        let mut s = b[r].clone();
        for c in r + 1..n {
            s = &s - &(&a[r][c] * &x[c]);
        }
        x[r] = &s / &a[r][r];
    }
    Some(x)
}

pub fn sqrt_absolute(e: &Elem) -> Option<Elem> {
    let k = e.field();
    let coords = e.rational_coords()?;
    let conj = k.conjugates().ok()?;
    let d = conj.len();
    for prec in [256u32, 768, 2048] {
        let thetas: Vec<Complex> = conj.iter().map(|f| f.root(prec + 64).unwrap()).collect();
        // values of e under every embedding
        let vals: Vec<Complex> = thetas
            .iter()
            .map(|t| {
                let mut acc = Complex::zero(prec + 64);
                for c in coords.iter().rev() {
                    acc = &(&acc * t) + &Complex::from_rational(c, prec + 64);
                }
                acc
            })
            .collect();
        // conjugate pairs share a sign
        let mut partner = vec![usize::MAX; d];
        let mut free = Vec::new();
        for i in 0..d {
            if partner[i] != usize::MAX {
                continue;
            }
            if thetas[i].im.is_zero() {
                partner[i] = i;
                free.push(i);
                continue;
            }
            let j = (0..d)
                .filter(|&j| j != i && partner[j] == usize::MAX)
                .min_by(|&a, &b| thetas[a].dist_log2(&thetas[i].conj()).partial_cmp(&thetas[b].dist_log2(&thetas[i].conj())).unwrap())?;
            partner[i] = j;
            partner[j] = i;
            free.push(i);
        }
        if free.len() > MAX_SIGN_BITS {
            return None;
        }
        let mut roots: Vec<Complex> = vals.iter().map(|v| v.sqrt()).collect();
        for &i in &free {
            let j = partner[i];
            if j != i {
                roots[j] = roots[i].conj();
            }
        }
        let vander: Vec<Vec<Complex>> = thetas.iter().map(|t| (0..d).map(|p| t.powi(p as i64)).collect()).collect();
        // the overall sign is irrelevant: fix the first free sign
        for mask in 0u64..(1 << (free.len() - 1)) {
            let mut rhs = roots.clone();
            for (bit, &i) in free.iter().enumerate().skip(1) {
                if mask >> (bit - 1) & 1 == 1 {
                    rhs[i] = -&rhs[i];
                    let j = partner[i];
                    if j != i {
                        rhs[j] = -&rhs[j];
                    }
                }
            }
            let y = solve(vander.clone(), rhs)?;
            let ys: Option<Vec<Rational>> = y.iter().map(|c| recognize_exact(&c.re.with_prec(prec))).collect();
            let Some(ys) = ys else { continue };
            let t = k.gen();
            let cand = ys.iter().rev().fold(k.zero(), |acc, c| &(&acc * &t) + &k.from_rational(c.clone()));
            if (&cand * &cand).equals(e) {
                return Some(cand);
            }
        }
    }
    None
}
