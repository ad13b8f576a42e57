//! Polynomials over the prime field F_p, p < 2^62.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::ToPrimitive;

use super::rational::Rational;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolyP {
    pub p: u64,
    /// Lowest degree first, no trailing zeros.
    pub c: Vec<u64>,
}

pub fn mulmod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

pub fn powmod(mut a: u64, mut e: u64, p: u64) -> u64 {
    let mut r = 1 % p;
    a %= p;
    while e > 0 {
        if e & 1 == 1 {
            r = mulmod(r, a, p);
        }
        a = mulmod(a, a, p);
        e >>= 1;
    }
    r
}

pub fn invmod(a: u64, p: u64) -> Option<u64> {
    if a.is_multiple_of(p) {
        None
    } else {
        Some(powmod(a, p - 2, p))
    }
}

/// Image of a rational in F_p, `None` when p divides the denominator.
pub fn reduce_rational(q: &Rational, p: u64) -> Option<u64> {
    let pb = BigInt::from(p);
    let d = q.denom().mod_floor(&pb).to_u64().unwrap();
    let n = q.numer().mod_floor(&pb).to_u64().unwrap();
    Some(mulmod(n, invmod(d, p)?, p))
}

/// Deterministic Miller–Rabin for all `u64`.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    const BASES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    for &b in &BASES {
        if n.is_multiple_of(b) {
            return n == b;
        }
    }
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    'witness: for &b in &BASES {
        let mut x = powmod(b, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mulmod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

impl PolyP {
    pub fn new(p: u64, mut c: Vec<u64>) -> PolyP {
        for x in c.iter_mut() {
            *x %= p;
        }
        while c.last() == Some(&0) {
            c.pop();
        }
        PolyP { p, c }
    }

    pub fn zero(p: u64) -> PolyP {
        PolyP { p, c: Vec::new() }
    }

    pub fn one(p: u64) -> PolyP {
        PolyP::new(p, vec![1])
    }

    pub fn x(p: u64) -> PolyP {
        PolyP::new(p, vec![0, 1])
    }

    pub fn from_rationals(q: &[Rational], p: u64) -> Option<PolyP> {
        let c: Option<Vec<u64>> = q.iter().map(|x| reduce_rational(x, p)).collect();
        Some(PolyP::new(p, c?))
    }

    pub fn deg(&self) -> i64 {
        self.c.len() as i64 - 1
    }

    pub fn is_zero(&self) -> bool {
        self.c.is_empty()
    }

    pub fn lc(&self) -> u64 {
        *self.c.last().unwrap_or(&0)
    }

    pub fn add(&self, o: &PolyP) -> PolyP {
        let n = self.c.len().max(o.c.len());
        let c = (0..n).map(|i| (self.c.get(i).unwrap_or(&0) + o.c.get(i).unwrap_or(&0)) % self.p).collect();
        PolyP::new(self.p, c)
    }

    pub fn sub(&self, o: &PolyP) -> PolyP {
        let n = self.c.len().max(o.c.len());
        let p = self.p;
        let c = (0..n).map(|i| (self.c.get(i).unwrap_or(&0) + p - o.c.get(i).unwrap_or(&0)) % p).collect();
        PolyP::new(p, c)
    }

    pub fn scale(&self, k: u64) -> PolyP {
        PolyP::new(self.p, self.c.iter().map(|&x| mulmod(x, k, self.p)).collect())
    }

    pub fn mul(&self, o: &PolyP) -> PolyP {
        if self.is_zero() || o.is_zero() {
            return PolyP::zero(self.p);
        }
        let p = self.p;
        let mut acc = vec![0u128; self.c.len() + o.c.len() - 1];
        let pp = p as u128;
        for (i, &a) in self.c.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in o.c.iter().enumerate() {
                acc[i + j] = (acc[i + j] + a as u128 * b as u128) % pp;
            }
        }
        PolyP::new(p, acc.into_iter().map(|x| x as u64).collect())
    }

    pub fn divrem(&self, b: &PolyP) -> (PolyP, PolyP) {
        assert!(!b.is_zero(), "division by zero polynomial mod p");
        let p = self.p;
        let mut r = self.c.clone();
        let db = b.c.len() - 1;
        if r.len() < b.c.len() {
            return (PolyP::zero(p), self.clone());
        }
        let inv = invmod(b.lc(), p).unwrap();
        let mut q = vec![0u64; r.len() - db];
        for i in (db..r.len()).rev() {
            let t = mulmod(r[i], inv, p);
            if t == 0 {
                continue;
            }
            q[i - db] = t;
            for j in 0..=db {
                let s = mulmod(t, b.c[j], p);
                r[i - db + j] = (r[i - db + j] + p - s) % p;
            }
        }
        r.truncate(db);
        (PolyP::new(p, q), PolyP::new(p, r))
    }

    pub fn rem(&self, b: &PolyP) -> PolyP {
        self.divrem(b).1
    }

    pub fn monic(&self) -> PolyP {
        if self.is_zero() {
            return self.clone();
        }
        self.scale(invmod(self.lc(), self.p).unwrap())
    }

    pub fn gcd(&self, o: &PolyP) -> PolyP {
        let mut a = self.clone();
        let mut b = o.clone();
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    pub fn derivative(&self) -> PolyP {
        let p = self.p;
        PolyP::new(p, self.c.iter().enumerate().skip(1).map(|(i, &x)| mulmod(x, i as u64 % p, p)).collect())
    }

    /// `self^e mod m`.
    pub fn powmod(&self, mut e: u64, m: &PolyP) -> PolyP {
        let mut r = PolyP::one(self.p).rem(m);
        let mut b = self.rem(m);
        while e > 0 {
            if e & 1 == 1 {
                r = r.mul(&b).rem(m);
            }
            b = b.mul(&b).rem(m);
            e >>= 1;
        }
        r
    }

    pub fn is_squarefree(&self) -> bool {
        self.gcd(&self.derivative()).deg() == 0
    }

    /// Degrees of the irreducible factors of a squarefree polynomial
    /// (distinct-degree factorization).
    pub fn factor_degrees(&self) -> Vec<usize> {
        let p = self.p;
        let mut f = self.monic();
        let mut out = Vec::new();
        let x = PolyP::x(p);
        let mut h = x.clone();
        let mut d = 1usize;
        while f.deg() >= 2 * d as i64 {
            h = h.powmod(p, &f);
            let g = h.sub(&x).gcd(&f);
            if g.deg() > 0 {
                for _ in 0..(g.deg() as usize / d) {
                    out.push(d);
                }
                f = f.divrem(&g).0;
                h = h.rem(&f);
            }
            d += 1;
        }
        if f.deg() > 0 {
            out.push(f.deg() as usize);
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn factor_degrees_of_known_polys() {
        // x^4 + 1 splits into quadratics mod 3
        let f = PolyP::new(3, vec![1, 0, 0, 0, 1]);
        assert_eq!(f.factor_degrees(), vec![2, 2]);
        // x^3 - 2 mod 7: irreducible (2 is not a cube mod 7)
        let g = PolyP::new(7, vec![5, 0, 0, 1]);
        assert_eq!(g.factor_degrees(), vec![3]);
        // (x-1)(x-2)(x^2+1) mod 7
        let h = PolyP::new(7, vec![6, 1]).mul(&PolyP::new(7, vec![5, 1])).mul(&PolyP::new(7, vec![1, 0, 1]));
        assert_eq!(h.factor_degrees(), vec![1, 1, 2]);
    }

    #[test]
    fn primality() {
        let small: Vec<u64> = (0..40).filter(|&n| is_prime(n)).collect();
        assert_eq!(small, vec![2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37]);
        assert!(is_prime((1 << 61) - 1));
        assert!(!is_prime(3_215_031_751)); // strong pseudoprime to bases 2, 3, 5, 7
        assert!(!is_prime(((1u64 << 31) - 1) * 65537));
    }

    #[test]
    fn modular_inverse_and_reduction() {
        assert_eq!(invmod(3, 7), Some(5));
        let q = Rational::new(1.into(), 4.into());
        assert_eq!(reduce_rational(&q, 7), Some(2));
        assert_eq!(reduce_rational(&q, 2), None);
    }
}
