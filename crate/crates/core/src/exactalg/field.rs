//! Coefficient fields: Q, number fields Q[t]/(m(t)), and towers of simple
//! extensions built on demand.
//!
//! Every extension carries one complex embedding of its generator. A modulus
//! that is not known to be irreducible is handled by dynamic evaluation: when
//! an element turns out to be a zero divisor, the modulus is replaced by the
//! factor that vanishes at the embedded root. Results computed before the
//! split remain valid in the new presentation.

use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::{Arc, Mutex, OnceLock, RwLock};

use num_traits::{One, Signed, Zero};

use super::poly::{self as sp};
use super::rational::{bit_size, format_rational, sqrt_exact, Rational};
use super::roots::{aberth, sort_roots};
use crate::apfloat::{Complex, Real};
use crate::error::{Error, Result};

static NEXT_ID: AtomicU64 = AtomicU64::new(1);

/// Precision (bits) of the stored embedding right after construction.
const ROOT_PREC: u32 = 256;

pub struct Extension {
    id: u64,
    base: Field,
    name: String,
    level: usize,
    modulus: RwLock<Arc<Vec<Elem>>>,
    presentation: Vec<Elem>,
    root_index: usize,
    root: RwLock<Complex>,
    certified: bool,
}

#[derive(Clone)]
pub enum Field {
    Rational,
    Ext(Arc<Extension>),
}

#[derive(Clone)]
pub enum Elem {
    Q(Rational),
    /// Coefficients over the base field in the power basis, lowest first.
    Ext(Arc<Extension>, Vec<Elem>),
}

impl fmt::Debug for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Field::Rational => write!(f, "Q"),
            Field::Ext(x) => write!(f, "{:?}[{}]/({})", x.base, x.name, sp::format_slice(&x.modulus(), &x.name)),
        }
    }
}

impl Extension {
    pub fn modulus(&self) -> Arc<Vec<Elem>> {
        self.modulus.read().unwrap().clone()
    }

    fn degree(&self) -> usize {
        self.modulus.read().unwrap().len() - 1
    }

    fn base_zero(&self) -> Elem {
        self.base.zero()
    }

    /// The embedded root to at least `prec` bits.
    fn root(&self, prec: u32) -> Complex {
        {
            let r = self.root.read().unwrap();
            if r.prec() >= prec {
                return r.with_prec(prec);
            }
        }
        let mut z = self.root.read().unwrap().clone();
        let mut p = z.prec();
        while p < prec {
            let next = (2 * p).min(prec + 32);
            let m = self.modulus();
            let coeffs: Vec<Complex> = m.iter().map(|c| c.to_complex(next + 16)).collect();
            z = z.with_prec(next + 16);
            for _ in 0..3 {
                let (f, df) = horner_with_derivative(&coeffs, &z);
                if df.is_zero() {
                    break;
                }
                z = &z - &(&f / &df);
            }
            p = next;
            z = z.with_prec(p);
        }
        let mut w = self.root.write().unwrap();
        if w.prec() < z.prec() {
            *w = z.clone();
        }
        z.with_prec(prec)
    }

    /// Replaces the modulus by whichever of `g` and `modulus / g` vanishes at
    /// the embedded root. Returns true when it was `g`.
    fn split(&self, g: Vec<Elem>) -> bool {
        let m = self.modulus();
        let (h, r) = sp::divrem_slices(&m, &g, &self.base);
        debug_assert!(r.is_empty(), "split factor must divide the modulus");
        let _ = r;
        let mut p = 128u32;
        loop {
            let z = self.root(p + 32);
            let (vg, bg) = eval_slice_bound(&g, &z, p + 32);
            let (vh, bh) = eval_slice_bound(&h, &z, p + 32);
            let rg = vg.log2_abs() - bg.log2_abs();
            let rh = vh.log2_abs() - bh.log2_abs();
            let tiny = -(p as f64) * 0.75;
            let clear = -(p as f64) * 0.25;
            let choose_g = if rg < tiny && rh > clear {
                Some(true)
            } else if rh < tiny && rg > clear {
                Some(false)
            } else {
                None
            };
            if let Some(cg) = choose_g {
                let chosen = if cg { g } else { h };
                let chosen = sp::monic_slice(&chosen, &self.base);
                *self.modulus.write().unwrap() = Arc::new(chosen);
                return cg;
            }
            p *= 2;
            assert!(p <= 1 << 16, "could not separate modulus factors numerically");
        }
    }
}

fn horner_with_derivative(c: &[Complex], z: &Complex) -> (Complex, Complex) {
    let p = z.prec();
    let mut f = Complex::zero(p);
    let mut df = Complex::zero(p);
    for a in c.iter().rev() {
        df = &(&df * z) + &f;
        f = &(&f * z) + a;
    }
    (f, df)
}

/// Value and absolute bound of a polynomial with field coefficients at `z`.
fn eval_slice_bound(c: &[Elem], z: &Complex, prec: u32) -> (Complex, Real) {
    let az = z.abs();
    let mut v = Complex::zero(prec);
    let mut b = Real::zero(prec);
    for a in c.iter().rev() {
        let (va, ba) = a.eval_bound(prec);
        v = &(&v * z) + &va;
        b = &(&b * &az) + &ba;
    }
    (v, b)
}

fn registry() -> &'static Mutex<HashMap<String, Field>> {
    static REG: OnceLock<Mutex<HashMap<String, Field>>> = OnceLock::new();
    REG.get_or_init(|| Mutex::new(HashMap::new()))
}

impl Field {
    pub fn is_rational(&self) -> bool {
        matches!(self, Field::Rational)
    }

    pub fn id(&self) -> u64 {
        match self {
            Field::Rational => 0,
            Field::Ext(x) => x.id,
        }
    }

    pub fn same(&self, other: &Field) -> bool {
        self.id() == other.id()
    }

    pub fn level(&self) -> usize {
        match self {
            Field::Rational => 0,
            Field::Ext(x) => x.level,
        }
    }

    pub fn base(&self) -> Option<&Field> {
        match self {
            Field::Rational => None,
            Field::Ext(x) => Some(&x.base),
        }
    }

    pub fn extension(&self) -> Option<&Arc<Extension>> {
        match self {
            Field::Rational => None,
            Field::Ext(x) => Some(x),
        }
    }

    /// Degree over the immediate base (1 for Q).
    pub fn degree(&self) -> usize {
        match self {
            Field::Rational => 1,
            Field::Ext(x) => x.degree(),
        }
    }

    pub fn absolute_degree(&self) -> usize {
        match self {
            Field::Rational => 1,
            Field::Ext(x) => x.degree() * x.base.absolute_degree(),
        }
    }

    /// True when `other` is this field or lies below it in the tower.
    pub fn contains(&self, other: &Field) -> bool {
        let mut f = self.clone();
        loop {
            if f.same(other) {
                return true;
            }
            if f.level() <= other.level() {
                return false;
            }
            f = f.base().unwrap().clone();
        }
    }

    pub fn join(a: &Field, b: &Field) -> Option<Field> {
        if a.contains(b) {
            Some(a.clone())
        } else if b.contains(a) {
            Some(b.clone())
        } else {
            None
        }
    }

    pub fn zero(&self) -> Elem {
        match self {
            Field::Rational => Elem::Q(Rational::zero()),
            Field::Ext(x) => Elem::Ext(x.clone(), Vec::new()),
        }
    }

    pub fn one(&self) -> Elem {
        self.from_rational(Rational::one())
    }

    pub fn from_rational(&self, q: Rational) -> Elem {
        self.lift(&Elem::Q(q)).unwrap()
    }

    pub fn from_i64(&self, v: i64) -> Elem {
        self.from_rational(Rational::from_integer(v.into()))
    }

    /// The generator of the top extension.
    pub fn gen(&self) -> Elem {
        match self {
            Field::Rational => panic!("Q has no generator"),
            Field::Ext(x) => {
                if x.degree() == 1 {
                    // t is the root of a linear modulus t + c
                    let m = x.modulus();
                    return Elem::Ext(x.clone(), vec![-&m[0]]).normalized();
                }
                Elem::Ext(x.clone(), vec![x.base_zero(), x.base.one()])
            }
        }
    }

    /// Embeds an element of a subfield.
    pub fn lift(&self, e: &Elem) -> Option<Elem> {
        let ef = e.field();
        if self.same(&ef) {
            return Some(e.clone());
        }
        match self {
            Field::Rational => None,
            Field::Ext(x) => {
                if x.level <= ef.level() {
                    return None;
                }
                let inner = x.base.lift(e)?;
                if inner.is_structural_zero() {
                    Some(Elem::Ext(x.clone(), Vec::new()))
                } else {
                    Some(Elem::Ext(x.clone(), vec![inner]))
                }
            }
        }
    }

    pub fn lift_checked(&self, e: &Elem) -> Result<Elem> {
        self.lift(e).ok_or(Error::FieldMismatch)
    }

    /// Current modulus of the top extension over its base.
    pub fn modulus(&self) -> Option<Arc<Vec<Elem>>> {
        self.extension().map(|x| x.modulus())
    }

    pub fn name(&self) -> &str {
        match self {
            Field::Rational => "",
            Field::Ext(x) => &x.name,
        }
    }

    pub fn root_index(&self) -> Option<usize> {
        self.extension().map(|x| x.root_index)
    }

    /// The embedded generator at `prec` bits.
    pub fn root(&self, prec: u32) -> Option<Complex> {
        self.extension().map(|x| x.root(prec))
    }

    /// Whether every modulus in the tower is certified irreducible.
    pub fn is_certified(&self) -> bool {
        match self {
            Field::Rational => true,
            Field::Ext(x) => x.certified && x.base.is_certified(),
        }
    }

    /// Presentation polynomial as given at construction.
    pub fn presentation(&self) -> Option<&[Elem]> {
        self.extension().map(|x| x.presentation.as_slice())
    }

    /// Simple extension of `base` by a root of `poly` (coefficients over
    /// `base`, lowest first). `root_index` picks the embedding among the
    /// distinct roots in canonical order (real roots ascending, then complex
    /// roots by real then imaginary part). Over Q the modulus is factored and
    /// replaced by the irreducible factor of the chosen root.
    pub fn extend(base: &Field, poly: &[Elem], root_index: usize, name: &str) -> Result<Field> {
        let mut m: Vec<Elem> = poly.iter().map(|c| base.lift_checked(c)).collect::<Result<_>>()?;
        sp::trim_dyn(&mut m);
        if m.len() < 2 {
            return Err(Error::InvalidArgument("extension modulus must have positive degree".into()));
        }
        let presentation = m.clone();
        let m = sp::monic_slice(&m, base);
        let dm = sp::derivative_slice(&m);
        let g = sp::gcd_slices(&m, &dm, base);
        let m = if g.len() > 1 { sp::divrem_slices(&m, &g, base).0 } else { m };
        let roots = numeric_roots(&m, ROOT_PREC)?;
        if root_index >= roots.len() {
            return Err(Error::RootSelectorInvalid { index: root_index, count: roots.len() });
        }
        let root = roots[root_index].clone();
        let (m, certified) = if base.is_rational() {
            let qs: Vec<Rational> = m.iter().map(|c| c.as_rational().unwrap()).collect();
            let fac = super::factor::factor_rational(&qs);
            let best = fac
                .factors
                .iter()
                .map(|(f, _)| {
                    let cs: Vec<Complex> = f.iter().map(|q| Complex::from_rational(q, ROOT_PREC)).collect();
                    let v = horner_with_derivative(&cs, &root).0;
                    let scale: f64 = f.iter().map(|q| Real::from_rational(q, 64).abs().log2_abs()).fold(f64::NEG_INFINITY, f64::max);
                    (v.log2_abs() - scale, f)
                })
                .min_by(|a, b| a.0.partial_cmp(&b.0).unwrap())
                .map(|(_, f)| f.clone())
                .unwrap();
            let lc = best.last().unwrap().clone();
            let mm: Vec<Elem> = best.iter().map(|q| Elem::Q(q / &lc)).collect();
            (mm, fac.certified)
        } else {
            (m, false)
        };
        Ok(Field::assemble(base, presentation, m, root, root_index, name, certified))
    }

    fn assemble(base: &Field, presentation: Vec<Elem>, m: Vec<Elem>, root: Complex, root_index: usize, name: &str, certified: bool) -> Field {
        let level = base.level() + 1;
        let ext = Extension {
            id: NEXT_ID.fetch_add(1, Ordering::Relaxed),
            base: base.clone(),
            name: name.to_string(),
            level,
            modulus: RwLock::new(Arc::new(m)),
            presentation,
            root_index,
            root: RwLock::new(root),
            certified,
        };
        let f = Field::Ext(Arc::new(ext));
        // polish the stored root against the final modulus
        f.root(ROOT_PREC);
        f
    }

    /// Absolute number field for a polynomial already known to be an
    /// irreducible factor (from `factor_rational`), skipping the
    /// factorization; `certified` is carried over from that factorization.
    pub fn number_field_from_factor(min_poly: &[Rational], root_index: usize, name: &str, certified: bool) -> Result<Field> {
        let key = format!("{}|{}|{}", name, root_index, min_poly.iter().map(format_rational).collect::<Vec<_>>().join(","));
        if let Some(f) = registry().lock().unwrap().get(&key) {
            return Ok(f.clone());
        }
        let lc = min_poly.last().cloned().filter(|c| !c.is_zero()).ok_or_else(|| Error::InvalidArgument("zero minimal polynomial".into()))?;
        let m: Vec<Elem> = min_poly.iter().map(|q| Elem::Q(q / &lc)).collect();
        if m.len() < 2 {
            return Err(Error::InvalidArgument("extension modulus must have positive degree".into()));
        }
        let roots = numeric_roots(&m, ROOT_PREC)?;
        if root_index >= roots.len() {
            return Err(Error::RootSelectorInvalid { index: root_index, count: roots.len() });
        }
        let f = Field::assemble(&Field::Rational, m.clone(), m, roots[root_index].clone(), root_index, name, certified);
        let mut reg = registry().lock().unwrap();
        Ok(reg.entry(key).or_insert(f).clone())
    }

    /// Absolute number field Q[name]/(min_poly) with the embedding
    /// `root_index`; identical requests return the same field.
    pub fn number_field(min_poly: &[Rational], root_index: usize, name: &str) -> Result<Field> {
        let key = format!("{}|{}|{}", name, root_index, min_poly.iter().map(format_rational).collect::<Vec<_>>().join(","));
        if let Some(f) = registry().lock().unwrap().get(&key) {
            return Ok(f.clone());
        }
        let coeffs: Vec<Elem> = min_poly.iter().map(|q| Elem::Q(q.clone())).collect();
        let f = Field::extend(&Field::Rational, &coeffs, root_index, name)?;
        let mut reg = registry().lock().unwrap();
        Ok(reg.entry(key).or_insert(f).clone())
    }

    /// All embeddings of an absolute number field, as fields sharing the
    /// presentation, in canonical root order.
    pub fn conjugates(&self) -> Result<Vec<Field>> {
        let x = self.extension().ok_or_else(|| Error::InvalidArgument("Q has no conjugates".into()))?;
        if !x.base.is_rational() {
            return Err(Error::InvalidArgument("conjugates are only defined for absolute fields".into()));
        }
        let m: Vec<Rational> = x.modulus().iter().map(|c| c.as_rational().unwrap()).collect();
        (0..m.len() - 1).map(|j| Field::number_field(&m, j, &x.name)).collect()
    }
}

/// Distinct numeric roots of a squarefree polynomial with field
/// coefficients, in canonical order.
pub fn numeric_roots(m: &[Elem], prec: u32) -> Result<Vec<Complex>> {
    let mut ladder = prec;
    for _ in 0..3 {
        let cs: Vec<Complex> = m.iter().map(|c| c.to_complex(ladder + 32)).collect();
        if let Some(mut r) = aberth(&cs, ladder) {
            sort_roots(&mut r);
            return Ok(r);
        }
        ladder *= 2;
    }
    Err(Error::PrecisionExhausted("extension roots".into()))
}

impl Elem {
    pub fn field(&self) -> Field {
        match self {
            Elem::Q(_) => Field::Rational,
            Elem::Ext(x, _) => Field::Ext(x.clone()),
        }
    }

    pub fn is_structural_zero(&self) -> bool {
        match self {
            Elem::Q(q) => q.is_zero(),
            Elem::Ext(_, v) => v.is_empty(),
        }
    }

    /// Reduces modulo the current modulus and trims zero coefficients.
    pub fn normalized(self) -> Elem {
        match self {
            Elem::Q(_) => self,
            Elem::Ext(x, v) => {
                let v = reduce(&x, v);
                Elem::Ext(x, v)
            }
        }
    }

    /// Exact value if the element is structurally rational.
    pub fn as_rational(&self) -> Option<Rational> {
        match self {
            Elem::Q(q) => Some(q.clone()),
            Elem::Ext(x, v) => {
                let v = reduce(x, v.clone());
                match v.len() {
                    0 => Some(Rational::zero()),
                    1 => v[0].as_rational(),
                    _ => None,
                }
            }
        }
    }

    /// Coordinates over the immediate base in the power basis, padded to the
    /// current degree.
    pub fn coords(&self) -> Vec<Elem> {
        match self {
            Elem::Q(q) => vec![Elem::Q(q.clone())],
            Elem::Ext(x, v) => {
                let mut v = reduce(x, v.clone());
                let d = x.degree();
                while v.len() < d {
                    v.push(x.base_zero());
                }
                v
            }
        }
    }

    /// Rational coordinates for elements of an absolute number field.
    pub fn rational_coords(&self) -> Option<Vec<Rational>> {
        self.coords().iter().map(|c| c.as_rational()).collect()
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Elem::Q(q) => q.is_zero(),
            Elem::Ext(x, v) => {
                let v = reduce(x, v.clone());
                match v.len() {
                    0 => true,
                    1 => v[0].is_zero(),
                    _ => ext_is_zero(x, v),
                }
            }
        }
    }

    pub fn is_one(&self) -> bool {
        (self - &self.field().one()).is_zero()
    }

    pub fn equals(&self, other: &Elem) -> bool {
        (self - other).is_zero()
    }

    pub fn inv(&self) -> Option<Elem> {
        match self {
            Elem::Q(q) => {
                if q.is_zero() {
                    None
                } else {
                    Some(Elem::Q(q.recip()))
                }
            }
            Elem::Ext(x, v) => ext_inv(x, v.clone()),
        }
    }

    pub fn checked_div(&self, other: &Elem) -> Option<Elem> {
        Some(self * &other.inv()?)
    }

    pub fn pow(&self, n: u64) -> Elem {
        let mut result = self.field().one();
        let mut base = self.clone();
        let mut k = n;
        while k > 0 {
            if k & 1 == 1 {
                result = &result * &base;
            }
            k >>= 1;
            if k > 0 {
                base = &base * &base;
            }
        }
        result
    }

    /// Value under the chosen embedding.
    pub fn to_complex(&self, prec: u32) -> Complex {
        match self {
            Elem::Q(q) => Complex::from_rational(q, prec),
            Elem::Ext(x, v) => {
                let v = reduce(x, v.clone());
                if v.is_empty() {
                    return Complex::zero(prec);
                }
                let z = x.root(prec + 16);
                let mut acc = Complex::zero(prec + 16);
                for c in v.iter().rev() {
                    acc = &(&acc * &z) + &c.to_complex(prec + 16);
                }
                acc.with_prec(prec)
            }
        }
    }

    /// Value together with the sum of absolute values of its terms.
    pub fn eval_bound(&self, prec: u32) -> (Complex, Real) {
        match self {
            Elem::Q(q) => {
                let c = Complex::from_rational(q, prec);
                let b = c.re.abs();
                (c, b)
            }
            Elem::Ext(x, v) => {
                let v = reduce(x, v.clone());
                let z = x.root(prec + 16);
                eval_slice_bound(&v, &z, prec + 16)
            }
        }
    }

    /// Largest coefficient bit size over the whole tower.
    pub fn bit_size(&self) -> u64 {
        match self {
            Elem::Q(q) => bit_size(q),
            Elem::Ext(_, v) => v.iter().map(|c| c.bit_size()).max().unwrap_or(0),
        }
    }

    /// Exact square root inside the field, if one is found.
    ///
    /// Over Q this is decisive. For absolute number fields the candidate is
    /// reconstructed from sign choices at every embedding and verified
    /// exactly; if the coordinates are too tall for the recognition ladder
    /// the answer is `None`. In deeper towers only square roots already in
    /// the base are found.
    pub fn sqrt(&self) -> Option<Elem> {
        match self {
            Elem::Q(q) => sqrt_exact(q).map(Elem::Q),
            Elem::Ext(x, v) => {
                let v = reduce(x, v.clone());
                if v.len() <= 1 {
                    let b = v.first().cloned().unwrap_or_else(|| x.base_zero());
                    if let Some(r) = b.sqrt() {
                        return Some(Field::Ext(x.clone()).lift(&r).unwrap());
                    }
                }
                if x.base.is_rational() {
                    super::nfsqrt::sqrt_absolute(self)
                } else {
                    None
                }
            }
        }
    }

    pub fn to_string_var(&self) -> String {
        match self {
            Elem::Q(q) => format_rational(q),
            Elem::Ext(x, v) => {
                let v = reduce(x, v.clone());
                sp::format_slice(&v, &x.name)
            }
        }
    }

    /// Whether the string form needs parentheses when used as a factor.
    pub fn is_compound(&self) -> bool {
        match self {
            Elem::Q(_) => false,
            Elem::Ext(x, v) => {
                let v = reduce(x, v.clone());
                let nz = v.iter().filter(|c| !c.is_structural_zero()).count();
                nz > 1 || v.iter().any(|c| c.is_compound())
            }
        }
    }
}

impl fmt::Display for Elem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_string_var())
    }
}

impl fmt::Debug for Elem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_string_var())
    }
}

impl PartialEq for Elem {
    fn eq(&self, other: &Elem) -> bool {
        self.equals(other)
    }
}

fn trim_structural(v: &mut Vec<Elem>) {
    while v.last().is_some_and(|c| c.is_structural_zero()) {
        v.pop();
    }
}

fn reduce(x: &Arc<Extension>, mut v: Vec<Elem>) -> Vec<Elem> {
    trim_structural(&mut v);
    let m = x.modulus();
    let d = m.len() - 1;
    if v.len() <= d {
        return v;
    }
    let zero = x.base_zero();
    for i in (d..v.len()).rev() {
        let c = std::mem::replace(&mut v[i], zero.clone());
        if c.is_structural_zero() {
            continue;
        }
        for j in 0..d {
            if m[j].is_structural_zero() {
                continue;
            }
            v[i - d + j] = &v[i - d + j] - &(&c * &m[j]);
        }
    }
    v.truncate(d);
    trim_structural(&mut v);
    v
}

fn ext_is_zero(x: &Arc<Extension>, v: Vec<Elem>) -> bool {
    let prec = 128;
    let z = x.root(prec + 16);
    let (val, bound) = eval_slice_bound(&v, &z, prec + 16);
    if !bound.is_zero() && val.log2_abs() > bound.log2_abs() - 64.0 {
        return false;
    }
    let m = x.modulus();
    let g = sp::gcd_slices(&v, &m, &x.base);
    if g.len() <= 1 {
        return false;
    }
    if g.len() == m.len() {
        return true;
    }
    x.split(g)
}

fn ext_inv(x: &Arc<Extension>, v: Vec<Elem>) -> Option<Elem> {
    loop {
        let w = reduce(x, v.clone());
        if w.is_empty() {
            return None;
        }
        if w.len() == 1 {
            let b = w[0].inv()?;
            return Some(Elem::Ext(x.clone(), vec![b]));
        }
        let m = x.modulus();
        let (g, s, _) = sp::xgcd_slices(&w, &m, &x.base);
        if g.is_empty() {
            return None;
        }
        if g.len() == 1 {
            let ginv = g[0].inv()?;
            let s: Vec<Elem> = s.iter().map(|c| c * &ginv).collect();
            return Some(Elem::Ext(x.clone(), reduce(x, s)));
        }
        if g.len() == m.len() || x.split(g) {
            return None;
        }
    }
}

fn unify(a: &Elem, b: &Elem) -> (Elem, Elem) {
    let fa = a.field();
    let fb = b.field();
    if fa.same(&fb) {
        return (a.clone(), b.clone());
    }
    let f = Field::join(&fa, &fb).unwrap_or_else(|| panic!("field mismatch: {fa:?} vs {fb:?}"));
    (f.lift(a).unwrap(), f.lift(b).unwrap())
}

fn add_sub(a: &Elem, b: &Elem, sub: bool) -> Elem {
    if let (Elem::Q(x), Elem::Q(y)) = (a, b) {
        return Elem::Q(if sub { x - y } else { x + y });
    }
    let (a, b) = unify(a, b);
    match (a, b) {
        (Elem::Ext(x, va), Elem::Ext(_, vb)) => {
            let n = va.len().max(vb.len());
            let zero = x.base_zero();
            let mut out = Vec::with_capacity(n);
            for i in 0..n {
                let ca = va.get(i).unwrap_or(&zero);
                let cb = vb.get(i).unwrap_or(&zero);
                out.push(if sub { ca - cb } else { ca + cb });
            }
            trim_structural(&mut out);
            Elem::Ext(x, out)
        }
        _ => unreachable!(),
    }
}

fn mul_elem(a: &Elem, b: &Elem) -> Elem {
    if let (Elem::Q(x), Elem::Q(y)) = (a, b) {
        return Elem::Q(x * y);
    }
    if a.is_structural_zero() || b.is_structural_zero() {
        let (a, _) = unify(a, b);
        return a.field().zero();
    }
    let (a, b) = unify(a, b);
    match (a, b) {
        (Elem::Ext(x, va), Elem::Ext(_, vb)) => {
            if va.len() == 1 {
                let mut out: Vec<Elem> = vb.iter().map(|c| &va[0] * c).collect();
                trim_structural(&mut out);
                return Elem::Ext(x, out);
            }
            if vb.len() == 1 {
                let mut out: Vec<Elem> = va.iter().map(|c| c * &vb[0]).collect();
                trim_structural(&mut out);
                return Elem::Ext(x, out);
            }
            let zero = x.base_zero();
            let mut out = vec![zero; va.len() + vb.len() - 1];
            for (i, ca) in va.iter().enumerate() {
                if ca.is_structural_zero() {
                    continue;
                }
                for (j, cb) in vb.iter().enumerate() {
                    if cb.is_structural_zero() {
                        continue;
                    }
                    out[i + j] = &out[i + j] + &(ca * cb);
                }
            }
            let out = reduce(&x, out);
            Elem::Ext(x, out)
        }
        _ => unreachable!(),
    }
}

impl<'a> Add<&'a Elem> for &'a Elem {
    type Output = Elem;
    fn add(self, rhs: &Elem) -> Elem {
        add_sub(self, rhs, false)
    }
}

impl<'a> Sub<&'a Elem> for &'a Elem {
    type Output = Elem;
    fn sub(self, rhs: &Elem) -> Elem {
        add_sub(self, rhs, true)
    }
}

impl<'a> Mul<&'a Elem> for &'a Elem {
    type Output = Elem;
    fn mul(self, rhs: &Elem) -> Elem {
        mul_elem(self, rhs)
    }
}

impl Neg for &Elem {
    type Output = Elem;
    fn neg(self) -> Elem {
        match self {
            Elem::Q(q) => Elem::Q(-q),
            Elem::Ext(x, v) => Elem::Ext(x.clone(), v.iter().map(|c| -c).collect()),
        }
    }
}

impl Neg for Elem {
    type Output = Elem;
    fn neg(self) -> Elem {
        -&self
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr<Elem> for Elem {
            type Output = Elem;
            fn $m(self, rhs: Elem) -> Elem {
                (&self).$m(&rhs)
            }
        }
        impl<'a> $tr<&'a Elem> for Elem {
            type Output = Elem;
            fn $m(self, rhs: &Elem) -> Elem {
                (&self).$m(rhs)
            }
        }
        impl<'a> $tr<Elem> for &'a Elem {
            type Output = Elem;
            fn $m(self, rhs: Elem) -> Elem {
                self.$m(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

/// Sign of the real number represented by a structurally rational element.
pub fn rational_sign(e: &Elem) -> Option<i32> {
    e.as_rational().map(|q| {
        if q.is_zero() {
            0
        } else if q.is_positive() {
            1
        } else {
            -1
        }
    })
}
