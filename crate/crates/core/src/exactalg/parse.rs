//! Text formats: polynomials such as `x^4+x+1/4`, number-field elements
//! such as `t^2+1 : 2*t+1/3`.

use num_bigint::BigInt;
use num_traits::ToPrimitive;

use super::field::{Elem, Field};
use super::poly::FieldPoly;
use super::rational::Rational;
use crate::error::{Error, Result};

const MAX_DEPTH: usize = 64;
const MAX_EXPONENT: u32 = 512;
const MAX_DEGREE: usize = 4096;

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(Rational),
    Ident(String),
    Op(char),
}

fn lex(s: &str) -> Result<Vec<Tok>> {
    let b: Vec<char> = s.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < b.len() {
        let c = b[i];
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() || c == '.' {
            let st = i;
            while i < b.len() && (b[i].is_ascii_digit() || b[i] == '.') {
                i += 1;
            }
            let lit: String = b[st..i].iter().collect();
            let q = crate::apfloat::parse_decimal_rational(&lit).ok_or_else(|| Error::Parse(format!("bad number '{lit}'")))?;
            out.push(Tok::Num(q));
        } else if c.is_alphabetic() || c == '_' {
            let st = i;
            while i < b.len() && (b[i].is_alphanumeric() || b[i] == '_') {
                i += 1;
            }
            out.push(Tok::Ident(b[st..i].iter().collect()));
        } else if "+-*/^()".contains(c) {
            out.push(Tok::Op(c));
            i += 1;
        } else {
            return Err(Error::Parse(format!("unexpected character '{c}'")));
        }
    }
    Ok(out)
}

struct Parser<'a> {
    toks: Vec<Tok>,
    pos: usize,
    field: Field,
    var: &'a str,
    consts: &'a [(String, Elem)],
}

impl Parser<'_> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos)
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(&Tok::Op(c)) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn check(p: FieldPoly) -> Result<FieldPoly> {
        if p.degree().unwrap_or(0) > MAX_DEGREE {
            return Err(Error::Parse("degree too large".into()));
        }
        Ok(p)
    }

    fn expr(&mut self, depth: usize) -> Result<FieldPoly> {
        if depth > MAX_DEPTH {
            return Err(Error::Parse("expression nested too deeply".into()));
        }
        let mut acc = if self.eat('-') {
            self.term(depth)?.neg()
        } else {
            self.eat('+');
            self.term(depth)?
        };
        loop {
            if self.eat('+') {
                acc = acc.add(&self.term(depth)?);
            } else if self.eat('-') {
                acc = acc.sub(&self.term(depth)?);
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self, depth: usize) -> Result<FieldPoly> {
        let mut acc = self.power(depth)?;
        loop {
            if self.eat('*') {
                acc = Self::check(acc.mul(&self.power(depth)?))?;
            } else if self.eat('/') {
                let d = self.power(depth)?;
                if !d.is_constant() || d.is_zero() {
                    return Err(Error::Parse("division only by nonzero constants".into()));
                }
                let inv = d.lc().inv().ok_or_else(|| Error::Parse("division by zero".into()))?;
                acc = acc.scale(&inv);
            } else {
                return Ok(acc);
            }
        }
    }

    fn power(&mut self, depth: usize) -> Result<FieldPoly> {
        let base = self.atom(depth)?;
        if self.eat('^') {
            let e = match self.toks.get(self.pos) {
                Some(Tok::Num(q)) if q.is_integer() => q.to_integer(),
                _ => return Err(Error::Parse("exponent must be a non-negative integer".into())),
            };
            self.pos += 1;
            let e = e.to_u32().filter(|&e| e <= MAX_EXPONENT).ok_or_else(|| Error::Parse("exponent too large".into()))?;
            if base.degree().unwrap_or(0) * e as usize > MAX_DEGREE {
                return Err(Error::Parse("degree too large".into()));
            }
            return Ok(base.pow(e));
        }
        Ok(base)
    }

    fn atom(&mut self, depth: usize) -> Result<FieldPoly> {
        match self.toks.get(self.pos).cloned() {
            Some(Tok::Num(q)) => {
                self.pos += 1;
                Ok(FieldPoly::constant(&self.field, self.field.from_rational(q)))
            }
            Some(Tok::Ident(name)) => {
                self.pos += 1;
                if name == self.var {
                    return Ok(FieldPoly::x(&self.field));
                }
                if let Some((_, e)) = self.consts.iter().find(|(n, _)| *n == name) {
                    return Ok(FieldPoly::constant(&self.field, self.field.lift_checked(e)?));
                }
                Err(Error::Parse(format!("unknown symbol '{name}'")))
            }
            Some(Tok::Op('(')) => {
                self.pos += 1;
                let e = self.expr(depth + 1)?;
                if !self.eat(')') {
                    return Err(Error::Parse("missing ')'".into()));
                }
                Ok(e)
            }
            Some(Tok::Op('-')) => {
                self.pos += 1;
                if depth > MAX_DEPTH {
                    return Err(Error::Parse("expression nested too deeply".into()));
                }
                Ok(self.atom(depth + 1)?.neg())
            }
            other => Err(Error::Parse(format!("unexpected token {other:?}"))),
        }
    }
}

/// Parses a polynomial in `var` over `field`; `consts` names field elements
/// usable as coefficients.
pub fn parse_poly_in(s: &str, field: &Field, var: &str, consts: &[(String, Elem)]) -> Result<FieldPoly> {
    let toks = lex(s)?;
    if toks.is_empty() {
        return Err(Error::Parse("empty input".into()));
    }
    let mut p = Parser { toks, pos: 0, field: field.clone(), var, consts };
    let out = p.expr(0)?;
    if p.pos != p.toks.len() {
        return Err(Error::Parse(format!("trailing input at token {}", p.pos)));
    }
    Ok(out)
}

/// A polynomial over Q in `x`.
pub fn parse_poly(s: &str) -> Result<FieldPoly> {
    parse_poly_in(s, &Field::Rational, "x", &[])
}

/// The single variable used in a polynomial text, if any.
pub fn detect_var(s: &str) -> Result<Option<String>> {
    let mut var: Option<String> = None;
    for t in lex(s)? {
        if let Tok::Ident(n) = t {
            match &var {
                Some(v) if *v != n => return Err(Error::Parse(format!("more than one variable: '{v}' and '{n}'"))),
                _ => var = Some(n),
            }
        }
    }
    Ok(var)
}

/// Parses a number field `minpoly` in one variable, with the embedding
/// `root_index`.
pub fn parse_number_field(minpoly: &str, root_index: usize) -> Result<Field> {
    let var = detect_var(minpoly)?.ok_or_else(|| Error::Parse("minimal polynomial needs a variable".into()))?;
    let m = parse_poly_in(minpoly, &Field::Rational, &var, &[])?;
    if m.deg() < 1 {
        return Err(Error::Parse("minimal polynomial must have positive degree".into()));
    }
    let q = m.rational_coeffs().unwrap();
    Field::number_field(&q, root_index, &var)
}

/// Parses `minpoly : element` (or a bare rational) into a field element.
pub fn parse_nf_elem(s: &str, root_index: usize) -> Result<Elem> {
    match s.split_once(':') {
        None => Ok(Elem::Q(rational_from_text(s)?)),
        Some((m, e)) => {
            let k = parse_number_field(m, root_index)?;
            let p = parse_poly_in(e, &Field::Rational, k.name(), &[])?;
            let t = k.gen();
            Ok(p.coeffs().iter().rev().fold(k.zero(), |acc, c| &(&acc * &t) + c))
        }
    }
}

/// Text form `minpoly : element` for elements of absolute number fields and
/// plain fractions for rationals.
pub fn format_nf_elem(e: &Elem) -> String {
    match e.field() {
        Field::Rational => e.to_string_var(),
        k => {
            let m = k.modulus().unwrap();
            format!("{} : {}", super::poly::format_slice(&m, k.name()), e.to_string_var())
        }
    }
}

/// Integer literal helper used by the other parsers.
pub fn parse_bigint(s: &str) -> Result<BigInt> {
    s.trim().parse::<BigInt>().map_err(|_| Error::Parse(format!("bad integer '{s}'")))
}

/// A rational constant expression such as `-3/4` or `(1+2)/5`.
pub fn rational_from_text(s: &str) -> Result<Rational> {
    let p = parse_poly_in(s, &Field::Rational, "\u{0}", &[])?;
    if p.deg() > 0 {
        return Err(Error::Parse("expected a constant".into()));
    }
    Ok(p.coeff(0).as_rational().unwrap())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::rational::{int, rat};

    #[test]
    fn polynomials_round_trip_through_text() {
        for s in ["x^4+x+1/4", "2*x^2+1", "-3*x^2-x", "x", "-1/7", "x^6-5*x^3+2"] {
            assert_eq!(parse_poly(s).unwrap().to_string(), s);
        }
        let p = parse_poly("(x+1)^2 - 2*(x + 1/2)").unwrap();
        assert_eq!(p.to_string(), "x^2");
        assert_eq!(parse_poly("0.25*x").unwrap().to_string(), "1/4*x");
    }

    #[test]
    fn rejects_malformed_input() {
        for s in ["", "x^", "x^-1", "(x+1", "x/x", "y+x", "x^100000", "1/0", "x**2", "#"] {
            assert!(parse_poly(s).is_err(), "{s}");
        }
        let deep = "(".repeat(500) + "x" + &")".repeat(500);
        assert!(parse_poly(&deep).is_err());
    }

    #[test]
    fn number_field_elements() {
        let e = parse_nf_elem("t^2+1 : 2*t+1/3", 0).unwrap();
        assert_eq!(e.rational_coords().unwrap(), vec![rat(1, 3), int(2)]);
        assert_eq!(format_nf_elem(&e), "t^2+1 : 2*t+1/3");
        let q = parse_nf_elem("-5/2", 0).unwrap();
        assert_eq!(q.as_rational().unwrap(), rat(-5, 2));
        assert!(parse_nf_elem("t^2+1 : 2*s", 0).is_err());
        assert!(parse_nf_elem("t^2+s : t", 0).is_err());
    }

    #[test]
    fn polynomials_over_a_number_field() {
        let k = parse_number_field("t^2+1", 1).unwrap();
        let p = parse_poly_in("x^2 + (2*t+1)*x - t", &k, "x", &[("t".into(), k.gen())]).unwrap();
        assert_eq!(p.to_string(), "x^2+(2*t+1)*x-t");
    }
}
