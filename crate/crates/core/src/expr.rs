//! Textual syntax shared by coefficient expressions, chart polynomials,
//! rational functions, system files and map files.
//!
//! ```text
//! expr  := term (('+' | '-') term)*
//! term  := unary (('*' | '/') unary | unary)*        juxtaposition multiplies
//! unary := '-' unary | power
//! power := atom ('^' int)?
//! atom  := number | ident "'"* | '(' expr ')'
//! ```
//!
//! Identifiers resolve, in order, to the two chart variables, `x`, declared
//! parameters, abbreviations and finally transcendent jets (`q''` is the
//! second derivative of `q`).

use crate::coeff::Rules;
use crate::field::Frac;
use crate::poly::{q_int, Mono, Poly, Var, Q};
use num_bigint::BigInt;
use num_traits::{One, Signed};
use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write;
use std::sync::Arc;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
#[error("parse error at {pos}: {msg}")]
pub struct ParseError {
    pub pos: usize,
    pub msg: String,
}

fn err<T>(pos: usize, msg: impl Into<String>) -> Result<T, ParseError> {
    Err(ParseError { pos, msg: msg.into() })
}

/// Display names of the two chart variables.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VarNames {
    pub first: String,
    pub second: String,
}

impl Default for VarNames {
    fn default() -> Self {
        VarNames::new("u", "v")
    }
}

impl VarNames {
    pub fn new(a: &str, b: &str) -> VarNames {
        VarNames { first: a.to_string(), second: b.to_string() }
    }

    pub fn var_name(&self, v: &Var) -> String {
        match v {
            Var::U => self.first.clone(),
            Var::V => self.second.clone(),
            Var::X => "x".into(),
            Var::Param(p) => p.to_string(),
            Var::Jet(s, j) => format!("{}{}", s, "'".repeat(*j as usize)),
        }
    }
}

/// Everything the parser needs to resolve identifiers.
#[derive(Clone, Debug, Default)]
pub struct Scope {
    pub names: VarNames,
    pub params: BTreeSet<String>,
    pub abbrevs: BTreeMap<String, Poly>,
    pub rules: Rules,
}

impl Scope {
    pub fn new(names: VarNames) -> Scope {
        Scope { names, ..Scope::default() }
    }

    pub fn with_params(mut self, ps: &[&str]) -> Scope {
        for p in ps {
            self.params.insert(p.to_string());
        }
        self
    }

    pub fn with_rules(mut self, rules: Rules) -> Scope {
        self.rules = rules;
        self
    }

    pub fn with_abbrev(mut self, name: &str, e: Poly) -> Scope {
        self.abbrevs.insert(name.to_string(), e);
        self
    }

    fn ident(&self, name: &str, primes: u32, pos: usize) -> Result<Poly, ParseError> {
        if name == self.names.first || name == self.names.second {
            if primes > 0 {
                return err(pos, format!("chart variable {name} cannot carry primes"));
            }
            return Ok(Poly::var(if name == self.names.first { Var::U } else { Var::V }));
        }
        if name == "x" {
            return Ok(match primes {
                0 => Poly::x(),
                1 => Poly::one(),
                _ => Poly::zero(),
            });
        }
        if self.params.contains(name) {
            return Ok(if primes == 0 { Poly::var(Var::param(name)) } else { Poly::zero() });
        }
        if let Some(e) = self.abbrevs.get(name) {
            return Ok(self.rules.diff_n(e, primes));
        }
        Ok(Poly::var(Var::jet(name, primes)))
    }
}

#[derive(Clone, Debug)]
struct Ratio {
    num: Poly,
    den: Poly,
}

impl Ratio {
    fn poly(p: Poly) -> Ratio {
        Ratio { num: p, den: Poly::one() }
    }

    fn add(self, o: Ratio) -> Ratio {
        if self.den == o.den {
            return Ratio { num: &self.num + &o.num, den: self.den };
        }
        Ratio { num: &(&self.num * &o.den) + &(&o.num * &self.den), den: &self.den * &o.den }
    }

    fn neg(self) -> Ratio {
        Ratio { num: -self.num, den: self.den }
    }

    fn mul(self, o: Ratio) -> Ratio {
        Ratio { num: &self.num * &o.num, den: &self.den * &o.den }
    }

    fn div(self, o: Ratio, pos: usize) -> Result<Ratio, ParseError> {
        if o.num.is_zero() {
            return err(pos, "division by zero");
        }
        Ok(Ratio { num: &self.num * &o.den, den: &self.den * &o.num })
    }

    fn pow(self, e: i64) -> Ratio {
        let k = e.unsigned_abs() as u32;
        let r = Ratio { num: self.num.pow(k), den: self.den.pow(k) };
        if e < 0 {
            Ratio { num: r.den, den: r.num }
        } else {
            r
        }
    }
}

struct Parser<'a> {
    s: &'a [u8],
    i: usize,
    scope: &'a Scope,
}

impl<'a> Parser<'a> {
    fn ws(&mut self) {
        while self.i < self.s.len() && (self.s[self.i] as char).is_whitespace() {
            self.i += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.ws();
        self.s.get(self.i).copied()
    }

    fn expr(&mut self) -> Result<Ratio, ParseError> {
        let mut acc = self.term()?;
        loop {
            match self.peek() {
                Some(b'+') => {
                    self.i += 1;
                    acc = acc.add(self.term()?);
                }
                Some(b'-') => {
                    self.i += 1;
                    acc = acc.add(self.term()?.neg());
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<Ratio, ParseError> {
        let mut acc = self.unary()?;
        loop {
            match self.peek() {
                Some(b'*') => {
                    self.i += 1;
                    acc = acc.mul(self.unary()?);
                }
                Some(b'/') => {
                    self.i += 1;
                    let pos = self.i;
                    acc = acc.div(self.unary()?, pos)?;
                }
                Some(c) if c == b'(' || c.is_ascii_alphanumeric() || c == b'_' => {
                    acc = acc.mul(self.power()?);
                }
                _ => return Ok(acc),
            }
        }
    }

    fn unary(&mut self) -> Result<Ratio, ParseError> {
        match self.peek() {
            Some(b'-') => {
                self.i += 1;
                Ok(self.unary()?.neg())
            }
            Some(b'+') => {
                self.i += 1;
                self.unary()
            }
            _ => self.power(),
        }
    }

    fn power(&mut self) -> Result<Ratio, ParseError> {
        let base = self.atom()?;
        if self.peek() == Some(b'^') {
            self.i += 1;
            let neg = if self.peek() == Some(b'-') {
                self.i += 1;
                true
            } else {
                false
            };
            let pos = self.i;
            let n = self.integer()?;
            let e: i64 = match i64::try_from(&n) {
                Ok(e) if e <= 64 => e,
                _ => return err(pos, "exponent too large"),
            };
            if neg && base.num.is_zero() {
                return err(pos, "division by zero");
            }
            return Ok(base.pow(if neg { -e } else { e }));
        }
        Ok(base)
    }

    fn integer(&mut self) -> Result<BigInt, ParseError> {
        self.ws();
        let st = self.i;
        while self.i < self.s.len() && self.s[self.i].is_ascii_digit() {
            self.i += 1;
        }
        if st == self.i {
            return err(st, "expected integer");
        }
        let t = std::str::from_utf8(&self.s[st..self.i]).unwrap();
        Ok(t.parse().unwrap())
    }

    fn atom(&mut self) -> Result<Ratio, ParseError> {
        let pos = {
            self.ws();
            self.i
        };
        match self.peek() {
            Some(b'(') => {
                self.i += 1;
                let e = self.expr()?;
                if self.peek() != Some(b')') {
                    return err(self.i, "expected ')'");
                }
                self.i += 1;
                Ok(e)
            }
            Some(c) if c.is_ascii_digit() => {
                let n = self.integer()?;
                Ok(Ratio::poly(Poly::constant(Q::from_integer(n))))
            }
            Some(c) if c.is_ascii_alphabetic() || c == b'_' => {
                let st = self.i;
                while self.i < self.s.len() && (self.s[self.i].is_ascii_alphanumeric() || self.s[self.i] == b'_') {
                    self.i += 1;
                }
                let name = std::str::from_utf8(&self.s[st..self.i]).unwrap().to_string();
                let mut primes = 0;
                while self.i < self.s.len() && self.s[self.i] == b'\'' {
                    primes += 1;
                    self.i += 1;
                }
                Ok(Ratio::poly(self.scope.ident(&name, primes, pos)?))
            }
            Some(c) => err(pos, format!("unexpected '{}'", c as char)),
            None => err(pos, "unexpected end of input"),
        }
    }
}

fn parse_ratio(src: &str, scope: &Scope) -> Result<Ratio, ParseError> {
    let mut p = Parser { s: src.as_bytes(), i: 0, scope };
    let r = p.expr()?;
    if p.peek().is_some() {
        return err(p.i, "trailing input");
    }
    Ok(r)
}

/// Parses a polynomial; denominators must be constant.
pub fn parse_poly(src: &str, scope: &Scope) -> Result<Poly, ParseError> {
    let r = parse_ratio(src, scope)?;
    match r.den.as_constant() {
        Some(c) => Ok(scope.rules.reduce(&r.num.scale(&(Q::one() / c)))),
        None => err(0, "expression is not polynomial"),
    }
}

pub fn parse_frac(src: &str, scope: &Scope) -> Result<Frac, ParseError> {
    let r = parse_ratio(src, scope)?;
    Ok(Frac::new(scope.rules.reduce(&r.num), scope.rules.reduce(&r.den)))
}

/// Parses with the default scope: chart variables `u`, `v`, no rules.
pub fn poly(src: &str) -> Poly {
    parse_poly(src, &Scope::default()).expect("valid literal")
}

pub fn fmt_q(c: &Q) -> String {
    if c.is_integer() {
        c.numer().to_string()
    } else {
        format!("{}/{}", c.numer(), c.denom())
    }
}

fn fmt_mono(m: &Mono, names: &VarNames) -> String {
    let mut s = String::new();
    for (i, (v, e)) in m.factors().iter().enumerate() {
        if i > 0 {
            s.push('*');
        }
        s.push_str(&names.var_name(v));
        if *e > 1 {
            let _ = write!(s, "^{e}");
        }
    }
    s
}

/// Canonical rendering: terms from the leading monomial down.
pub fn fmt_poly(p: &Poly, names: &VarNames) -> String {
    if p.is_zero() {
        return "0".into();
    }
    let mut s = String::new();
    for (i, (m, c)) in p.terms().rev().enumerate() {
        let neg = c.is_negative();
        let a = c.abs();
        if i == 0 {
            if neg {
                s.push('-');
            }
        } else {
            s.push_str(if neg { " - " } else { " + " });
        }
        if m.is_one() {
            s.push_str(&fmt_q(&a));
        } else if a.is_one() {
            s.push_str(&fmt_mono(m, names));
        } else {
            let _ = write!(s, "{}*{}", fmt_q(&a), fmt_mono(m, names));
        }
    }
    s
}

pub fn fmt_frac(f: &Frac, names: &VarNames) -> String {
    if f.is_poly() {
        return fmt_poly(f.num(), names);
    }
    let mut d = String::new();
    let den = f.den_factors();
    for (i, (p, e)) in den.iter().enumerate() {
        if i > 0 {
            d.push('*');
        }
        let single = p.len() == 1 && p.leading().map(|(m, c)| c.is_one() && m.factors().len() == 1).unwrap_or(false);
        if single {
            d.push_str(&fmt_poly(p, names));
        } else {
            let _ = write!(d, "({})", fmt_poly(p, names));
        }
        if *e > 1 {
            let _ = write!(d, "^{e}");
        }
    }
    format!("({})/({})", fmt_poly(f.num(), names), d)
}

/// Shorthand for a rational constant.
pub fn qc(n: i64, d: i64) -> Poly {
    Poly::constant(Q::new(BigInt::from(n), BigInt::from(d)))
}

pub fn int(n: i64) -> Poly {
    Poly::constant(q_int(n))
}

pub fn param(name: &str) -> Poly {
    Poly::var(Var::Param(Arc::from(name)))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip_basic() {
        let s = Scope::new(VarNames::new("y", "z")).with_params(&["alpha"]);
        for src in ["-1/2*y^2*z + 3*q'' - alpha*x + 7", "q'*y - 1", "0", "z^3*x^2*p'''"] {
            let p = parse_poly(src, &s).unwrap();
            let back = parse_poly(&fmt_poly(&p, &s.names), &s).unwrap();
            assert_eq!(p, back, "{src}");
        }
    }

    #[test]
    fn juxtaposition_and_powers() {
        let s = Scope::default();
        assert_eq!(parse_poly("2u v^2", &s).unwrap(), parse_poly("2*u*v*v", &s).unwrap());
        assert_eq!(parse_poly("(u+1)^2", &s).unwrap(), parse_poly("u^2+2*u+1", &s).unwrap());
    }

    #[test]
    fn errors_carry_position() {
        let s = Scope::default();
        let e = parse_poly("u + * v", &s).unwrap_err();
        assert_eq!(e.pos, 4);
        assert!(parse_poly("1/u", &s).is_err());
        assert!(parse_poly("u'", &s).is_err());
    }
}
