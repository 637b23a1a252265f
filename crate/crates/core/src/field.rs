//! Rational functions in the chart variables with coefficient-ring
//! coefficients, kept with a factored, cancelled denominator.

use crate::coeff::Rules;
use crate::poly::{gcd, Mono, Poly, Var, Q};
use num_traits::{One, Zero};
use std::collections::BTreeMap;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum FieldError {
    #[error("substitution makes a denominator vanish identically")]
    DegenerateMap,
    #[error("division by zero")]
    DivisionByZero,
}

/// `num / prod(f^e)`; factors are monic, pairwise coprime and sorted, and
/// no factor divides the numerator.
#[derive(Clone, Debug)]
pub struct Frac {
    num: Poly,
    den: Vec<(Poly, u32)>,
}

impl PartialEq for Frac {
    fn eq(&self, o: &Frac) -> bool {
        if self.den == o.den {
            return self.num == o.num;
        }
        &self.num * &o.den_poly() == &o.num * &self.den_poly()
    }
}

impl Eq for Frac {}

/// Cheap sufficient test for irreducibility: linear in some variable with
/// coprime coefficients.
pub fn is_irreducible(p: &Poly) -> bool {
    if p.is_constant() {
        return false;
    }
    if p.is_monomial() {
        let m = p.leading().unwrap().0;
        return m.factors().len() == 1 && m.factors()[0].1 == 1;
    }
    for v in p.vars() {
        if p.degree_in(&v) == 1 {
            let a = p.coeff_of(&v, 1);
            let b = p.coeff_of(&v, 0);
            if a.is_constant() || (!b.is_zero() && gcd(&a, &b).is_constant()) {
                return true;
            }
        }
    }
    false
}

/// Splits off the monomial content of a denominator polynomial; returns the
/// constant, the single-variable factors and the remaining monic part.
fn split_den(d: &Poly) -> (Q, Vec<(Poly, u32)>, Poly) {
    let m = d.monomial_content();
    let rest = if m.is_one() { d.clone() } else { d.exact_div(&Poly::term(Q::one(), m.clone())).unwrap() };
    let c = rest.lc();
    let rest = rest.scale(&(Q::one() / &c));
    let mut fs: Vec<(Poly, u32)> = m.factors().iter().map(|(v, e)| (Poly::var(v.clone()), *e)).collect();
    if !rest.is_constant() {
        fs.push((rest.clone(), 1));
    }
    (c, fs, rest)
}

/// Refines a factor list until the factors are pairwise coprime.
fn coprime_basis(mut fs: Vec<(Poly, u32)>) -> Vec<(Poly, u32)> {
    // merge equal factors first
    fs.sort_by(|a, b| a.0.cmp(&b.0));
    let mut merged: Vec<(Poly, u32)> = Vec::new();
    for (p, e) in fs {
        match merged.last_mut() {
            Some((q, k)) if *q == p => *k += e,
            _ => merged.push((p, e)),
        }
    }
    let mut fs = merged;
    'outer: loop {
        for i in 0..fs.len() {
            for j in (i + 1)..fs.len() {
                let (a, ea) = fs[i].clone();
                let (b, eb) = fs[j].clone();
                if is_irreducible(&a) && is_irreducible(&b) {
                    continue;
                }
                let g = gcd(&a, &b);
                if g.is_constant() {
                    continue;
                }
                let a2 = a.exact_div(&g).unwrap().monic();
                let b2 = b.exact_div(&g).unwrap().monic();
                let mut next: Vec<(Poly, u32)> = Vec::new();
                for (k, f) in fs.iter().enumerate() {
                    if k != i && k != j {
                        next.push(f.clone());
                    }
                }
                next.push((g.monic(), ea + eb));
                if !a2.is_constant() {
                    next.push((a2, ea));
                }
                if !b2.is_constant() {
                    next.push((b2, eb));
                }
                next.sort_by(|a, b| a.0.cmp(&b.0));
                let mut m2: Vec<(Poly, u32)> = Vec::new();
                for (p, e) in next {
                    match m2.last_mut() {
                        Some((q, k)) if *q == p => *k += e,
                        _ => m2.push((p, e)),
                    }
                }
                fs = m2;
                continue 'outer;
            }
        }
        return fs;
    }
}

impl Frac {
    pub fn zero() -> Frac {
        Frac { num: Poly::zero(), den: vec![] }
    }

    pub fn one() -> Frac {
        Frac::from_poly(Poly::one())
    }

    pub fn from_poly(p: Poly) -> Frac {
        Frac { num: p, den: vec![] }
    }

    pub fn var(v: Var) -> Frac {
        Frac::from_poly(Poly::var(v))
    }

    pub fn u() -> Frac {
        Frac::var(Var::U)
    }

    pub fn v() -> Frac {
        Frac::var(Var::V)
    }

    /// Normalized `num / den`; panics on a zero denominator.
    pub fn new(num: Poly, den: Poly) -> Frac {
        assert!(!den.is_zero(), "zero denominator");
        if num.is_zero() {
            return Frac::zero();
        }
        if let Some(c) = den.as_constant() {
            return Frac::from_poly(num.scale(&(Q::one() / c)));
        }
        let (c, fs, _) = split_den(&den);
        Frac::from_parts(num.scale(&(Q::one() / c)), fs)
    }

    pub fn try_new(num: Poly, den: Poly) -> Result<Frac, FieldError> {
        if den.is_zero() {
            return Err(FieldError::DivisionByZero);
        }
        Ok(Frac::new(num, den))
    }

    /// Builds from a numerator and a list of monic factors (not necessarily
    /// coprime), then cancels.
    fn from_parts(num: Poly, fs: Vec<(Poly, u32)>) -> Frac {
        if num.is_zero() {
            return Frac::zero();
        }
        let mut num = num;
        let mut den = coprime_basis(fs.into_iter().filter(|(p, e)| *e > 0 && !p.is_constant()).collect());
        let mut i = 0;
        while i < den.len() {
            let (f, mut e) = den[i].clone();
            if is_irreducible(&f) {
                while e > 0 {
                    match num.exact_div(&f) {
                        Some(q) => {
                            num = q;
                            e -= 1;
                        }
                        None => break,
                    }
                }
                den[i].1 = e;
                i += 1;
                continue;
            }
            let g = gcd(&num, &f);
            if g.is_constant() {
                i += 1;
                continue;
            }
            if g == f.monic() {
                num = num.exact_div(&f).unwrap();
                den[i].1 -= 1;
                if den[i].1 == 0 {
                    i += 1;
                }
                continue;
            }
            // split the factor and start over on the refined basis
            let h = f.exact_div(&g).unwrap().monic();
            den[i] = (g, e);
            den.push((h, e));
            den = coprime_basis(den.into_iter().filter(|(_, e)| *e > 0).collect());
            i = 0;
        }
        den.retain(|(_, e)| *e > 0);
        den.sort_by(|a, b| a.0.cmp(&b.0));
        Frac { num, den }
    }

    pub fn num(&self) -> &Poly {
        &self.num
    }

    pub fn den_factors(&self) -> &[(Poly, u32)] {
        &self.den
    }

    pub fn den_poly(&self) -> Poly {
        let mut d = Poly::one();
        for (f, e) in &self.den {
            d = &d * &f.pow(*e);
        }
        d
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_poly(&self) -> bool {
        self.den.is_empty()
    }

    pub fn as_poly(&self) -> Option<&Poly> {
        if self.den.is_empty() {
            Some(&self.num)
        } else {
            None
        }
    }

    pub fn has_chart_vars(&self) -> bool {
        self.num.has_chart_vars() || self.den.iter().any(|(f, _)| f.has_chart_vars())
    }

    pub fn scale(&self, c: &Q) -> Frac {
        if c.is_zero() {
            return Frac::zero();
        }
        Frac { num: self.num.scale(c), den: self.den.clone() }
    }

    pub fn mul_poly(&self, p: &Poly) -> Frac {
        Frac::from_parts(&self.num * p, self.den.clone())
    }

    /// Common denominator of two fractions as a coprime factor list, with the
    /// numerators rescaled to it.
    pub fn common_den(a: &Frac, b: &Frac) -> (Poly, Poly, Vec<(Poly, u32)>) {
        let (na, nb, fs) = common_den_many(&[a, b]);
        (na[0].clone(), nb, fs)
    }

    pub fn inv(&self) -> Result<Frac, FieldError> {
        if self.is_zero() {
            return Err(FieldError::DivisionByZero);
        }
        let c = self.num.lc();
        let (_, mut fs, _) = split_den(&self.num);
        let num = self.den_poly().scale(&(Q::one() / c));
        fs.retain(|(p, _)| !p.is_constant());
        Ok(Frac::from_parts(num, fs))
    }

    pub fn div(&self, o: &Frac) -> Result<Frac, FieldError> {
        Ok(self * &o.inv()?)
    }

    pub fn pow(&self, e: u32) -> Frac {
        Frac { num: self.num.pow(e), den: self.den.iter().map(|(f, k)| (f.clone(), k * e)).filter(|(_, k)| *k > 0).collect() }
    }

    /// Partial derivative in a chart variable (or any variable, treating the
    /// others as constants).
    pub fn diff_var(&self, v: &Var) -> Frac {
        self.quotient_rule(&|p: &Poly| p.derivative(v))
    }

    /// Total x-derivative of the coefficients, chart variables held fixed.
    pub fn dx(&self, rules: &Rules) -> Frac {
        self.quotient_rule(&|p: &Poly| rules.diff(p))
    }

    fn quotient_rule(&self, d: &dyn Fn(&Poly) -> Poly) -> Frac {
        if self.den.is_empty() {
            return Frac::from_poly(d(&self.num));
        }
        // (n/D)' = (n' R - n sum e_k f_k' R/f_k) / (D R), R = prod f_k
        let r: Poly = self.den.iter().fold(Poly::one(), |acc, (f, _)| &acc * f);
        let mut top = &d(&self.num) * &r;
        for (f, e) in &self.den {
            let df = d(f);
            if df.is_zero() {
                continue;
            }
            let others = r.exact_div(f).unwrap();
            top = &top - &(&(&self.num * &df) * &others).scale(&Q::from_integer((*e).into()));
        }
        let fs = self.den.iter().map(|(f, e)| (f.clone(), e + 1)).collect();
        Frac::from_parts(top, fs)
    }

    pub fn total_derivative(&self, field: &(Frac, Frac), rules: &Rules) -> Frac {
        let a = self.dx(rules);
        let b = &self.diff_var(&Var::U) * &field.0;
        let c = &self.diff_var(&Var::V) * &field.1;
        &(&a + &b) + &c
    }

    /// Simultaneous substitution of the chart variables.
    pub fn subs(&self, map: &(Frac, Frac), rules: &Rules) -> Result<Frac, FieldError> {
        let n = subs_poly(&self.num, map, rules);
        let mut out = n;
        for (f, e) in &self.den {
            let s = subs_poly(f, map, rules);
            if s.is_zero() {
                return Err(FieldError::DegenerateMap);
            }
            // keep the substituted factor as a power rather than expanding it
            let (c, parts, _) = split_den(s.num());
            let mut top = Poly::one();
            for (g, k) in &s.den {
                top = &top * &g.pow(k * e);
            }
            let top = top.scale(&(Q::one() / c.pow(*e as i32)));
            let q = Frac::from_parts(top, parts.into_iter().map(|(p, k)| (p, k * e)).collect());
            out = &out * &q;
        }
        Ok(out)
    }

    pub fn map_coeffs(&self, f: &dyn Fn(&Poly) -> Poly) -> Frac {
        let mut num = f(&self.num);
        let mut fs = Vec::new();
        for (g, e) in &self.den {
            let g = f(g);
            assert!(!g.is_zero(), "zero denominator");
            let (c, parts, _) = split_den(&g);
            num = num.scale(&(Q::one() / c.pow(*e as i32)));
            fs.extend(parts.into_iter().map(|(p, k)| (p, k * e)));
        }
        Frac::from_parts(num, fs)
    }

    pub fn reduce(&self, rules: &Rules) -> Frac {
        self.map_coeffs(&|p| rules.reduce(p))
    }
}

/// `P(n0/d0, n1/d1)` by homogenizing against the degrees of `P`.
fn subs_poly(p: &Poly, map: &(Frac, Frac), rules: &Rules) -> Frac {
    if !p.has_chart_vars() {
        return Frac::from_poly(p.clone());
    }
    let a = p.degree_in(&Var::U);
    let b = p.degree_in(&Var::V);
    let (n0, d0) = (map.0.num.clone(), map.0.den_poly());
    let (n1, d1) = (map.1.num.clone(), map.1.den_poly());
    let mut pw_n0 = vec![Poly::one()];
    let mut pw_d0 = vec![Poly::one()];
    let mut pw_n1 = vec![Poly::one()];
    let mut pw_d1 = vec![Poly::one()];
    for k in 1..=a as usize {
        pw_n0.push(&pw_n0[k - 1] * &n0);
        pw_d0.push(&pw_d0[k - 1] * &d0);
    }
    for k in 1..=b as usize {
        pw_n1.push(&pw_n1[k - 1] * &n1);
        pw_d1.push(&pw_d1[k - 1] * &d1);
    }
    let mut num = Poly::zero();
    for (c, row) in p.coeffs_in(&Var::U).iter().enumerate() {
        if row.is_zero() {
            continue;
        }
        for (j, cij) in row.coeffs_in(&Var::V).iter().enumerate() {
            if cij.is_zero() {
                continue;
            }
            let t = &(&(&pw_n0[c] * &pw_d0[a as usize - c]) * &(&pw_n1[j] * &pw_d1[b as usize - j])) * cij;
            num = &num + &t;
        }
    }
    let num = rules.reduce(&num);
    let mut fs: Vec<(Poly, u32)> = Vec::new();
    for (f, e) in &map.0.den {
        fs.push((f.clone(), e * a));
    }
    for (f, e) in &map.1.den {
        fs.push((f.clone(), e * b));
    }
    Frac::from_parts(num, fs)
}

/// Numerators over a shared coprime factor basis.
pub fn common_den_many(fr: &[&Frac]) -> (Vec<Poly>, Poly, Vec<(Poly, u32)>) {
    let all: Vec<(Poly, u32)> = fr.iter().flat_map(|f| f.den.iter().map(|(p, _)| (p.clone(), 1))).collect();
    let basis: Vec<Poly> = coprime_basis(all).into_iter().map(|(p, _)| p).collect();
    // exponent of each basis element in each denominator
    let mut exps: Vec<Vec<u32>> = Vec::new();
    for f in fr {
        let mut row = vec![0u32; basis.len()];
        for (p, e) in &f.den {
            let mut rest = p.clone();
            for (k, b) in basis.iter().enumerate() {
                while let Some(q) = rest.exact_div(b) {
                    rest = q;
                    row[k] += e;
                }
            }
        }
        exps.push(row);
    }
    let top: Vec<u32> = (0..basis.len()).map(|k| exps.iter().map(|r| r[k]).max().unwrap_or(0)).collect();
    let nums: Vec<Poly> = fr
        .iter()
        .zip(&exps)
        .map(|(f, row)| {
            let mut n = f.num.clone();
            for (k, b) in basis.iter().enumerate() {
                let extra = top[k] - row[k];
                if extra > 0 {
                    n = &n * &b.pow(extra);
                }
            }
            n
        })
        .collect();
    let fs: Vec<(Poly, u32)> = basis.into_iter().zip(top).filter(|(_, e)| *e > 0).collect();
    let last = nums.last().cloned().unwrap_or_else(Poly::zero);
    (nums, last, fs)
}

impl<'a> std::ops::Add<&'a Frac> for &'a Frac {
    type Output = Frac;
    fn add(self, o: &'a Frac) -> Frac {
        if self.is_zero() {
            return o.clone();
        }
        if o.is_zero() {
            return self.clone();
        }
        if self.den.is_empty() && o.den.is_empty() {
            return Frac::from_poly(&self.num + &o.num);
        }
        if self.den == o.den {
            return Frac::from_parts(&self.num + &o.num, self.den.clone());
        }
        let (nums, _, fs) = common_den_many(&[self, o]);
        Frac::from_parts(&nums[0] + &nums[1], fs)
    }
}

impl<'a> std::ops::Sub<&'a Frac> for &'a Frac {
    type Output = Frac;
    fn sub(self, o: &'a Frac) -> Frac {
        self + &(-o)
    }
}

impl<'a> std::ops::Mul<&'a Frac> for &'a Frac {
    type Output = Frac;
    fn mul(self, o: &'a Frac) -> Frac {
        if self.is_zero() || o.is_zero() {
            return Frac::zero();
        }
        if self.den.is_empty() && o.den.is_empty() {
            return Frac::from_poly(&self.num * &o.num);
        }
        let mut fs = self.den.clone();
        fs.extend(o.den.iter().cloned());
        Frac::from_parts(&self.num * &o.num, fs)
    }
}

impl std::ops::Neg for &Frac {
    type Output = Frac;
    fn neg(self) -> Frac {
        Frac { num: -&self.num, den: self.den.clone() }
    }
}

macro_rules! owned_ops {
    ($tr:ident, $m:ident) => {
        impl std::ops::$tr<Frac> for Frac {
            type Output = Frac;
            fn $m(self, o: Frac) -> Frac {
                std::ops::$tr::$m(&self, &o)
            }
        }
    };
}
owned_ops!(Add, add);
owned_ops!(Sub, sub);
owned_ops!(Mul, mul);

impl std::ops::Neg for Frac {
    type Output = Frac;
    fn neg(self) -> Frac {
        -&self
    }
}

/// Field pulled back along `phi` (child coordinates to parent coordinates):
/// solves `J * (U', V') = field(phi) - d/dx phi`.
pub fn pullback(field: &(Frac, Frac), phi: &(Frac, Frac), rules: &Rules) -> Result<(Frac, Frac), FieldError> {
    let w0 = &field.0.subs(phi, rules)? - &phi.0.dx(rules);
    let w1 = &field.1.subs(phi, rules)? - &phi.1.dx(rules);
    let j00 = phi.0.diff_var(&Var::U);
    let j01 = phi.0.diff_var(&Var::V);
    let j10 = phi.1.diff_var(&Var::U);
    let j11 = phi.1.diff_var(&Var::V);
    let det = &(&j00 * &j11) - &(&j01 * &j10);
    if det.is_zero() {
        return Err(FieldError::DegenerateMap);
    }
    let inv = det.inv()?;
    let up = &(&(&j11 * &w0) - &(&j01 * &w1)) * &inv;
    let vp = &(&(&j00 * &w1) - &(&j10 * &w0)) * &inv;
    Ok((up, vp))
}

/// Restriction of a polynomial to `var = 0`.
pub fn restrict(p: &Poly, var: &Var) -> Poly {
    p.at_zero(var)
}

/// Exponent map helper for monomials in the chart variables only.
pub fn chart_exponents(m: &Mono) -> (u32, u32) {
    (m.exp(&Var::U), m.exp(&Var::V))
}

/// Coefficient table of a polynomial by chart exponents.
pub fn chart_table(p: &Poly) -> BTreeMap<(u32, u32), Poly> {
    let mut out: BTreeMap<(u32, u32), Poly> = BTreeMap::new();
    for (m, c) in p.terms() {
        let (r1, a) = m.without(&Var::U);
        let (r2, b) = r1.without(&Var::V);
        out.entry((a, b)).or_default().add_term(r2, c.clone());
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::poly;

    #[test]
    fn cancels_common_factor() {
        let f = Frac::new(poly("u^2*v"), poly("u"));
        assert_eq!(f.as_poly(), Some(&poly("u*v")));
        let g = Frac::new(&poly("v - q") * &poly("u"), poly("v - q"));
        assert_eq!(g.as_poly(), Some(&poly("u")));
        assert!(Frac::new(Poly::zero(), poly("u")).is_zero());
    }

    #[test]
    fn nonirreducible_factor_split() {
        let d = &poly("u + 1") * &poly("u - 1");
        let f = Frac::new(poly("u + 1"), d);
        assert_eq!(f, Frac::new(Poly::one(), poly("u - 1")));
        assert_eq!(f.den_factors().len(), 1);
    }

    #[test]
    fn substitution_example() {
        // v/u with (u, v) = (u, u v)
        let r = Frac::new(poly("v"), poly("u"));
        let m = (Frac::u(), Frac::from_poly(poly("u*v")));
        assert_eq!(r.subs(&m, &Rules::empty()).unwrap(), Frac::v());
    }
}
