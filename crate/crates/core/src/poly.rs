//! Sparse multivariate polynomials with exact rational coefficients.
//!
//! One polynomial type carries both the coefficient ring (x, parameters,
//! transcendent jets) and the two chart variables, so that substitution,
//! exact division and gcd work uniformly.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use std::sync::Arc;

pub type Q = BigRational;

pub fn q_int(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

pub fn q_frac(n: i64, d: i64) -> Q {
    Q::new(BigInt::from(n), BigInt::from(d))
}

/// Variables in their fixed order: the two chart variables, then `x`,
/// parameters by name, jets by symbol then order.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Var {
    U,
    V,
    X,
    Param(Arc<str>),
    Jet(Arc<str>, u32),
}

impl Var {
    pub fn jet(sym: &str, order: u32) -> Var {
        Var::Jet(Arc::from(sym), order)
    }

    pub fn param(name: &str) -> Var {
        Var::Param(Arc::from(name))
    }

    pub fn is_chart(&self) -> bool {
        matches!(self, Var::U | Var::V)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct Mono {
    deg: u32,
    f: Vec<(Var, u32)>,
}

impl Mono {
    pub fn one() -> Mono {
        Mono::default()
    }

    pub fn var(v: Var, e: u32) -> Mono {
        if e == 0 {
            return Mono::one();
        }
        Mono { deg: e, f: vec![(v, e)] }
    }

    pub fn from_pairs(mut f: Vec<(Var, u32)>) -> Mono {
        f.retain(|(_, e)| *e > 0);
        f.sort_by(|a, b| a.0.cmp(&b.0));
        let mut out: Vec<(Var, u32)> = Vec::with_capacity(f.len());
        for (v, e) in f {
            match out.last_mut() {
                Some((w, k)) if *w == v => *k += e,
                _ => out.push((v, e)),
            }
        }
        let deg = out.iter().map(|(_, e)| *e).sum();
        Mono { deg, f: out }
    }

    pub fn degree(&self) -> u32 {
        self.deg
    }

    pub fn factors(&self) -> &[(Var, u32)] {
        &self.f
    }

    pub fn is_one(&self) -> bool {
        self.f.is_empty()
    }

    pub fn exp(&self, v: &Var) -> u32 {
        self.f.iter().find(|(w, _)| w == v).map(|(_, e)| *e).unwrap_or(0)
    }

    pub fn mul(&self, o: &Mono) -> Mono {
        let mut f = Vec::with_capacity(self.f.len() + o.f.len());
        let (mut i, mut j) = (0, 0);
        while i < self.f.len() && j < o.f.len() {
            match self.f[i].0.cmp(&o.f[j].0) {
                Ordering::Less => {
                    f.push(self.f[i].clone());
                    i += 1;
                }
                Ordering::Greater => {
                    f.push(o.f[j].clone());
                    j += 1;
                }
                Ordering::Equal => {
                    f.push((self.f[i].0.clone(), self.f[i].1 + o.f[j].1));
                    i += 1;
                    j += 1;
                }
            }
        }
        f.extend_from_slice(&self.f[i..]);
        f.extend_from_slice(&o.f[j..]);
        Mono { deg: self.deg + o.deg, f }
    }

    /// `self / o` when `o` divides `self`.
    pub fn div(&self, o: &Mono) -> Option<Mono> {
        if o.deg > self.deg {
            return None;
        }
        let mut f = Vec::with_capacity(self.f.len());
        let mut j = 0;
        for (v, e) in &self.f {
            if j < o.f.len() && o.f[j].0 < *v {
                return None;
            }
            if j < o.f.len() && o.f[j].0 == *v {
                let k = o.f[j].1;
                if k > *e {
                    return None;
                }
                if k < *e {
                    f.push((v.clone(), e - k));
                }
                j += 1;
            } else {
                f.push((v.clone(), *e));
            }
        }
        if j < o.f.len() {
            return None;
        }
        Some(Mono { deg: self.deg - o.deg, f })
    }

    pub fn without(&self, v: &Var) -> (Mono, u32) {
        let e = self.exp(v);
        if e == 0 {
            return (self.clone(), 0);
        }
        let f: Vec<_> = self.f.iter().filter(|(w, _)| w != v).cloned().collect();
        (Mono { deg: self.deg - e, f }, e)
    }
}

impl Ord for Mono {
    fn cmp(&self, o: &Self) -> Ordering {
        self.deg.cmp(&o.deg).then_with(|| {
            let n = self.f.len().max(o.f.len());
            for i in 0..n {
                match (self.f.get(i), o.f.get(i)) {
                    (Some((va, ea)), Some((vb, eb))) => {
                        if va == vb {
                            if ea != eb {
                                return ea.cmp(eb);
                            }
                        } else if va < vb {
                            return Ordering::Greater;
                        } else {
                            return Ordering::Less;
                        }
                    }
                    (Some(_), None) => return Ordering::Greater,
                    (None, Some(_)) => return Ordering::Less,
                    (None, None) => break,
                }
            }
            Ordering::Equal
        })
    }
}

impl PartialOrd for Mono {
    fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}

/// Polynomial in canonical form: no zero coefficients, terms keyed by
/// graded-lex monomials.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Poly {
    t: BTreeMap<Mono, Q>,
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", crate::expr::fmt_poly(self, &crate::expr::VarNames::default()))
    }
}

impl Ord for Poly {
    fn cmp(&self, o: &Self) -> Ordering {
        let mut a = self.t.iter().rev();
        let mut b = o.t.iter().rev();
        loop {
            match (a.next(), b.next()) {
                (None, None) => return Ordering::Equal,
                (Some(_), None) => return Ordering::Greater,
                (None, Some(_)) => return Ordering::Less,
                (Some((ma, ca)), Some((mb, cb))) => {
                    let c = ma.cmp(mb).then_with(|| ca.cmp(cb));
                    if c != Ordering::Equal {
                        return c;
                    }
                }
            }
        }
    }
}

impl PartialOrd for Poly {
    fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}

impl Poly {
    pub fn zero() -> Poly {
        Poly::default()
    }

    pub fn one() -> Poly {
        Poly::constant(Q::one())
    }

    pub fn constant(c: Q) -> Poly {
        let mut t = BTreeMap::new();
        if !c.is_zero() {
            t.insert(Mono::one(), c);
        }
        Poly { t }
    }

    pub fn int(n: i64) -> Poly {
        Poly::constant(q_int(n))
    }

    pub fn var(v: Var) -> Poly {
        Poly::term(Q::one(), Mono::var(v, 1))
    }

    pub fn term(c: Q, m: Mono) -> Poly {
        let mut t = BTreeMap::new();
        if !c.is_zero() {
            t.insert(m, c);
        }
        Poly { t }
    }

    pub fn u() -> Poly {
        Poly::var(Var::U)
    }

    pub fn v() -> Poly {
        Poly::var(Var::V)
    }

    pub fn x() -> Poly {
        Poly::var(Var::X)
    }

    pub fn jet(sym: &str, order: u32) -> Poly {
        Poly::var(Var::jet(sym, order))
    }

    pub fn from_terms<I: IntoIterator<Item = (Mono, Q)>>(it: I) -> Poly {
        let mut p = Poly::zero();
        for (m, c) in it {
            p.add_term(m, c);
        }
        p
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Mono, &Q)> + ExactSizeIterator {
        self.t.iter()
    }

    pub fn len(&self) -> usize {
        self.t.len()
    }

    pub fn is_empty(&self) -> bool {
        self.t.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.t.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.t.is_empty() || (self.t.len() == 1 && self.t.keys().next().unwrap().is_one())
    }

    pub fn as_constant(&self) -> Option<Q> {
        if self.t.is_empty() {
            return Some(Q::zero());
        }
        if self.is_constant() {
            return self.t.values().next().cloned();
        }
        None
    }

    pub fn is_one(&self) -> bool {
        self.as_constant().map(|c| c.is_one()).unwrap_or(false)
    }

    pub fn is_monomial(&self) -> bool {
        self.t.len() == 1
    }

    pub fn constant_term(&self) -> Q {
        self.t.get(&Mono::one()).cloned().unwrap_or_else(Q::zero)
    }

    pub fn add_term(&mut self, m: Mono, c: Q) {
        if c.is_zero() {
            return;
        }
        match self.t.entry(m) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let s = e.get() + c;
                if s.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = s;
                }
            }
        }
    }

    pub fn leading(&self) -> Option<(&Mono, &Q)> {
        self.t.iter().next_back()
    }

    pub fn lc(&self) -> Q {
        self.leading().map(|(_, c)| c.clone()).unwrap_or_else(Q::zero)
    }

    pub fn degree(&self) -> u32 {
        self.t.keys().map(|m| m.degree()).max().unwrap_or(0)
    }

    pub fn vars(&self) -> BTreeSet<Var> {
        let mut s = BTreeSet::new();
        for m in self.t.keys() {
            for (v, _) in m.factors() {
                s.insert(v.clone());
            }
        }
        s
    }

    pub fn has_var(&self, v: &Var) -> bool {
        self.t.keys().any(|m| m.exp(v) > 0)
    }

    pub fn has_chart_vars(&self) -> bool {
        self.t.keys().any(|m| m.factors().iter().any(|(v, _)| v.is_chart()))
    }

    pub fn degree_in(&self, v: &Var) -> u32 {
        self.t.keys().map(|m| m.exp(v)).max().unwrap_or(0)
    }

    pub fn min_degree_in(&self, v: &Var) -> u32 {
        self.t.keys().map(|m| m.exp(v)).min().unwrap_or(0)
    }

    pub fn scale(&self, c: &Q) -> Poly {
        if c.is_zero() {
            return Poly::zero();
        }
        Poly { t: self.t.iter().map(|(m, a)| (m.clone(), a * c)).collect() }
    }

    pub fn mul_mono(&self, m: &Mono, c: &Q) -> Poly {
        if c.is_zero() {
            return Poly::zero();
        }
        Poly { t: self.t.iter().map(|(k, a)| (k.mul(m), a * c)).collect() }
    }

    pub fn pow(&self, e: u32) -> Poly {
        let mut r = Poly::one();
        let mut b = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                r = &r * &b;
            }
            e >>= 1;
            if e > 0 {
                b = &b * &b;
            }
        }
        r
    }

    pub fn derivative(&self, v: &Var) -> Poly {
        let mut out = Poly::zero();
        for (m, c) in &self.t {
            let e = m.exp(v);
            if e == 0 {
                continue;
            }
            let (rest, _) = m.without(v);
            let nm = rest.mul(&Mono::var(v.clone(), e - 1));
            out.add_term(nm, c * q_int(e as i64));
        }
        out
    }

    /// Coefficients with respect to `v`, indexed by power.
    pub fn coeffs_in(&self, v: &Var) -> Vec<Poly> {
        let d = self.degree_in(v) as usize;
        let mut out = vec![Poly::zero(); d + 1];
        if self.is_zero() {
            return vec![];
        }
        for (m, c) in &self.t {
            let (rest, e) = m.without(v);
            out[e as usize].t.insert(rest, c.clone());
        }
        out
    }

    pub fn from_coeffs(v: &Var, cs: &[Poly]) -> Poly {
        let mut out = Poly::zero();
        for (i, c) in cs.iter().enumerate() {
            let m = Mono::var(v.clone(), i as u32);
            for (k, a) in &c.t {
                out.add_term(k.mul(&m), a.clone());
            }
        }
        out
    }

    pub fn coeff_of(&self, v: &Var, e: u32) -> Poly {
        let mut out = Poly::zero();
        for (m, c) in &self.t {
            let (rest, k) = m.without(v);
            if k == e {
                out.t.insert(rest, c.clone());
            }
        }
        out
    }

    /// Value at `v = 0`.
    pub fn at_zero(&self, v: &Var) -> Poly {
        Poly { t: self.t.iter().filter(|(m, _)| m.exp(v) == 0).map(|(m, c)| (m.clone(), c.clone())).collect() }
    }

    pub fn subs(&self, v: &Var, p: &Poly) -> Poly {
        if !self.has_var(v) {
            return self.clone();
        }
        let cs = self.coeffs_in(v);
        let mut r = Poly::zero();
        for c in cs.iter().rev() {
            r = &(&r * p) + c;
        }
        r
    }

    /// Simultaneous substitution of several variables.
    pub fn subs_many(&self, map: &BTreeMap<Var, Poly>) -> Poly {
        if map.is_empty() {
            return self.clone();
        }
        let mut cache: HashMap<(Var, u32), Poly> = HashMap::new();
        let mut out = Poly::zero();
        for (m, c) in &self.t {
            let mut keep: Vec<(Var, u32)> = Vec::new();
            let mut prod = Poly::constant(c.clone());
            for (v, e) in m.factors() {
                match map.get(v) {
                    Some(img) => {
                        let pw = cache.entry((v.clone(), *e)).or_insert_with(|| img.pow(*e)).clone();
                        prod = &prod * &pw;
                    }
                    None => keep.push((v.clone(), *e)),
                }
            }
            let km = Mono::from_pairs(keep);
            for (k, a) in prod.t {
                out.add_term(k.mul(&km), a);
            }
        }
        out
    }

    pub fn rename(&self, f: &dyn Fn(&Var) -> Var) -> Poly {
        let mut out = Poly::zero();
        for (m, c) in &self.t {
            let pairs = m.factors().iter().map(|(v, e)| (f(v), *e)).collect();
            out.add_term(Mono::from_pairs(pairs), c.clone());
        }
        out
    }

    /// Exact quotient, or `None` when `d` does not divide `self`.
    pub fn exact_div(&self, d: &Poly) -> Option<Poly> {
        if d.is_zero() {
            return None;
        }
        if self.is_zero() {
            return Some(Poly::zero());
        }
        if let Some(c) = d.as_constant() {
            return Some(self.scale(&(Q::one() / c)));
        }
        let (dm, dc) = d.leading().map(|(m, c)| (m.clone(), c.clone())).unwrap();
        if d.is_monomial() {
            let mut out = Poly::zero();
            for (m, c) in &self.t {
                out.t.insert(m.div(&dm)?, c / &dc);
            }
            return Some(out);
        }
        let mut r = self.clone();
        let mut q = Poly::zero();
        while let Some((rm, rc)) = r.leading().map(|(m, c)| (m.clone(), c.clone())) {
            let qm = rm.div(&dm)?;
            let qc = rc / &dc;
            for (m, c) in &d.t {
                r.add_term(m.mul(&qm), -(c * &qc));
            }
            q.add_term(qm, qc);
        }
        Some(q)
    }

    pub fn divides(&self, p: &Poly) -> bool {
        p.exact_div(self).is_some()
    }

    /// Scaled so that the leading coefficient is one.
    pub fn monic(&self) -> Poly {
        match self.leading() {
            None => Poly::zero(),
            Some((_, c)) => {
                if c.is_one() {
                    self.clone()
                } else {
                    self.scale(&(Q::one() / c))
                }
            }
        }
    }

    /// Integer coefficients with gcd one and positive leading coefficient.
    pub fn primitive_int(&self) -> Poly {
        if self.is_zero() {
            return Poly::zero();
        }
        let mut den = BigInt::one();
        for c in self.t.values() {
            den = den.lcm(c.denom());
        }
        let mut g = BigInt::zero();
        for c in self.t.values() {
            let n = c.numer() * (&den / c.denom());
            g = g.gcd(&n);
        }
        let mut s = Q::new(den, g);
        if self.lc().is_negative() {
            s = -s;
        }
        self.scale(&s)
    }

    /// Monomial content: the largest monomial dividing every term.
    pub fn monomial_content(&self) -> Mono {
        let mut it = self.t.keys();
        let first = match it.next() {
            None => return Mono::one(),
            Some(m) => m.clone(),
        };
        let mut pairs: Vec<(Var, u32)> = first.factors().to_vec();
        for m in it {
            for p in pairs.iter_mut() {
                p.1 = p.1.min(m.exp(&p.0));
            }
            pairs.retain(|(_, e)| *e > 0);
            if pairs.is_empty() {
                break;
            }
        }
        Mono::from_pairs(pairs)
    }

    pub fn coefficients_only(&self) -> bool {
        !self.has_chart_vars()
    }
}

macro_rules! binop {
    ($tr:ident, $m:ident, $body:expr) => {
        impl<'a> std::ops::$tr<&'a Poly> for &'a Poly {
            type Output = Poly;
            fn $m(self, o: &'a Poly) -> Poly {
                $body(self, o)
            }
        }
        impl std::ops::$tr<Poly> for Poly {
            type Output = Poly;
            fn $m(self, o: Poly) -> Poly {
                $body(&self, &o)
            }
        }
    };
}

fn add_impl(a: &Poly, b: &Poly) -> Poly {
    let (big, small) = if a.t.len() >= b.t.len() { (a, b) } else { (b, a) };
    let mut r = big.clone();
    for (m, c) in &small.t {
        r.add_term(m.clone(), c.clone());
    }
    r
}

fn sub_impl(a: &Poly, b: &Poly) -> Poly {
    let mut r = a.clone();
    for (m, c) in &b.t {
        r.add_term(m.clone(), -c.clone());
    }
    r
}

fn mul_impl(a: &Poly, b: &Poly) -> Poly {
    if a.is_zero() || b.is_zero() {
        return Poly::zero();
    }
    let mut r = Poly::zero();
    for (ma, ca) in &a.t {
        for (mb, cb) in &b.t {
            r.add_term(ma.mul(mb), ca * cb);
        }
    }
    r
}

binop!(Add, add, add_impl);
binop!(Sub, sub, sub_impl);
binop!(Mul, mul, mul_impl);

impl std::ops::Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        Poly { t: self.t.iter().map(|(m, c)| (m.clone(), -c.clone())).collect() }
    }
}

impl std::ops::Neg for Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        -&self
    }
}

// ---------------------------------------------------------------------------
// gcd

/// Monic gcd over Q of two polynomials (zero only when both are zero).
pub fn gcd(a: &Poly, b: &Poly) -> Poly {
    if a.is_zero() {
        return b.monic();
    }
    if b.is_zero() {
        return a.monic();
    }
    if a.is_constant() || b.is_constant() {
        return Poly::one();
    }
    if a.is_monomial() || b.is_monomial() {
        let (m, other) = if a.is_monomial() { (a, b) } else { (b, a) };
        let mm = m.leading().unwrap().0.clone();
        let oc = other.monomial_content();
        let pairs = mm.factors().iter().map(|(v, e)| (v.clone(), (*e).min(oc.exp(v)))).collect();
        return Poly::term(Q::one(), Mono::from_pairs(pairs));
    }
    if a.monic() == b.monic() {
        return a.monic();
    }
    let va = a.vars();
    let vb = b.vars();
    if let Some(w) = va.iter().find(|v| !vb.contains(*v)) {
        return gcd_with_coeffs(b, a, w);
    }
    if let Some(w) = vb.iter().find(|v| !va.contains(*v)) {
        return gcd_with_coeffs(a, b, w);
    }
    // main variable: the one of smallest degree keeps the remainder sequence short
    let w = va.iter().min_by_key(|v| (a.degree_in(v).max(b.degree_in(v)), a.degree_in(v).min(b.degree_in(v)))).unwrap().clone();
    let ca = content_in(a, &w);
    let cb = content_in(b, &w);
    let pa = a.exact_div(&ca).expect("content divides");
    let pb = b.exact_div(&cb).expect("content divides");
    let g = gcd(&ca, &cb);
    let p = prs_gcd(pa, pb, &w);
    (&g * &p).monic()
}

fn gcd_with_coeffs(b: &Poly, a: &Poly, w: &Var) -> Poly {
    let mut g = b.monic();
    for c in a.coeffs_in(w) {
        if c.is_zero() {
            continue;
        }
        g = gcd(&g, &c);
        if g.is_constant() {
            break;
        }
    }
    g
}

/// gcd of the coefficients of `p` with respect to `w`.
pub fn content_in(p: &Poly, w: &Var) -> Poly {
    let mut cs: Vec<Poly> = p.coeffs_in(w).into_iter().filter(|c| !c.is_zero()).collect();
    if cs.is_empty() {
        return Poly::zero();
    }
    if cs.iter().any(|c| c.is_constant()) {
        return Poly::one();
    }
    cs.sort_by_key(|c| c.len());
    let mut g = cs[0].monic();
    for c in &cs[1..] {
        g = gcd(&g, c);
        if g.is_constant() {
            break;
        }
    }
    g
}

pub fn primpart_in(p: &Poly, w: &Var) -> Poly {
    let c = content_in(p, w);
    if c.is_zero() {
        return Poly::zero();
    }
    p.exact_div(&c).expect("content divides")
}

fn prs_gcd(a: Poly, b: Poly, w: &Var) -> Poly {
    let (mut a, mut b) = if a.degree_in(w) >= b.degree_in(w) { (a, b) } else { (b, a) };
    if b.degree_in(w) == 0 {
        return Poly::one();
    }
    loop {
        let r = prem(&a, &b, w);
        if r.is_zero() {
            return b.monic();
        }
        if r.degree_in(w) == 0 {
            return Poly::one();
        }
        let r = primpart_in(&r, w);
        a = b;
        b = r;
    }
}

/// Pseudo-remainder of `a` by `b` in the variable `w`.
pub fn prem(a: &Poly, b: &Poly, w: &Var) -> Poly {
    let bc = b.coeffs_in(w);
    let n = bc.len() - 1;
    let mut r = a.coeffs_in(w);
    if r.len() < n + 1 {
        return a.clone();
    }
    let lc = bc[n].clone();
    let mut e = r.len() - n;
    while r.len() > n && !r.is_empty() {
        let d = r.len() - 1 - n;
        let lr = r.last().unwrap().clone();
        for c in r.iter_mut() {
            *c = &*c * &lc;
        }
        for (i, bi) in bc.iter().enumerate() {
            let t = &lr * bi;
            r[i + d] = &r[i + d] - &t;
        }
        while matches!(r.last(), Some(c) if c.is_zero()) {
            r.pop();
        }
        e -= 1;
    }
    let out = Poly::from_coeffs(w, &r);
    if e > 0 {
        &out * &lc.pow(e as u32)
    } else {
        out
    }
}

/// Squarefree part with respect to `w` (other variables as coefficients).
pub fn squarefree_in(p: &Poly, w: &Var) -> Poly {
    let d = p.derivative(w);
    if d.is_zero() {
        return p.clone();
    }
    let g = gcd(p, &d);
    if g.has_var(w) {
        p.exact_div(&g).expect("gcd divides")
    } else {
        p.clone()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn y() -> Poly {
        Poly::jet("q", 0)
    }

    #[test]
    fn mono_order_is_graded() {
        let a = Mono::var(Var::X, 2);
        let b = Mono::var(Var::U, 1);
        assert!(a > b);
        let c = Mono::var(Var::U, 1).mul(&Mono::var(Var::X, 1));
        let d = Mono::var(Var::V, 1).mul(&Mono::var(Var::X, 1));
        assert!(c > d);
    }

    #[test]
    fn exact_division_roundtrip() {
        let a = &Poly::u() + &y();
        let b = &(&Poly::v() * &Poly::x()) - &Poly::int(3);
        let p = &a * &b;
        assert_eq!(p.exact_div(&a), Some(b.clone()));
        assert_eq!(p.exact_div(&(&a + &Poly::one())), None);
    }

    #[test]
    fn gcd_of_products() {
        let a = &Poly::u() + &y();
        let b = &(&Poly::v() * &Poly::x()) - &Poly::int(3);
        let c = &(&Poly::u() * &Poly::v()) + &Poly::x();
        let g = gcd(&(&a * &b), &(&a * &c));
        assert_eq!(g, a.monic());
        assert!(gcd(&b, &c).is_one());
    }

    #[test]
    fn prem_matches_definition() {
        let w = Var::U;
        let a = (&Poly::u() + &Poly::x()).pow(3);
        let b = &(&Poly::u() * &Poly::x()) + &Poly::one();
        let r = prem(&a, &b, &w);
        assert_eq!(r.degree_in(&w), 0);
    }
}
