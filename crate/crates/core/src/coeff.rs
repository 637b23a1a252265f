//! Differential coefficient ring: transcendent rules, total x-derivative and
//! rule-based reduction of jets.

use crate::poly::{Poly, Var};
use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum RuleError {
    #[error("rule for {0} has order 0")]
    ZeroOrder(String),
    #[error("rule for {symbol} of order {order} mentions its own jet of order {found}")]
    SelfReference { symbol: String, order: u32, found: u32 },
    #[error("rules are cyclic: {0}")]
    Cyclic(String),
    #[error("rule right-hand side mentions a chart variable")]
    ChartVariable,
    #[error("duplicate rule for {0}")]
    Duplicate(String),
}

/// `symbol^(order) = rhs`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Rule {
    pub symbol: Arc<str>,
    pub order: u32,
    pub rhs: Poly,
}

impl Rule {
    pub fn new(symbol: &str, order: u32, rhs: Poly) -> Result<Rule, RuleError> {
        if order == 0 {
            return Err(RuleError::ZeroOrder(symbol.to_string()));
        }
        if rhs.has_chart_vars() {
            return Err(RuleError::ChartVariable);
        }
        for v in rhs.vars() {
            if let Var::Jet(s, j) = &v {
                if &**s == symbol && *j >= order {
                    return Err(RuleError::SelfReference { symbol: symbol.to_string(), order, found: *j });
                }
            }
        }
        Ok(Rule { symbol: Arc::from(symbol), order, rhs })
    }
}

/// A well-formed rule set together with fully reduced right-hand sides.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Rules {
    rules: BTreeMap<Arc<str>, Rule>,
    reduced: BTreeMap<Arc<str>, Poly>,
}

/// Derivative of a jet, given the reduced right-hand sides known so far.
/// `None` when the derivative needs a rule that is not yet reduced.
fn diff_with(e: &Poly, rules: &BTreeMap<Arc<str>, Rule>, reduced: &BTreeMap<Arc<str>, Poly>) -> Option<Poly> {
    let mut out = Poly::zero();
    for v in e.vars() {
        let dv = match &v {
            Var::U | Var::V | Var::Param(_) => continue,
            Var::X => Poly::one(),
            Var::Jet(s, j) => match rules.get(s) {
                Some(r) if j + 1 >= r.order => reduced.get(s)?.clone(),
                _ => Poly::var(Var::Jet(s.clone(), j + 1)),
            },
        };
        out = &out + &(&e.derivative(&v) * &dv);
    }
    Some(out)
}

impl Rules {
    pub fn empty() -> Rules {
        Rules::default()
    }

    pub fn new(list: Vec<Rule>) -> Result<Rules, RuleError> {
        let mut rules = BTreeMap::new();
        for r in list {
            if rules.contains_key(&r.symbol) {
                return Err(RuleError::Duplicate(r.symbol.to_string()));
            }
            rules.insert(r.symbol.clone(), r);
        }
        let mut reduced: BTreeMap<Arc<str>, Poly> = BTreeMap::new();
        let mut pending: Vec<Arc<str>> = rules.keys().cloned().collect();
        while !pending.is_empty() {
            let mut progress = false;
            let mut still = Vec::new();
            for s in pending {
                let rhs = &rules[&s].rhs;
                match reduce_with(rhs, &rules, &reduced) {
                    Some(r) => {
                        // the reduced rhs must be differentiable with what is known
                        reduced.insert(s.clone(), r);
                        progress = true;
                    }
                    None => still.push(s),
                }
            }
            if !progress {
                let names: Vec<String> = still.iter().map(|s| s.to_string()).collect();
                return Err(RuleError::Cyclic(names.join(", ")));
            }
            pending = still;
        }
        // every reduced rhs must differentiate without missing rules
        for r in reduced.values() {
            if diff_with(r, &rules, &reduced).is_none() {
                return Err(RuleError::Cyclic("derivative closure".into()));
            }
        }
        Ok(Rules { rules, reduced })
    }

    pub fn rules(&self) -> impl Iterator<Item = &Rule> {
        self.rules.values()
    }

    pub fn get(&self, symbol: &str) -> Option<&Rule> {
        self.rules.get(symbol)
    }

    pub fn has(&self, symbol: &str) -> bool {
        self.rules.contains_key(symbol)
    }

    pub fn symbols(&self) -> BTreeSet<String> {
        self.rules.keys().map(|s| s.to_string()).collect()
    }

    /// The same rule set with the rules for `free` removed.
    pub fn without(&self, free: &[String]) -> Rules {
        let list = self.rules.values().filter(|r| !free.iter().any(|f| **f == *r.symbol)).cloned().collect();
        Rules::new(list).expect("subset of well-formed rules")
    }

    /// Rule set with every right-hand side transformed by `f`.
    pub fn map_rhs(&self, f: &dyn Fn(&Poly) -> Poly) -> Result<Rules, RuleError> {
        let list = self.rules.values().map(|r| Rule { symbol: r.symbol.clone(), order: r.order, rhs: f(&r.rhs) }).collect();
        Rules::new(list)
    }

    pub fn merge(&self, other: &Rules) -> Result<Rules, RuleError> {
        let mut list: Vec<Rule> = self.rules.values().cloned().collect();
        for r in other.rules.values() {
            match self.rules.get(&r.symbol) {
                Some(mine) if mine == r => {}
                Some(_) => return Err(RuleError::Duplicate(r.symbol.to_string())),
                None => list.push(r.clone()),
            }
        }
        Rules::new(list)
    }

    /// Total derivative in x; chart variables are constants here.
    pub fn diff(&self, e: &Poly) -> Poly {
        if !self.is_reduced(e) {
            return self.diff(&self.reduce(e));
        }
        diff_with(e, &self.rules, &self.reduced).expect("reduced rules are closed")
    }

    pub fn diff_n(&self, e: &Poly, n: u32) -> Poly {
        let mut r = e.clone();
        for _ in 0..n {
            r = self.diff(&r);
        }
        r
    }

    pub fn reduce(&self, e: &Poly) -> Poly {
        reduce_with(e, &self.rules, &self.reduced).expect("reduced rules are closed")
    }

    pub fn equal(&self, a: &Poly, b: &Poly) -> bool {
        self.reduce(&(a - b)).is_zero()
    }

    /// True when no jet in `e` is at or above its rule order.
    pub fn is_reduced(&self, e: &Poly) -> bool {
        e.vars().iter().all(|v| match v {
            Var::Jet(s, j) => self.rules.get(s).map(|r| *j < r.order).unwrap_or(true),
            _ => true,
        })
    }
}

fn reduce_with(e: &Poly, rules: &BTreeMap<Arc<str>, Rule>, reduced: &BTreeMap<Arc<str>, Poly>) -> Option<Poly> {
    let mut map: BTreeMap<Var, Poly> = BTreeMap::new();
    let mut by_sym: BTreeMap<Arc<str>, u32> = BTreeMap::new();
    for v in e.vars() {
        if let Var::Jet(s, j) = &v {
            if let Some(r) = rules.get(s) {
                if *j >= r.order {
                    let m = by_sym.entry(s.clone()).or_insert(0);
                    *m = (*m).max(*j);
                }
            }
        }
    }
    if by_sym.is_empty() {
        return Some(e.clone());
    }
    for (s, top) in by_sym {
        let k = rules[&s].order;
        let mut d = reduced.get(&s)?.clone();
        for j in k..=top {
            if j > k {
                d = diff_with(&d, rules, reduced)?;
            }
            let v = Var::Jet(s.clone(), j);
            if e.has_var(&v) {
                map.insert(v, d.clone());
            }
        }
    }
    Some(e.subs_many(&map))
}

/// Named jet helper: `q^(n)` as a polynomial.
pub fn jet(sym: &str, n: u32) -> Poly {
    Poly::jet(sym, n)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::q_int;

    fn p1() -> Rules {
        let q = jet("q", 0);
        Rules::new(vec![Rule::new("q", 2, &(&q * &q).scale(&q_int(6)) + &Poly::x()).unwrap()]).unwrap()
    }

    #[test]
    fn reduces_second_derivative() {
        let r = p1();
        let q = jet("q", 0);
        assert_eq!(r.reduce(&jet("q", 2)), &(&q * &q).scale(&q_int(6)) + &Poly::x());
        assert_eq!(r.diff(&jet("q", 1)), r.reduce(&jet("q", 2)));
    }

    #[test]
    fn self_reference_rejected() {
        assert!(Rule::new("q", 2, jet("q", 3)).is_err());
        assert!(Rule::new("q", 0, Poly::x()).is_err());
    }

    #[test]
    fn cyclic_rules_rejected() {
        let a = Rule::new("a", 1, jet("b", 1)).unwrap();
        let b = Rule::new("b", 1, jet("a", 1)).unwrap();
        assert!(matches!(Rules::new(vec![a, b]), Err(RuleError::Cyclic(_))));
    }

    #[test]
    fn chained_rules_resolve() {
        let a = Rule::new("a", 1, jet("b", 2)).unwrap();
        let b = Rule::new("b", 2, Poly::x()).unwrap();
        let r = Rules::new(vec![a, b]).unwrap();
        assert_eq!(r.reduce(&jet("a", 1)), Poly::x());
        assert_eq!(r.diff(&jet("a", 0)), Poly::x());
    }
}
