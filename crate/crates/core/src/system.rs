//! Planar polynomial systems and the line-based system file format.
//!
//! ```text
//! # comment
//! system IX.B(2)
//! vars y z
//! param alpha
//! rule q'' = 6*q^2 + x
//! abbrev s = (p' + p^2 - r)/12
//! charts tilde            # or: oriented
//! y' = -y^2 + z + 12*q
//! z' = y*z
//! ```
//!
//! Rules are read first, then abbreviations in file order, then the two
//! equations, so an equation may use any abbreviation and its derivatives.

use crate::coeff::{Rule, RuleError, Rules};
use crate::expr::{fmt_poly, parse_poly, ParseError, Scope, VarNames};
use crate::field::Frac;
use crate::poly::{Poly, Var};
use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, BTreeSet};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum SystemError {
    #[error("line {line}: {source}")]
    Parse { line: usize, source: ParseError },
    #[error("line {line}: {msg}")]
    Syntax { line: usize, msg: String },
    #[error(transparent)]
    Rule(#[from] RuleError),
    #[error("missing {0}")]
    Missing(&'static str),
    #[error("right-hand side of {0} is not polynomial in the chart variables")]
    NotPolynomial(String),
}

/// How ambiguous base points (visible in both children) are charted.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum ChartPolicy {
    /// Flip to the (u, 1/v) chart once per cascade when coming from a U-chart.
    #[default]
    Tilde,
    /// Stay in the orientation of the current chart.
    Oriented,
}

#[derive(Clone, Debug)]
pub struct PlanarSystem {
    pub name: String,
    pub names: VarNames,
    pub f: Poly,
    pub g: Poly,
    pub rules: Rules,
    pub params: BTreeSet<String>,
    pub abbrevs: BTreeMap<String, Poly>,
    pub policy: ChartPolicy,
}

impl PartialEq for PlanarSystem {
    fn eq(&self, o: &Self) -> bool {
        self.names == o.names
            && self.rules.equal(&self.f, &o.f)
            && self.rules.equal(&self.g, &o.g)
            && self.rules == o.rules
            && self.params == o.params
    }
}

impl PlanarSystem {
    pub fn new(name: &str, names: VarNames, f: Poly, g: Poly, rules: Rules) -> PlanarSystem {
        let f = rules.reduce(&f);
        let g = rules.reduce(&g);
        let mut params = BTreeSet::new();
        for v in f.vars().into_iter().chain(g.vars()) {
            if let Var::Param(p) = v {
                params.insert(p.to_string());
            }
        }
        for r in rules.rules() {
            for v in r.rhs.vars() {
                if let Var::Param(p) = v {
                    params.insert(p.to_string());
                }
            }
        }
        PlanarSystem { name: name.to_string(), names, f, g, rules, params, abbrevs: BTreeMap::new(), policy: ChartPolicy::Tilde }
    }

    pub fn with_policy(mut self, p: ChartPolicy) -> Self {
        self.policy = p;
        self
    }

    pub fn with_abbrev(mut self, name: &str, e: Poly) -> Self {
        self.abbrevs.insert(name.to_string(), e);
        self
    }

    pub fn field(&self) -> (Frac, Frac) {
        (Frac::from_poly(self.f.clone()), Frac::from_poly(self.g.clone()))
    }

    pub fn scope(&self) -> Scope {
        let mut s = Scope::new(self.names.clone()).with_rules(self.rules.clone());
        s.params = self.params.clone();
        s.abbrevs = self.abbrevs.clone();
        s
    }

    /// Same equations under a different rule set.
    pub fn with_rules(&self, rules: Rules) -> PlanarSystem {
        let mut s = self.clone();
        s.f = rules.reduce(&s.f);
        s.g = rules.reduce(&s.g);
        s.rules = rules;
        s
    }

    /// Drops the rules for the listed symbols, making them free functions.
    pub fn free(&self, symbols: &[String]) -> PlanarSystem {
        self.with_rules(self.rules.without(symbols))
    }

    pub fn renamed(&self, names: VarNames) -> PlanarSystem {
        let mut s = self.clone();
        s.names = names;
        s
    }

    /// Exchanges the roles of the two variables.
    pub fn swapped(&self) -> PlanarSystem {
        let sw = |p: &Poly| {
            p.rename(&|v: &Var| match v {
                Var::U => Var::V,
                Var::V => Var::U,
                o => o.clone(),
            })
        };
        let mut s = self.clone();
        s.f = sw(&self.g);
        s.g = sw(&self.f);
        s.names = VarNames::new(&self.names.second, &self.names.first);
        s
    }

    /// Residual of the system along a candidate solution `(a, b)` given as
    /// coefficient expressions.
    pub fn residual_along(&self, a: &Poly, b: &Poly) -> (Poly, Poly) {
        let mut m = BTreeMap::new();
        m.insert(Var::U, a.clone());
        m.insert(Var::V, b.clone());
        let ra = &self.rules.diff(a) - &self.f.subs_many(&m);
        let rb = &self.rules.diff(b) - &self.g.subs_many(&m);
        (self.rules.reduce(&ra), self.rules.reduce(&rb))
    }

    pub fn parse(src: &str) -> Result<PlanarSystem, SystemError> {
        let mut name = None;
        let mut names = None;
        let mut params: Vec<String> = Vec::new();
        let mut rule_lines: Vec<(usize, String, u32, String)> = Vec::new();
        let mut abbrev_lines: Vec<(usize, String, String)> = Vec::new();
        let mut eqs: Vec<(usize, String, String)> = Vec::new();
        let mut policy = ChartPolicy::Tilde;
        for (i, raw) in src.lines().enumerate() {
            let ln = i + 1;
            let line = raw.split('#').next().unwrap().trim();
            if line.is_empty() {
                continue;
            }
            let (head, rest) = line.split_once(char::is_whitespace).unwrap_or((line, ""));
            let rest = rest.trim();
            match head {
                "system" => name = Some(rest.to_string()),
                "vars" => {
                    let v: Vec<&str> = rest.split_whitespace().collect();
                    if v.len() != 2 {
                        return Err(SystemError::Syntax { line: ln, msg: "expected two variable names".into() });
                    }
                    names = Some(VarNames::new(v[0], v[1]));
                }
                "param" => params.extend(rest.split_whitespace().map(String::from)),
                "charts" => {
                    policy = match rest {
                        "tilde" => ChartPolicy::Tilde,
                        "oriented" => ChartPolicy::Oriented,
                        _ => return Err(SystemError::Syntax { line: ln, msg: format!("unknown chart policy {rest}") }),
                    }
                }
                "rule" => {
                    let (lhs, rhs) = rest.split_once('=').ok_or(SystemError::Syntax { line: ln, msg: "expected '='".into() })?;
                    let lhs = lhs.trim();
                    let sym = lhs.trim_end_matches('\'');
                    let order = (lhs.len() - sym.len()) as u32;
                    rule_lines.push((ln, sym.to_string(), order, rhs.trim().to_string()));
                }
                "abbrev" => {
                    let (lhs, rhs) = rest.split_once('=').ok_or(SystemError::Syntax { line: ln, msg: "expected '='".into() })?;
                    abbrev_lines.push((ln, lhs.trim().to_string(), rhs.trim().to_string()));
                }
                _ => {
                    let (lhs, rhs) = line
                        .split_once('=')
                        .ok_or(SystemError::Syntax { line: ln, msg: format!("unrecognised line '{line}'") })?;
                    let lhs = lhs.trim();
                    let var = lhs
                        .strip_suffix('\'')
                        .ok_or(SystemError::Syntax { line: ln, msg: "equation must start with a derivative".into() })?;
                    eqs.push((ln, var.to_string(), rhs.trim().to_string()));
                }
            }
        }
        let names = names.ok_or(SystemError::Missing("vars"))?;
        let pref: Vec<&str> = params.iter().map(|s| s.as_str()).collect();
        let base = Scope::new(names.clone()).with_params(&pref);
        let mut rules = Vec::new();
        for (ln, sym, order, rhs) in rule_lines {
            let p = parse_poly(&rhs, &base).map_err(|e| SystemError::Parse { line: ln, source: e })?;
            rules.push(Rule::new(&sym, order, p)?);
        }
        let rules = Rules::new(rules)?;
        let mut scope = base.with_rules(rules.clone());
        let mut abbrevs = BTreeMap::new();
        for (ln, n, rhs) in abbrev_lines {
            let p = parse_poly(&rhs, &scope).map_err(|e| SystemError::Parse { line: ln, source: e })?;
            abbrevs.insert(n.clone(), p.clone());
            scope = scope.with_abbrev(&n, p);
        }
        let mut f = None;
        let mut g = None;
        for (ln, var, rhs) in eqs {
            let p = parse_poly(&rhs, &scope).map_err(|e| match e.msg.as_str() {
                "expression is not polynomial" => SystemError::NotPolynomial(var.clone()),
                _ => SystemError::Parse { line: ln, source: e },
            })?;
            if var == names.first {
                f = Some(p);
            } else if var == names.second {
                g = Some(p);
            } else {
                return Err(SystemError::Syntax { line: ln, msg: format!("unknown variable {var}") });
            }
        }
        let mut s = PlanarSystem::new(
            &name.unwrap_or_else(|| "unnamed".into()),
            names,
            f.ok_or(SystemError::Missing("first equation"))?,
            g.ok_or(SystemError::Missing("second equation"))?,
            rules,
        );
        s.params.extend(params);
        s.abbrevs = abbrevs;
        s.policy = policy;
        Ok(s)
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!("system {}\n", self.name));
        out.push_str(&format!("vars {} {}\n", self.names.first, self.names.second));
        if !self.params.is_empty() {
            let ps: Vec<&str> = self.params.iter().map(|s| s.as_str()).collect();
            out.push_str(&format!("param {}\n", ps.join(" ")));
        }
        for r in self.rules.rules() {
            out.push_str(&format!("rule {}{} = {}\n", r.symbol, "'".repeat(r.order as usize), fmt_poly(&r.rhs, &self.names)));
        }
        for (n, e) in &self.abbrevs {
            out.push_str(&format!("abbrev {} = {}\n", n, fmt_poly(e, &self.names)));
        }
        if self.policy == ChartPolicy::Oriented {
            out.push_str("charts oriented\n");
        }
        out.push_str(&format!("{}' = {}\n", self.names.first, fmt_poly(&self.f, &self.names)));
        out.push_str(&format!("{}' = {}\n", self.names.second, fmt_poly(&self.g, &self.names)));
        out
    }

    /// Printed equations, one per line.
    pub fn display(&self) -> String {
        format!(
            "{}' = {}\n{}' = {}",
            self.names.first,
            fmt_poly(&self.f, &self.names),
            self.names.second,
            fmt_poly(&self.g, &self.names)
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const SRC: &str = "system T\nvars y z\nparam alpha\nrule q'' = 6*q^2 + x\ny' = -y^2 + z + 12 q\nz' = y z + alpha q''\n";

    #[test]
    fn parse_and_print() {
        let s = PlanarSystem::parse(SRC).unwrap();
        assert_eq!(s.names, VarNames::new("y", "z"));
        assert!(s.rules.has("q"));
        // q'' is reduced at parse time
        assert!(!s.g.has_var(&Var::jet("q", 2)));
        let back = PlanarSystem::parse(&s.to_text()).unwrap();
        assert_eq!(s, back);
        assert_eq!(s.to_text(), back.to_text());
    }

    #[test]
    fn errors_report_line() {
        let bad = "vars y z\ny' = z +\nz' = 1";
        match PlanarSystem::parse(bad) {
            Err(SystemError::Parse { line, .. }) => assert_eq!(line, 2),
            other => panic!("{other:?}"),
        }
        assert!(matches!(PlanarSystem::parse("vars y z\ny' = 1/y\nz' = 1"), Err(SystemError::NotPolynomial(_))));
    }
}
