//! Rational changes of the dependent variables between planar systems.
//!
//! A map stores the target variables as rational functions of the source
//! variables. Both sides use the chart slots `U`, `V`; the variable names are
//! only for parsing and printing.

use crate::blowup::Chart;
use crate::coeff::Rules;
use crate::expr::{fmt_frac, parse_frac, ParseError, Scope, VarNames};
use crate::field::{chart_table, FieldError, Frac};
use crate::poly::{Poly, Var, Q};
use crate::system::PlanarSystem;
use std::collections::BTreeMap;

#[derive(Clone, Debug, PartialEq)]
pub struct RationalMap {
    pub source: VarNames,
    pub target: VarNames,
    pub comps: (Frac, Frac),
    pub rules: Rules,
}

impl RationalMap {
    pub fn new(source: VarNames, target: VarNames, comps: (Frac, Frac), rules: Rules) -> RationalMap {
        let comps = (comps.0.reduce(&rules), comps.1.reduce(&rules));
        RationalMap { source, target, comps, rules }
    }

    /// Components are parsed in `scope`, whose chart names are the source names.
    pub fn parse(scope: &Scope, target: VarNames, first: &str, second: &str) -> Result<RationalMap, ParseError> {
        let a = parse_frac(first, scope)?;
        let b = parse_frac(second, scope)?;
        Ok(RationalMap::new(scope.names.clone(), target, (a, b), scope.rules.clone()))
    }

    pub fn identity(names: VarNames, rules: Rules) -> RationalMap {
        RationalMap { source: names.clone(), target: names, comps: (Frac::u(), Frac::v()), rules }
    }

    /// Pulls a function of the target variables back to the source.
    pub fn pull(&self, f: &Frac) -> Result<Frac, FieldError> {
        f.subs(&self.comps, &self.rules)
    }

    /// `next` after `self`.
    pub fn then(&self, next: &RationalMap) -> Result<RationalMap, FieldError> {
        let comps = (self.pull(&next.comps.0)?, self.pull(&next.comps.1)?);
        Ok(RationalMap::new(self.source.clone(), next.target.clone(), comps, self.rules.clone()))
    }

    /// `det d(t1, t2)/d(s1, s2)`; satisfies the chain rule.
    pub fn jacobian_det(&self) -> Frac {
        let (a, b) = &self.comps;
        let d = &(&a.diff_var(&Var::U) * &b.diff_var(&Var::V)) - &(&a.diff_var(&Var::V) * &b.diff_var(&Var::U));
        d.reduce(&self.rules)
    }

    /// Factor `c` with `dt2 ^ dt1 = c ds1 ^ ds2`, i.e. the pull-back of the
    /// target area form written with the source pair in reversed order. This
    /// is the multiplier to hand to `hamiltonian_wrt_factor`.
    pub fn jacobian_factor(&self) -> Frac {
        -self.jacobian_det()
    }

    pub fn display(&self) -> String {
        format!(
            "{} = {}\n{} = {}",
            self.target.first,
            fmt_frac(&self.comps.0, &self.source),
            self.target.second,
            fmt_frac(&self.comps.1, &self.source)
        )
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct TransportReport {
    pub ok: bool,
    /// `d/dx t_i` along the source flow minus the target field at the image.
    pub residuals: (Frac, Frac),
}

/// Whether `m` carries solutions of `source` to solutions of `target`.
pub fn transport_check(m: &RationalMap, source: &PlanarSystem, target: &PlanarSystem) -> Result<TransportReport, FieldError> {
    let rules = &m.rules;
    let field = source.field();
    let tf = target.field();
    let mut res = Vec::new();
    for (comp, rhs) in [(&m.comps.0, &tf.0), (&m.comps.1, &tf.1)] {
        let lhs = comp.total_derivative(&field, rules);
        let r = m.pull(rhs)?;
        res.push((&lhs - &r).reduce(rules));
    }
    let b = res.pop().unwrap();
    let a = res.pop().unwrap();
    Ok(TransportReport { ok: a.is_zero() && b.is_zero(), residuals: (a, b) })
}

/// Whether `inv` undoes `m`, i.e. `inv . m` is the identity on the source.
pub fn compose_check(m: &RationalMap, inv: &RationalMap) -> Result<bool, FieldError> {
    let c = m.then(inv)?;
    let a = (&c.comps.0 - &Frac::u()).reduce(&m.rules);
    let b = (&c.comps.1 - &Frac::v()).reduce(&m.rules);
    Ok(a.is_zero() && b.is_zero())
}

/// General curve of degree `degree` with unknown coefficient functions
/// `{prefix}{i}{j}` multiplying `s^i t^j`.
#[derive(Clone, Debug)]
pub struct CurveAnsatz {
    pub degree: u32,
    pub prefix: String,
    /// `(name, i, j)`
    pub unknowns: Vec<(String, u32, u32)>,
    pub expr: Poly,
}

impl CurveAnsatz {
    /// `first` picks the chart variable carrying the first index.
    pub fn new(prefix: &str, degree: u32, first: Var) -> CurveAnsatz {
        let (s, t) = if first == Var::U { (Var::U, Var::V) } else { (Var::V, Var::U) };
        let mut unknowns = Vec::new();
        let mut expr = Poly::zero();
        for total in (0..=degree).rev() {
            for i in (0..=total).rev() {
                let j = total - i;
                let name = format!("{prefix}{i}{j}");
                let term = &(&Poly::jet(&name, 0) * &Poly::var(s.clone()).pow(i)) * &Poly::var(t.clone()).pow(j);
                expr = &expr + &term;
                unknowns.push((name, i, j));
            }
        }
        CurveAnsatz { degree, prefix: prefix.to_string(), unknowns, expr }
    }

    pub fn unknown(&self, i: u32, j: u32) -> Poly {
        Poly::jet(&format!("{}{}{}", self.prefix, i, j), 0)
    }

    fn rank(&self, name: &str) -> Option<(u32, u32)> {
        self.unknowns.iter().find(|(n, _, _)| n == name).map(|(_, i, j)| (i + j, *i))
    }
}

#[derive(Clone, Debug, Default)]
pub struct AnsatzConstraints {
    /// One linear relation per point that imposes a new condition.
    pub relations: Vec<Poly>,
    /// Unknowns eliminated so far, in terms of the remaining ones.
    pub solved: BTreeMap<String, Poly>,
    /// Indices of points where the curve became identically zero.
    pub degenerate: Vec<usize>,
}

/// Substitutes unknown coefficient functions (and their derivatives).
pub fn substitute_unknowns(p: &Poly, values: &BTreeMap<String, Poly>, rules: &Rules) -> Poly {
    let mut map = BTreeMap::new();
    for v in p.vars() {
        if let Var::Jet(sym, k) = &v {
            if let Some(e) = values.get(sym.as_ref()) {
                map.insert(v.clone(), rules.diff_n(e, *k));
            }
        }
    }
    if map.is_empty() {
        return p.clone();
    }
    rules.reduce(&p.subs_many(&map))
}

fn strip_chart_monomial(n: &Poly) -> Poly {
    let a = n.min_degree_in(&Var::U);
    let b = n.min_degree_in(&Var::V);
    let m = &Poly::u().pow(a) * &Poly::v().pow(b);
    n.exact_div(&m).expect("monomial content divides")
}

/// Conditions for the ansatz curve to pass through each point, imposed in
/// order; each point is given in the chart that sees it together with that
/// chart's map to the original variables.
pub fn ansatz_constraints(
    a: &CurveAnsatz,
    points: &[(&Chart, (Poly, Poly))],
    rules: &Rules,
) -> Result<AnsatzConstraints, FieldError> {
    let mut out = AnsatzConstraints::default();
    for (idx, (chart, (pa, pb))) in points.iter().enumerate() {
        let e = substitute_unknowns(&a.expr, &out.solved, rules);
        let t = Frac::from_poly(e).subs(&chart.to_root, rules)?;
        let n = t.num();
        if n.is_zero() {
            out.degenerate.push(idx);
            continue;
        }
        let n = strip_chart_monomial(n);
        let val = rules.reduce(&n.subs(&Var::U, pa).subs(&Var::V, pb));
        if val.is_zero() {
            continue;
        }
        let val = val.primitive_int();
        // eliminate the lowest unknown with a constant coefficient
        let mut best: Option<((u32, u32), String, Q)> = None;
        for (name, _, _) in &a.unknowns {
            let v = Var::jet(name, 0);
            if val.degree_in(&v) != 1 {
                continue;
            }
            let Some(c) = val.coeff_of(&v, 1).as_constant() else { continue };
            let r = a.rank(name).unwrap();
            if best.as_ref().is_none_or(|(br, _, _)| r < *br) {
                best = Some((r, name.clone(), c));
            }
        }
        if let Some((_, name, c)) = best {
            let v = Var::jet(&name, 0);
            let rest = val.subs(&v, &Poly::zero());
            let sol = rest.scale(&-(Q::from_integer(1.into()) / c));
            let one = BTreeMap::from([(name.clone(), sol.clone())]);
            for e in out.solved.values_mut() {
                *e = substitute_unknowns(e, &one, rules);
            }
            out.solved.insert(name, sol);
        }
        out.relations.push(val);
    }
    Ok(out)
}

/// Coefficients (by chart monomial) of `d/dx t_i - target_i(t)` along the
/// source flow, for an ansatz pair `t` in the source variables.
pub fn compatibility_constraints(
    t: &(Poly, Poly),
    source: &PlanarSystem,
    target: &PlanarSystem,
    rules: &Rules,
) -> Result<Vec<Poly>, FieldError> {
    let field = source.field();
    let m = (Frac::from_poly(t.0.clone()), Frac::from_poly(t.1.clone()));
    let tf = target.field();
    let mut out = Vec::new();
    for (comp, rhs) in [(&m.0, &tf.0), (&m.1, &tf.1)] {
        let r = (&comp.total_derivative(&field, rules) - &rhs.subs(&m, rules)?).reduce(rules);
        let Some(p) = r.as_poly() else { unreachable!("polynomial ansatz into a polynomial system") };
        for (_, c) in chart_table(p) {
            let c = rules.reduce(&c);
            if !c.is_zero() {
                out.push(c.primitive_int());
            }
        }
    }
    out.sort();
    out.dedup();
    Ok(out)
}

/// Whether an assignment of the unknowns satisfies every constraint.
pub fn satisfies(constraints: &[Poly], values: &BTreeMap<String, Poly>, rules: &Rules) -> bool {
    constraints.iter().all(|c| substitute_unknowns(c, values, rules).is_zero())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::{parse_poly, poly};

    #[test]
    fn identity_factor_is_one() {
        let m = RationalMap::identity(VarNames::new("y", "z"), Rules::empty());
        assert_eq!(m.jacobian_det(), Frac::one());
        assert!(compose_check(&m, &m).unwrap());
    }

    #[test]
    fn ansatz_has_all_monomials() {
        let a = CurveAnsatz::new("c", 3, Var::U);
        assert_eq!(a.unknowns.len(), 10);
        assert_eq!(a.expr.len(), 10);
        assert_eq!(a.unknowns[0].0, "c30");
    }

    #[test]
    fn unknown_derivatives_substituted() {
        let rules = Rules::empty();
        let sc = Scope::new(VarNames::new("y", "z"));
        let c = parse_poly("b00 - a00'", &sc).unwrap();
        let vals = BTreeMap::from([("a00".to_string(), poly("q")), ("b00".to_string(), poly("q'"))]);
        assert!(satisfies(&[c], &vals, &rules));
    }
}
