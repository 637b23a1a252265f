//! Repeated regularisation: every polynomial leaf of a blow-up tree becomes a
//! new root, with its map back to the original variables.

use crate::birational::RationalMap;
use crate::blowup::{regularize, BlowupError, BlowupTree, ChartKind, Options};
use crate::catalog;
use crate::expr::VarNames;
use crate::field::{chart_table, FieldError, Frac};
use crate::poly::{Poly, Var, Q};
use crate::system::PlanarSystem;
use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use std::collections::BTreeMap;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum IterateError {
    #[error("at least one pass is needed")]
    NoPasses,
    #[error(transparent)]
    Blowup(#[from] BlowupError),
    #[error(transparent)]
    Field(#[from] FieldError),
}

#[derive(Clone, Debug, PartialEq)]
pub struct CatalogMatch {
    pub id: String,
    /// The node's first variable is `lambda` times the catalog's first one.
    pub lambda: Q,
    pub mu: Q,
}

#[derive(Clone, Debug)]
pub struct IterNode {
    pub id: usize,
    pub parent: Option<usize>,
    pub pass: usize,
    /// Label of the leaf chart this node was promoted from.
    pub origin: Option<String>,
    pub system: PlanarSystem,
    /// Node variables to the variables of the original system.
    pub back_map: RationalMap,
    pub tree: Option<BlowupTree>,
    pub children: Vec<usize>,
    /// Leaves whose chart system is not polynomial.
    pub non_promotable: Vec<String>,
    pub matched: Option<CatalogMatch>,
}

#[derive(Clone, Debug)]
pub struct IterationTree {
    pub nodes: Vec<IterNode>,
}

impl IterationTree {
    pub fn root(&self) -> &IterNode {
        &self.nodes[0]
    }

    pub fn at_pass(&self, pass: usize) -> impl Iterator<Item = &IterNode> {
        self.nodes.iter().filter(move |n| n.pass == pass)
    }

    pub fn describe(&self) -> String {
        let mut out = String::new();
        for n in &self.nodes {
            let pad = "  ".repeat(n.pass);
            let from = n.origin.as_deref().map(|o| format!(" from {o}")).unwrap_or_default();
            out.push_str(&format!("{pad}[{}] pass {}{}\n", n.id, n.pass, from));
            for l in n.system.display().lines() {
                out.push_str(&format!("{pad}  {l}\n"));
            }
            if n.pass > 0 {
                for l in n.back_map.display().lines() {
                    out.push_str(&format!("{pad}  {l}\n"));
                }
            }
            if let Some(m) = &n.matched {
                out.push_str(&format!("{pad}  matches {} with scaling ({}, {})\n", m.id, m.lambda, m.mu));
            }
            for l in &n.non_promotable {
                out.push_str(&format!("{pad}  leaf {l} is not polynomial\n"));
            }
        }
        out
    }
}

pub fn pass_names(pass: usize) -> VarNames {
    match pass {
        0 => VarNames::new("y", "z"),
        1 => VarNames::new("u", "v"),
        2 => VarNames::new("w", "t"),
        k => VarNames::new(&format!("u{k}"), &format!("v{k}")),
    }
}

pub fn iterate_regularize(s: &PlanarSystem, passes: usize, opts: &Options) -> Result<IterationTree, IterateError> {
    if passes == 0 {
        return Err(IterateError::NoPasses);
    }
    let root = IterNode {
        id: 0,
        parent: None,
        pass: 0,
        origin: None,
        system: s.clone(),
        back_map: RationalMap::identity(s.names.clone(), s.rules.clone()),
        tree: None,
        children: Vec::new(),
        non_promotable: Vec::new(),
        matched: match_catalog(s),
    };
    let mut nodes = vec![root];
    for pass in 1..=passes {
        let current: Vec<usize> = nodes.iter().filter(|n| n.pass == pass - 1).map(|n| n.id).collect();
        for id in current {
            let tree = regularize(&nodes[id].system, opts)?;
            let mut promoted = Vec::new();
            let mut skipped = Vec::new();
            for leaf in tree.leaves() {
                let Some(sys) = leaf.system(&nodes[id].system) else {
                    skipped.push(leaf.label.clone());
                    continue;
                };
                let names = pass_names(pass);
                let to_node =
                    RationalMap::new(leaf.names.clone(), nodes[id].system.names.clone(), leaf.to_root.clone(), sys.rules.clone());
                // the newest exceptional coordinate goes first
                let (sys, to_node) = if leaf.kind == ChartKind::BigUChild {
                    let sw = RationalMap::new(names.clone(), leaf.names.clone(), (Frac::v(), Frac::u()), sys.rules.clone());
                    (sys.swapped(), sw.then(&to_node)?)
                } else {
                    (sys, to_node)
                };
                let sys = sys.renamed(names.clone());
                let mut to_node = to_node;
                to_node.source = names;
                let back_map = to_node.then(&nodes[id].back_map)?;
                promoted.push((leaf.label.clone(), sys, back_map));
            }
            for (label, sys, back_map) in promoted {
                let nid = nodes.len();
                let matched = match_catalog(&sys);
                nodes.push(IterNode {
                    id: nid,
                    parent: Some(id),
                    pass,
                    origin: Some(label),
                    system: sys,
                    back_map,
                    tree: None,
                    children: Vec::new(),
                    non_promotable: Vec::new(),
                    matched,
                });
                nodes[id].children.push(nid);
            }
            nodes[id].non_promotable = skipped;
            nodes[id].tree = Some(tree);
        }
    }
    Ok(IterationTree { nodes })
}

/// Exact rational `k`-th roots of `r`, positive root first; `k` may be negative.
pub fn rational_roots(r: &Q, k: i64) -> Vec<Q> {
    if r.is_zero() || k == 0 {
        return Vec::new();
    }
    let r = if k < 0 { r.recip() } else { r.clone() };
    let k = k.unsigned_abs() as u32;
    let root_int = |n: &BigInt| -> Option<BigInt> {
        let c = n.abs().nth_root(k);
        (c.pow(k) == n.abs()).then_some(c)
    };
    let (Some(a), Some(b)) = (root_int(r.numer()), root_int(r.denom())) else {
        return Vec::new();
    };
    let mag = Q::new(a, b);
    match (k.is_multiple_of(2), r.is_negative()) {
        (true, true) => Vec::new(),
        (true, false) => vec![mag.clone(), -mag],
        (false, neg) => vec![if neg { -mag } else { mag }],
    }
}

fn qpow(q: &Q, e: i64) -> Q {
    q.pow(e as i32)
}

/// `(e1, e2, r)` with `lambda^e1 mu^e2 = r`.
type ScaleEq = (i64, i64, Q);

fn scaling_equations(a: &Poly, b: &Poly, shift: (i64, i64)) -> Option<Vec<ScaleEq>> {
    let ta = chart_table(a);
    let tb = chart_table(b);
    if ta.keys().ne(tb.keys()) {
        return None;
    }
    let mut out = Vec::new();
    for ((i, j), ca) in &ta {
        let cb = &tb[&(*i, *j)];
        let r = cb.lc() / ca.lc();
        if &ca.scale(&r) != cb {
            return None;
        }
        out.push((*i as i64 + shift.0, *j as i64 + shift.1, r));
    }
    Some(out)
}

/// Scaling `(lambda, mu)` with `s(lambda U, mu V)` equal to `c` after dividing
/// the equations by `lambda`, `mu`.
pub fn diagonal_scaling(s: &PlanarSystem, c: &PlanarSystem) -> Option<(Q, Q)> {
    if s.rules != c.rules {
        return None;
    }
    let mut eqs = scaling_equations(&s.f, &c.f, (-1, 0))?;
    eqs.extend(scaling_equations(&s.g, &c.g, (0, -1))?);
    let mut lambdas = Vec::new();
    if let Some((e1, _, r)) = eqs.iter().find(|(e1, e2, _)| *e2 == 0 && *e1 != 0) {
        lambdas = rational_roots(r, *e1);
    } else {
        'pairs: for (a1, b1, r1) in &eqs {
            for (a2, b2, r2) in &eqs {
                let det = a1 * b2 - a2 * b1;
                if det != 0 {
                    lambdas = rational_roots(&(qpow(r1, *b2) / qpow(r2, *b1)), det);
                    break 'pairs;
                }
            }
        }
        if lambdas.is_empty() && eqs.iter().all(|(e1, _, _)| *e1 == 0) {
            lambdas.push(Q::one());
        }
    }
    for l in lambdas {
        let mus = match eqs.iter().find(|(_, e2, _)| *e2 != 0) {
            Some((e1, e2, r)) => rational_roots(&(r / qpow(&l, *e1)), *e2),
            None => vec![Q::one()],
        };
        for m in mus {
            if eqs.iter().all(|(e1, e2, r)| &(qpow(&l, *e1) * qpow(&m, *e2)) == r) && rescaled_equals(s, c, &l, &m) {
                return Some((l, m));
            }
        }
    }
    None
}

fn rescaled_equals(s: &PlanarSystem, c: &PlanarSystem, l: &Q, m: &Q) -> bool {
    let map = BTreeMap::from([(Var::U, Poly::u().scale(l)), (Var::V, Poly::v().scale(m))]);
    let f = s.f.subs_many(&map).scale(&l.recip());
    let g = s.g.subs_many(&map).scale(&m.recip());
    c.rules.reduce(&(&f - &c.f)).is_zero() && c.rules.reduce(&(&g - &c.g)).is_zero()
}

/// First catalog system reachable from `s` by a diagonal rescaling.
pub fn match_catalog(s: &PlanarSystem) -> Option<CatalogMatch> {
    for e in catalog::all() {
        for c in [&e.system, &e.cascade_system] {
            if let Some((lambda, mu)) = diagonal_scaling(s, c) {
                return Some(CatalogMatch { id: e.id.to_string(), lambda, mu });
            }
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::q_frac;

    #[test]
    fn roots() {
        assert_eq!(rational_roots(&q_frac(4, 9), 2), vec![q_frac(2, 3), q_frac(-2, 3)]);
        assert_eq!(rational_roots(&q_frac(-8, 1), 3), vec![q_frac(-2, 1)]);
        assert_eq!(rational_roots(&q_frac(8, 1), -3), vec![q_frac(1, 2)]);
        assert!(rational_roots(&q_frac(2, 1), 2).is_empty());
        assert!(rational_roots(&q_frac(-1, 1), 2).is_empty());
    }

    #[test]
    fn catalog_system_matches_itself() {
        let e = catalog::load("IX.B(2)").unwrap();
        let m = match_catalog(&e.system).unwrap();
        assert_eq!((m.id.as_str(), m.lambda, m.mu), ("IX.B(2)", Q::one(), Q::one()));
    }

    #[test]
    fn unrelated_system_has_no_match() {
        let s = PlanarSystem::parse("vars y z\ny' = y + z^3\nz' = y^2 - 7").unwrap();
        assert!(match_catalog(&s).is_none());
    }
}
