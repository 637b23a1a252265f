//! Strategies and checks shared by the property suite and the acceptance run.
#![allow(dead_code)]

use bureau::birational::RationalMap;
use bureau::blowup::{regularize, BlowupTree, Options};
use bureau::catalog::{self, IDS};
use bureau::coeff::Rules;
use bureau::expr::VarNames;
use bureau::field::Frac;
use bureau::iterate::diagonal_scaling;
use bureau::newton::NewtonPolygon;
use bureau::picard::{classify, component_configuration, IntersectionDiagram};
use bureau::poly::{q_frac, q_int, Mono, Poly, Var, Q};
use bureau::system::PlanarSystem;
use proptest::prelude::*;
use proptest::test_runner::TestCaseError;
use std::collections::{BTreeMap, BTreeSet};
use std::sync::OnceLock;

pub type Check = Result<(), TestCaseError>;

/// Rule sets of the catalog systems, one per distinct set.
pub fn rule_sets() -> &'static [Rules] {
    static R: OnceLock<Vec<Rules>> = OnceLock::new();
    R.get_or_init(|| {
        let mut out: Vec<Rules> = Vec::new();
        for id in IDS {
            let r = catalog::load(id).unwrap().system.rules;
            if !out.contains(&r) {
                out.push(r);
            }
        }
        out
    })
}

/// Chart variables, x and every jet up to two past its rule order.
pub fn vars_of(r: &Rules) -> Vec<Var> {
    let mut v = vec![Var::U, Var::V, Var::X];
    for rule in r.rules() {
        for j in 0..=rule.order + 1 {
            v.push(Var::jet(&rule.symbol, j));
        }
    }
    v
}

pub fn poly_in(vars: Vec<Var>) -> impl Strategy<Value = Poly> {
    let n = vars.len();
    let term = (-4i64..=4, prop::collection::vec((0..n, 1u32..=2), 0..3));
    prop::collection::vec(term, 0..4).prop_map(move |ts| {
        Poly::from_terms(
            ts.into_iter()
                .map(|(c, fs)| (Mono::from_pairs(fs.into_iter().map(|(i, e)| (vars[i].clone(), e)).collect()), q_int(c))),
        )
    })
}

/// A rule set with two random polynomials over its jets.
pub fn ruled_pair() -> impl Strategy<Value = (usize, Poly, Poly)> {
    (0..rule_sets().len()).prop_flat_map(|k| {
        let vs = vars_of(&rule_sets()[k]);
        (Just(k), poly_in(vs.clone()), poly_in(vs))
    })
}

pub fn leibniz((k, a, b): (usize, Poly, Poly)) -> Check {
    let r = &rule_sets()[k];
    let lhs = r.diff(&(&a * &b));
    let rhs = &(&r.diff(&a) * &b) + &(&a * &r.diff(&b));
    prop_assert!(r.equal(&lhs, &rhs));
    // sums, and the chart-variable derivative as well
    prop_assert!(r.equal(&r.diff(&(&a + &b)), &(&r.diff(&a) + &r.diff(&b))));
    let du = (&a * &b).derivative(&Var::U);
    prop_assert_eq!(du, &(&a.derivative(&Var::U) * &b) + &(&a * &b.derivative(&Var::U)));
    Ok(())
}

pub fn confluence((k, a, b): (usize, Poly, Poly)) -> Check {
    let r = &rule_sets()[k];
    let ra = r.reduce(&a);
    prop_assert!(r.is_reduced(&ra));
    prop_assert_eq!(&r.reduce(&ra), &ra);
    prop_assert_eq!(r.reduce(&(&a * &b)), r.reduce(&(&ra * &r.reduce(&b))));
    prop_assert_eq!(r.reduce(&(&a + &b)), &ra + &r.reduce(&b));
    prop_assert_eq!(r.reduce(&r.diff(&a)), r.reduce(&r.diff(&ra)));
    // the order rules are listed in does not matter
    let mut list: Vec<_> = r.rules().cloned().collect();
    list.reverse();
    let rev = Rules::new(list).unwrap();
    prop_assert_eq!(rev.reduce(&a), ra);
    Ok(())
}

pub struct Run {
    pub system: PlanarSystem,
    pub tree: BlowupTree,
}

/// Regularisations of every catalog system, in both printed forms.
pub fn runs() -> &'static [Run] {
    static R: OnceLock<Vec<Run>> = OnceLock::new();
    R.get_or_init(|| {
        let mut out = Vec::new();
        for id in IDS {
            let e = catalog::load(id).unwrap();
            for s in [e.system, e.cascade_system] {
                let tree = regularize(&s, &Options::default()).unwrap();
                out.push(Run { system: s, tree });
            }
        }
        out
    })
}

pub fn all_charts() -> Vec<(usize, usize)> {
    runs().iter().enumerate().flat_map(|(i, r)| (0..r.tree.charts.len()).map(move |c| (i, c))).collect()
}

/// Moving along the chart field and mapping down agrees with the original
/// field at the image: `d/dx (to_root) = F(to_root)`.
pub fn blow_down((run, chart): (usize, usize)) -> Check {
    let r = &runs()[run];
    let ch = &r.tree.charts[chart];
    let rules = &r.system.rules;
    let field = r.system.field();
    for (comp, f) in [(&ch.to_root.0, &field.0), (&ch.to_root.1, &field.1)] {
        let moved = comp.total_derivative(&ch.field, rules);
        let image = f.subs(&ch.to_root, rules).unwrap();
        prop_assert!((&moved - &image).reduce(rules).is_zero(), "chart {} of {}", ch.label, r.system.name);
    }
    Ok(())
}

pub fn points() -> impl Strategy<Value = BTreeSet<(i64, i64)>> {
    prop::collection::btree_set((-6i64..=6, -6i64..=6), 1..10)
}

pub fn pick(pts: BTreeSet<(i64, i64)>) -> Check {
    let p = NewtonPolygon::from_support(pts);
    if p.hull.len() < 3 {
        prop_assert_eq!((p.interior, p.area), (0, Q::from_integer(0.into())));
        return Ok(());
    }
    let i = Q::from_integer(p.interior.into());
    let b = Q::from_integer(p.boundary.into());
    prop_assert_eq!(p.area, i + b / q_int(2) - q_int(1));
    Ok(())
}

/// Interior count by testing every point of the bounding box.
pub fn brute_interior(pts: BTreeSet<(i64, i64)>) -> Check {
    let p = NewtonPolygon::from_support(pts);
    let h = &p.hull;
    let mut count = 0u64;
    if h.len() >= 3 {
        let (x0, x1) = (h.iter().map(|q| q.0).min().unwrap(), h.iter().map(|q| q.0).max().unwrap());
        let (y0, y1) = (h.iter().map(|q| q.1).min().unwrap(), h.iter().map(|q| q.1).max().unwrap());
        for x in x0..=x1 {
            for y in y0..=y1 {
                let inside = (0..h.len()).all(|k| {
                    let (a, b) = (h[k], h[(k + 1) % h.len()]);
                    (b.0 - a.0) * (y - a.1) - (b.1 - a.1) * (x - a.0) > 0
                });
                count += inside as u64;
            }
        }
    }
    prop_assert_eq!(p.interior, count);
    Ok(())
}

fn map_comp(allow_den: bool) -> impl Strategy<Value = Frac> {
    let vars = vec![Var::U, Var::V, Var::X, Var::jet("q", 0)];
    (poly_in(vars), any::<bool>()).prop_map(move |(p, rational)| {
        if rational && allow_den {
            // never vanishes, whatever is substituted
            Frac::new(p, &Poly::one() + &(&Poly::u() * &Poly::u()))
        } else {
            Frac::from_poly(p)
        }
    })
}

fn map_strategy(allow_den: bool) -> impl Strategy<Value = (Frac, Frac)> {
    (map_comp(allow_den), map_comp(allow_den))
}

/// The inner map may be rational; with both rational the composite's
/// denominators need gcds far beyond what a property test should spend.
pub fn maps() -> impl Strategy<Value = ((Frac, Frac), (Frac, Frac))> {
    (map_strategy(true), map_strategy(false))
}

pub fn chain_rule((a, b): ((Frac, Frac), (Frac, Frac))) -> Check {
    let rules = rule_sets().iter().find(|r| r.has("q")).unwrap().clone();
    let n = VarNames::default();
    let m1 = RationalMap::new(n.clone(), n.clone(), a, rules.clone());
    let m2 = RationalMap::new(n.clone(), n, b, rules.clone());
    let lhs = m1.then(&m2).unwrap().jacobian_det();
    let rhs = &m1.jacobian_det() * &m1.pull(&m2.jacobian_det()).unwrap();
    prop_assert!((&lhs - &rhs).reduce(&rules).is_zero());
    Ok(())
}

pub fn diagrams() -> &'static [IntersectionDiagram] {
    static D: OnceLock<Vec<IntersectionDiagram>> = OnceLock::new();
    D.get_or_init(|| {
        IDS.iter()
            .map(|id| {
                let e = catalog::load(id).unwrap();
                component_configuration(&regularize(&e.cascade_system, &Options::default()).unwrap()).unwrap()
            })
            .collect()
    })
}

pub fn relabellings() -> impl Strategy<Value = (usize, Vec<usize>)> {
    (0..IDS.len()).prop_flat_map(|k| {
        let n = diagrams()[k].nodes.len();
        (Just(k), Just((0..n).collect::<Vec<_>>()).prop_shuffle())
    })
}

pub fn classify_relabelled((k, perm): (usize, Vec<usize>)) -> Check {
    let d = &diagrams()[k];
    let mut inv = vec![0; perm.len()];
    for (new, &old) in perm.iter().enumerate() {
        inv[old] = new;
    }
    let e = IntersectionDiagram {
        n: d.n,
        nodes: perm.iter().map(|&i| d.nodes[i].clone()).collect(),
        edges: d.edges.iter().map(|&(a, b, m)| (inv[a].min(inv[b]), inv[a].max(inv[b]), m)).collect(),
    };
    let a = classify(d);
    let b = classify(&e);
    prop_assert_eq!(a.label, b.label);
    let classes = |d: &IntersectionDiagram, m: &[usize]| m.iter().map(|&i| d.nodes[i].class.clone()).collect::<BTreeSet<_>>();
    prop_assert_eq!(classes(d, &a.node_map), classes(&e, &b.node_map));
    Ok(())
}

pub fn scalings() -> impl Strategy<Value = (usize, Q, Q)> {
    let q = (1i64..=5, 1i64..=4, any::<bool>()).prop_map(|(n, d, neg)| q_frac(if neg { -n } else { n }, d));
    (0..IDS.len(), q.clone(), q)
}

/// Rescales a catalog system by `(lambda, mu)` and recovers a scaling that
/// takes it back.
pub fn scaling_round_trip((k, l, m): (usize, Q, Q)) -> Check {
    let c = catalog::load(IDS[k]).unwrap().system;
    let back = BTreeMap::from([(Var::U, Poly::u().scale(&l.recip())), (Var::V, Poly::v().scale(&m.recip()))]);
    let mut s = c.clone();
    s.f = c.f.subs_many(&back).scale(&l);
    s.g = c.g.subs_many(&back).scale(&m);
    let Some((a, b)) = diagonal_scaling(&s, &c) else {
        return Err(TestCaseError::fail(format!("no scaling found for {} with ({l}, {m})", c.name)));
    };
    let fwd = BTreeMap::from([(Var::U, Poly::u().scale(&a)), (Var::V, Poly::v().scale(&b))]);
    prop_assert!(c.rules.equal(&s.f.subs_many(&fwd).scale(&a.recip()), &c.f));
    prop_assert!(c.rules.equal(&s.g.subs_many(&fwd).scale(&b.recip()), &c.g));
    Ok(())
}
