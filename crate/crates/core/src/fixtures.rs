//! Runs every printed example in the catalog against the engine.
//!
//! Fixtures are independent and may run concurrently; results come back
//! sorted by id.

use crate::birational::{compose_check, transport_check, RationalMap};
use crate::blowup::{extract_conditions, regularize, BlowupTree, Options};
use crate::catalog::{self, CatalogEntry, PASS_MAPS};
use crate::expr::{fmt_frac, fmt_poly, parse_frac, parse_poly, VarNames};
use crate::field::Frac;
use crate::hamiltonian::{equal_up_to_gauge, hamiltonian_wrt_factor, is_standard, reconstruct};
use crate::iterate::{iterate_regularize, match_catalog, IterNode, IterationTree};
use crate::newton::{chiba_polytope, polygon_of_hamiltonian, Shape};
use crate::par::{self, Exec};
use crate::picard::{classify, component_configuration, verify_isometry, DivisorClass, IntersectionDiagram};
use crate::poly::{q_frac, q_int, Poly};
use crate::system::PlanarSystem;
use serde::Serialize;
use std::collections::BTreeSet;

#[derive(Clone, Debug, Serialize)]
pub struct FixtureResult {
    pub id: String,
    pub passed: bool,
    pub detail: String,
}

type Outcome = Result<(bool, String), String>;
type Check = Box<dyn Fn() -> Outcome + Send + Sync>;

fn err<E: std::fmt::Display>(e: E) -> String {
    e.to_string()
}

pub fn run(exec: Exec) -> Vec<FixtureResult> {
    let checks = all_checks();
    let mut out: Vec<FixtureResult> = par::map(exec, &checks, |(id, f)| {
        let (passed, detail) = f().unwrap_or_else(|e| (false, format!("error: {e}")));
        FixtureResult { id: id.clone(), passed, detail }
    });
    out.sort_by(|a, b| a.id.cmp(&b.id));
    out
}

fn all_checks() -> Vec<(String, Check)> {
    let mut v: Vec<(String, Check)> = Vec::new();
    for id in catalog::IDS {
        v.push((format!("cascade/{id}"), Box::new(move || check_cascade(id))));
        v.push((format!("surface/{id}"), Box::new(move || check_surface(id))));
        v.push((format!("delta/{id}"), Box::new(move || check_delta(id))));
    }
    for lc in catalog::lattice_correspondences() {
        v.push((format!("lattice/{}", lc.id), Box::new(move || check_lattice(&lc))));
    }
    for m in catalog::map_fixtures() {
        v.push((format!("map/{}", m.id), Box::new(move || check_map(m.id))));
    }
    v.push(("jacobian/IX.B(2) -> V".into(), Box::new(|| check_jacobian("IX.B(2) -> V", "z92/36"))));
    v.push((
        "jacobian/XIII -> IX.B(3) (alpha -> -alpha)".into(),
        Box::new(|| check_jacobian("XIII -> IX.B(3) (alpha -> -alpha)", "-y13/2")),
    ));
    for h in catalog::hamiltonian_fixtures() {
        v.push((format!("hamiltonian/{}", h.id), Box::new(move || check_hamiltonian(h.id))));
    }
    for id in ["IX.B(2)", "IX.B(5)", "XIII", "XIV"] {
        v.push((format!("standard/{id}"), Box::new(move || check_not_standard(id))));
    }
    for (id, gauge, genus, area) in [("H5", false, 1, 2), ("H_Ok", false, 1, 2), ("H_Bu92", true, 1, 3), ("H_Bu13", true, 1, 3)] {
        v.push((format!("newton/{id}"), Box::new(move || check_newton(id, gauge, genus, area))));
    }
    v.push(("newton/H_Bu92 without gauge".into(), Box::new(check_newton_bu92_bare)));
    v.push(("newton/H2_Bu13".into(), Box::new(check_newton_h2)));
    for (id, genus, area) in [("IX.B(2)", 0, 1), ("XIV", 0, 1), ("V", 1, 2), ("IX.B(3)", 1, 2)] {
        v.push((format!("chiba/{id}"), Box::new(move || check_chiba(id, genus, area))));
    }
    v.push(("conditions/V".into(), Box::new(check_conditions_v)));
    v.push(("conditions/XIII".into(), Box::new(check_conditions_xiii)));
    v.push(("conditions/IX.B(5)".into(), Box::new(check_conditions_ixb5)));
    v.push(("iterate/IX.B(5)".into(), Box::new(check_iterate_ixb5)));
    v.push(("iterate/XIII".into(), Box::new(check_iterate_xiii)));
    v
}

fn tree_of(e: &CatalogEntry) -> Result<BlowupTree, String> {
    regularize(&e.cascade_system, &Options::default()).map_err(err)
}

fn diagram_of(id: &str) -> Result<(CatalogEntry, IntersectionDiagram), String> {
    let e = catalog::load(id).map_err(err)?;
    let d = component_configuration(&tree_of(&e)?).map_err(err)?;
    Ok((e, d))
}

/// Compares centers by value, cascade by cascade; labels are reported only.
pub fn compare_centers(e: &CatalogEntry, t: &BlowupTree) -> Result<Vec<String>, String> {
    let printed = e.printed_centers().map_err(err)?;
    let ours = t.cascade_centers();
    let rules = &e.cascade_system.rules;
    let names = VarNames::default();
    let mut diffs = Vec::new();
    if printed.len() != ours.len() {
        diffs.push(format!("{} cascades printed, {} computed", printed.len(), ours.len()));
    }
    for (ci, (p, o)) in printed.iter().zip(&ours).enumerate() {
        for k in 0..p.len().max(o.len()) {
            match (p.get(k), o.get(k)) {
                (Some((pl, pa, pb)), Some((ol, oa, ob))) => {
                    if !rules.equal(pa, oa) || !rules.equal(pb, ob) {
                        diffs.push(format!(
                            "cascade {} step {}: printed {pl} ({}, {}), computed {ol} ({}, {})",
                            ci + 1,
                            k + 1,
                            fmt_poly(pa, &names),
                            fmt_poly(pb, &names),
                            fmt_poly(oa, &names),
                            fmt_poly(ob, &names)
                        ));
                    }
                }
                (Some((pl, _, _)), None) => diffs.push(format!("cascade {} step {}: printed {pl}, not computed", ci + 1, k + 1)),
                (None, Some((ol, _, _))) => diffs.push(format!("cascade {} step {}: computed {ol}, not printed", ci + 1, k + 1)),
                (None, None) => {}
            }
        }
    }
    Ok(diffs)
}

fn check_cascade(id: &str) -> Outcome {
    let e = catalog::load(id).map_err(err)?;
    let t = tree_of(&e)?;
    let diffs = compare_centers(&e, &t)?;
    let lens: Vec<usize> = t.cascades.iter().map(|c| c.blowups.len()).collect();
    let head = format!("regular {}, lengths {:?}", t.is_regular(), lens);
    if diffs.is_empty() {
        Ok((t.is_regular(), head))
    } else {
        Ok((false, format!("{head}; {}", diffs.join("; "))))
    }
}

fn check_surface(id: &str) -> Outcome {
    let (e, d) = diagram_of(id)?;
    let got = classify(&d).label;
    Ok((got == e.surface, format!("classified {got}, printed {}", e.surface)))
}

fn check_delta(id: &str) -> Outcome {
    let (e, d) = diagram_of(id)?;
    let printed: BTreeSet<DivisorClass> =
        e.delta.iter().map(|s| DivisorClass::parse(s, e.basis, d.n)).collect::<Result<_, _>>().map_err(err)?;
    let ours = d.minus_two_classes();
    let extra: Vec<String> = ours.difference(&printed).map(|c| c.display(e.basis)).collect();
    let missing: Vec<String> = printed.difference(&ours).map(|c| c.display(e.basis)).collect();
    if extra.is_empty() && missing.is_empty() {
        Ok((true, format!("{} classes agree", ours.len())))
    } else {
        Ok((false, format!("computed only: {}; printed only: {}", extra.join(", "), missing.join(", "))))
    }
}

fn check_lattice(lc: &catalog::LatticeCorrespondence) -> Outcome {
    let (_, a) = diagram_of(lc.from)?;
    let (eb, b) = diagram_of(lc.to)?;
    let a = a.with_extra_blowups(lc.extra);
    let images: Vec<DivisorClass> =
        lc.images.iter().map(|s| DivisorClass::parse(s, eb.basis, b.n)).collect::<Result<_, _>>().map_err(err)?;
    let ok = verify_isometry(&images, &a, &b).map_err(err)?;
    Ok((ok, if ok { "isometry".into() } else { "printed images do not preserve the lattice data".into() }))
}

fn check_map(id: &str) -> Outcome {
    let m = catalog::map_fixture(id).ok_or("unknown map")?;
    let f = transport_check(&m.forward, &m.source, &m.target).map_err(err)?;
    let i = transport_check(&m.inverse, &m.target, &m.source).map_err(err)?;
    let c1 = compose_check(&m.forward, &m.inverse).map_err(err)?;
    let c2 = compose_check(&m.inverse, &m.forward).map_err(err)?;
    let mut detail = format!("forward {}, inverse {}, compositions {} {}", f.ok, i.ok, c1, c2);
    if !f.ok {
        let n = &m.source.names;
        detail.push_str(&format!("; forward residuals {} | {}", fmt_frac(&f.residuals.0, n), fmt_frac(&f.residuals.1, n)));
    }
    if !i.ok {
        let n = &m.target.names;
        detail.push_str(&format!("; inverse residuals {} | {}", fmt_frac(&i.residuals.0, n), fmt_frac(&i.residuals.1, n)));
    }
    Ok((f.ok && i.ok && c1 && c2, detail))
}

fn check_jacobian(id: &str, printed: &str) -> Outcome {
    let m = catalog::map_fixture(id).ok_or("unknown map")?;
    let expected = parse_frac(printed, &m.source.scope()).map_err(err)?;
    let got = m.forward.jacobian_factor();
    Ok((got == expected, format!("computed {}, printed {}", fmt_frac(&got, &m.source.names), printed)))
}

fn check_hamiltonian(id: &str) -> Outcome {
    let h = catalog::hamiltonian_fixture(id).ok_or("unknown Hamiltonian")?;
    let s = &h.system;
    let got = match &h.factor {
        None => reconstruct(s),
        Some(c) => hamiltonian_wrt_factor(s, c),
    };
    match got {
        Ok(g) => {
            let ok = equal_up_to_gauge(s, &g, &h.h);
            Ok((ok, format!("computed {}", fmt_poly(&g, &s.names))))
        }
        Err(e) => Ok((false, e.describe(&s.names))),
    }
}

fn check_not_standard(id: &str) -> Outcome {
    let e = catalog::load(id).map_err(err)?;
    let st = is_standard(&e.system);
    Ok((!st, format!("standard form Hamiltonian: {st}")))
}

fn with_gauge(id: &str, gauge: bool) -> Result<(catalog::HamiltonianFixture, Poly), String> {
    let h = catalog::hamiltonian_fixture(id).ok_or("unknown Hamiltonian")?;
    let mut p = h.h.clone();
    if gauge {
        p = &p + h.gauge.as_ref().ok_or("no gauge")?;
    }
    Ok((h, p))
}

fn check_newton(id: &str, gauge: bool, genus: u64, area: i64) -> Outcome {
    let (h, p) = with_gauge(id, gauge)?;
    let n = polygon_of_hamiltonian(&p, &h.system.rules).map_err(err)?;
    let (g, a) = n.genus_and_area();
    Ok((g == genus && a == q_int(area), format!("genus {g}, area {a}")))
}

fn check_newton_bu92_bare() -> Outcome {
    let (h, p) = with_gauge("H_Bu92", false)?;
    let n = polygon_of_hamiltonian(&p, &h.system.rules).map_err(err)?;
    Ok((n.interior == 0, format!("genus {}, area {}", n.interior, n.area)))
}

fn check_newton_h2() -> Outcome {
    let (h, p) = with_gauge("H2_Bu13", false)?;
    let n = polygon_of_hamiltonian(&p, &h.system.rules).map_err(err)?;
    let (g, a) = n.genus_and_area();
    let ok = g == 1 && a == q_int(2) && n.shape() == Shape::Parallelogram;
    Ok((ok, format!("genus {g}, area {a}, {:?}", n.shape())))
}

fn check_chiba(id: &str, genus: u64, area: i64) -> Outcome {
    let e = catalog::load(id).map_err(err)?;
    let n = chiba_polytope(&e.system);
    let (g, a) = n.genus_and_area();
    Ok((g == genus && a == q_int(area), format!("genus {g}, area {a}")))
}

pub fn proportional(a: &Poly, b: &Poly) -> bool {
    if a.is_zero() || b.is_zero() {
        return a.is_zero() && b.is_zero();
    }
    a.scale(&b.lc()) == b.scale(&a.lc())
}

fn check_conditions_v() -> Outcome {
    let e = catalog::load("V").map_err(err)?;
    let cs = extract_conditions(&e.system, &["f".into()], &Options::default()).map_err(err)?;
    let f2 = Poly::jet("f", 2);
    let ok = cs.len() == 1 && proportional(&cs[0], &f2);
    Ok((ok, show(&cs, &e.system.names)))
}

fn show(cs: &[Poly], names: &VarNames) -> String {
    cs.iter().map(|c| format!("{} = 0", fmt_poly(c, names))).collect::<Vec<_>>().join(", ")
}

fn check_conditions_xiii() -> Outcome {
    let e = catalog::load("XIII").map_err(err)?;
    let cs = extract_conditions(&e.system, &["f".into(), "p".into()], &Options::default()).map_err(err)?;
    if cs.len() != 2 {
        return Ok((false, format!("{} conditions: {}", cs.len(), show(&cs, &e.system.names))));
    }
    let sc = e.system.free(&["f".into(), "p".into()]).scope();
    let f2 = parse_poly("f''", &sc).map_err(err)?;
    let t = parse_poly("p*f' + f*p' + 6*p^2*p' - p'''", &sc).map_err(err)?;
    let s = &cs[0] + &cs[1];
    let d = &cs[0] - &cs[1];
    let ok = (proportional(&s, &f2) && proportional(&d, &t)) || (proportional(&s, &t) && proportional(&d, &f2));
    Ok((ok, show(&cs, &e.system.names)))
}

fn check_conditions_ixb5() -> Outcome {
    let e = catalog::load("IX.B(5)").map_err(err)?;
    let free = e.system.free(&["q".into()]);
    let off = regularize(&free, &Options::default()).map_err(err)?;
    let cs = off.conditions();
    let sc = free.scope();
    let target = parse_poly("q'''' - 12*q'^2 - 12*q*q''", &sc).map_err(err)?;
    let rule_on =
        catalog::parse_system(&e.source.replace("rule q'' = 6*q^2 + x", "rule q'''' = 12*q'^2 + 12*q*q''")).map_err(err)?;
    let on = regularize(&rule_on, &Options::default()).map_err(err)?;
    let ok = !off.is_regular() && !cs.is_empty() && cs.iter().all(|c| proportional(c, &target)) && on.is_regular();
    Ok((ok, format!("free q: {}; with (q'' - 6q^2)'' = 0: regular {}", show(&cs, &free.names), on.is_regular())))
}

fn pass_map(id: &str) -> Result<RationalMap, String> {
    let pm = PASS_MAPS.iter().find(|p| p.id == id).ok_or("unknown pass map")?;
    let s = PlanarSystem::parse(pm.system).map_err(err)?;
    let comps = pm.comps().map_err(err)?;
    Ok(RationalMap::new(VarNames::new(pm.vars.0, pm.vars.1), s.names.clone(), comps, s.rules))
}

fn node_with_map<'a>(t: &'a IterationTree, pass: usize, comps: &(Frac, Frac)) -> Option<&'a IterNode> {
    t.at_pass(pass).find(|n| &n.back_map.comps == comps)
}

fn same_equations(a: &PlanarSystem, b: &PlanarSystem) -> bool {
    a.rules.equal(&a.f, &b.f) && a.rules.equal(&a.g, &b.g)
}

fn check_iterate_ixb5() -> Outcome {
    let e = catalog::load("IX.B(5)").map_err(err)?;
    let t = iterate_regularize(&e.cascade_system, 2, &Options::default()).map_err(err)?;
    let mut notes = Vec::new();
    let m1 = pass_map("IX.B(5) pass 1")?;
    let leaf = node_with_map(&t, 1, &m1.comps);
    let printed_leaf = catalog::parse_system(catalog::SYSTEM_IXB5_LEAF).map_err(err)?;
    let leaf_ok = leaf.is_some_and(|n| same_equations(&n.system, &printed_leaf));
    match leaf {
        None => notes.push("no pass-1 leaf with the printed back-map".to_string()),
        Some(n) if !leaf_ok => notes.push(format!("pass-1 leaf is {}", n.system.display().replace('\n', ", "))),
        _ => {}
    }
    let printed2 = catalog::parse_system(catalog::SYSTEM_IXB5_PASS2).map_err(err)?;
    let second = t.at_pass(2).find(|n| same_equations(&n.system, &printed2));
    let mut pass2_ok = false;
    match (second, leaf) {
        (Some(n), Some(l)) => {
            let m2 = pass_map("IX.B(5) pass 2")?;
            let composed = RationalMap::new(m2.source.clone(), l.system.names.clone(), m2.comps.clone(), m2.rules.clone())
                .then(&l.back_map)
                .map_err(err)?;
            let map_ok = composed.comps == n.back_map.comps;
            let m = n.matched.clone().or_else(|| match_catalog(&n.system));
            let match_ok = m.as_ref().is_some_and(|m| m.id == "IX.B(2)" && m.lambda == q_frac(-1, 2) && m.mu == q_frac(-1, 2));
            if !map_ok {
                notes.push("pass-2 map differs from the printed one".into());
            }
            if !match_ok {
                notes.push(format!("catalog match {m:?}"));
            }
            pass2_ok = map_ok && match_ok;
        }
        (None, _) => notes.push("no pass-2 node with the printed equations".into()),
        _ => {}
    }
    let ok = leaf_ok && pass2_ok;
    Ok((ok, if notes.is_empty() { "leaf, second pass and match agree".into() } else { notes.join("; ") }))
}

fn check_iterate_xiii() -> Outcome {
    let e = catalog::load("XIII").map_err(err)?;
    let t = iterate_regularize(&e.cascade_system, 2, &Options::default()).map_err(err)?;
    let mut notes = Vec::new();
    let m1 = pass_map("XIII pass 1")?;
    let leaf = node_with_map(&t, 1, &m1.comps);
    if leaf.is_none() {
        notes.push("no pass-1 leaf with the printed back-map".to_string());
    }
    let printed_wt = catalog::parse_system(catalog::SYSTEM_XIII_WT).map_err(err)?;
    let mut second_ok = false;
    if let Some(l) = leaf {
        let m2 = pass_map("XIII pass 2")?;
        let composed = RationalMap::new(m2.source.clone(), l.system.names.clone(), m2.comps.clone(), m2.rules.clone())
            .then(&l.back_map)
            .map_err(err)?;
        match node_with_map(&t, 2, &composed.comps) {
            None => notes.push("no pass-2 node with the printed map".into()),
            Some(n) => {
                let sys_ok = same_equations(&n.system, &printed_wt);
                if !sys_ok {
                    notes.push(format!("pass-2 system is {}", n.system.display().replace('\n', ", ")));
                }
                let h1 = catalog::hamiltonian_fixture("H1_Bu13").ok_or("missing H1")?;
                let h_ok = match reconstruct(&n.system) {
                    Ok(h) => {
                        let ok = equal_up_to_gauge(&n.system, &h, &h1.h);
                        if !ok {
                            notes.push(format!("its Hamiltonian is {}", fmt_poly(&h, &n.system.names)));
                        }
                        ok
                    }
                    Err(e) => {
                        notes.push(e.describe(&n.system.names));
                        false
                    }
                };
                second_ok = sys_ok && h_ok;
            }
        }
    }
    let ok = leaf.is_some() && second_ok;
    Ok((ok, if notes.is_empty() { "back-maps, second pass and Hamiltonian agree".into() } else { notes.join("; ") }))
}
