//! One PASS/FAIL line per acceptance criterion. A FAIL is reported, never
//! raised: several criteria fail on printed data that the engine disagrees
//! with, and those disagreements are asserted in `printed.rs`.

mod common;

use bureau::birational::{compose_check, transport_check, RationalMap};
use bureau::blowup::{extract_conditions, regularize, BlowupTree, Options};
use bureau::catalog::{self, PASS_MAPS};
use bureau::expr::{parse_frac, parse_poly, VarNames};
use bureau::fixtures::proportional;
use bureau::hamiltonian::{equal_up_to_gauge, hamiltonian_wrt_factor, is_standard, reconstruct};
use bureau::iterate::{iterate_regularize, match_catalog, IterationTree};
use bureau::newton::{chiba_polytope, polygon_of_hamiltonian, Shape};
use bureau::picard::{classify, component_configuration, DivisorClass, SurfaceLabel};
use bureau::poly::{q_frac, q_int, Poly};
use bureau::system::PlanarSystem;
use proptest::strategy::Strategy;
use proptest::test_runner::{Config, TestRunner};
use std::collections::BTreeSet;
use std::fmt::Debug;
use std::panic::{catch_unwind, AssertUnwindSafe};

type Verdict = Result<Vec<String>, String>;

fn err<E: std::fmt::Display>(e: E) -> String {
    e.to_string()
}

fn tree(id: &str) -> Result<(catalog::CatalogEntry, BlowupTree), String> {
    let e = catalog::load(id).map_err(err)?;
    let t = regularize(&e.cascade_system, &Options::default()).map_err(err)?;
    Ok((e, t))
}

fn cascade_v() -> Verdict {
    let (e, t) = tree("V")?;
    let sc = e.cascade_system.scope();
    let printed = [
        ("u0", "0", "0"),
        ("U1", "0", "0"),
        ("U2", "0", "0"),
        ("U3", "4", "0"),
        ("U4", "0", "0"),
        ("U5", "0", "0"),
        ("U6", "0", "0"),
        ("U7", "32*x", "0"),
        ("U8", "-64", "0"),
    ];
    let ours = t.cascade_centers();
    let mut bad = Vec::new();
    if ours.len() != 1 || ours[0].len() != 9 {
        bad.push(format!("cascade lengths {:?}", ours.iter().map(|c| c.len()).collect::<Vec<_>>()));
    }
    for ((label, a, b), (pl, pa, pb)) in ours.iter().flatten().zip(printed) {
        let pa = parse_poly(pa, &sc).map_err(err)?;
        let pb = parse_poly(pb, &sc).map_err(err)?;
        if label != pl || a != &pa || b != &pb {
            bad.push(format!("{label} differs from {pl}"));
        }
    }
    if !t.is_regular() {
        bad.push("not regular".into());
    }
    Ok(bad)
}

fn cascade_counts() -> Verdict {
    let mut bad = Vec::new();
    for (id, n) in [("V", 9), ("IX.B(2)", 10), ("IX.B(3)", 9), ("XIII", 10), ("XIV", 11), ("IX.B(5)", 10)] {
        let (_, t) = tree(id)?;
        let d = component_configuration(&t).map_err(err)?;
        if !t.is_regular() || t.blowups.len() != n || d.n != n {
            bad.push(format!("{id}: regular {}, {} blow-ups", t.is_regular(), t.blowups.len()));
        }
    }
    Ok(bad)
}

fn surface_types() -> Verdict {
    let mut bad = Vec::new();
    let expected = [
        ("V", SurfaceLabel::E8),
        ("IX.B(2)", SurfaceLabel::E8),
        ("IX.B(5)", SurfaceLabel::E8),
        ("XIV", SurfaceLabel::E8),
        ("IX.B(3)", SurfaceLabel::E7),
        ("XIII", SurfaceLabel::E7),
    ];
    for (id, want) in expected {
        let (_, t) = tree(id)?;
        let got = classify(&component_configuration(&t).map_err(err)?).label;
        if got != want {
            bad.push(format!("{id}: {got}"));
        }
    }
    Ok(bad)
}

fn delta_lists() -> Verdict {
    let mut bad = Vec::new();
    for id in catalog::IDS {
        let (e, t) = tree(id)?;
        let d = component_configuration(&t).map_err(err)?;
        let printed: BTreeSet<DivisorClass> =
            e.delta.iter().map(|s| DivisorClass::parse(s, e.basis, d.n)).collect::<Result<_, _>>().map_err(err)?;
        if printed != d.minus_two_classes() {
            bad.push(format!("{id}: printed and computed -2 classes differ"));
        }
    }
    Ok(bad)
}

fn conditions() -> Verdict {
    let mut bad = Vec::new();
    let opts = Options::default();
    let xiii = catalog::load("XIII").map_err(err)?;
    let free = ["f".to_string(), "p".to_string()];
    let cs = extract_conditions(&xiii.system, &free, &opts).map_err(err)?;
    let sc = xiii.system.free(&free).scope();
    let f2 = parse_poly("f''", &sc).map_err(err)?;
    let t = parse_poly("p*f' + f*p' + 6*p^2*p' - p'''", &sc).map_err(err)?;
    let ok = cs.len() == 2 && {
        let (s, d) = (&cs[0] + &cs[1], &cs[0] - &cs[1]);
        (proportional(&s, &f2) && proportional(&d, &t)) || (proportional(&s, &t) && proportional(&d, &f2))
    };
    if !ok {
        bad.push(format!("XIII gives {} conditions", cs.len()));
    }
    let v = catalog::load("V").map_err(err)?;
    let cs = extract_conditions(&v.system, &["f".into()], &opts).map_err(err)?;
    if !(cs.len() == 1 && proportional(&cs[0], &Poly::jet("f", 2))) {
        bad.push("V: not f'' = 0".into());
    }
    let ix = catalog::load("IX.B(5)").map_err(err)?;
    let off = regularize(&ix.system.free(&["q".into()]), &opts).map_err(err)?;
    let on_src = ix.source.replace("rule q'' = 6*q^2 + x", "rule q'''' = 12*q'^2 + 12*q*q''");
    let on = regularize(&PlanarSystem::parse(&on_src).map_err(err)?, &opts).map_err(err)?;
    if off.is_regular() || !on.is_regular() {
        bad.push(format!("IX.B(5): rule off regular {}, rule on regular {}", off.is_regular(), on.is_regular()));
    }
    Ok(bad)
}

fn maps() -> Verdict {
    let mut bad = Vec::new();
    let ms = catalog::map_fixtures();
    if ms.len() != 7 {
        bad.push(format!("{} map pairs", ms.len()));
    }
    for m in ms {
        let f = transport_check(&m.forward, &m.source, &m.target).map_err(err)?.ok;
        let i = transport_check(&m.inverse, &m.target, &m.source).map_err(err)?.ok;
        let c = compose_check(&m.forward, &m.inverse).map_err(err)? && compose_check(&m.inverse, &m.forward).map_err(err)?;
        if !(f && i && c) {
            bad.push(format!("{}: forward {f}, inverse {i}, compositions {c}", m.id));
        }
    }
    Ok(bad)
}

fn jacobians() -> Verdict {
    let mut bad = Vec::new();
    for (id, printed) in [("IX.B(2) -> V", "z92/36"), ("XIII -> IX.B(3) (alpha -> -alpha)", "-y13/2")] {
        let m = catalog::map_fixture(id).ok_or("missing map")?;
        let want = parse_frac(printed, &m.source.scope()).map_err(err)?;
        if m.forward.jacobian_factor() != want {
            bad.push(format!("{id}: not {printed}"));
        }
    }
    Ok(bad)
}

fn hamiltonians() -> Verdict {
    let mut bad = Vec::new();
    for id in ["H5", "H_Ok", "H_95m", "H1_Bu13", "H2_Bu13", "H_Bu92", "H_Bu13"] {
        let h = catalog::hamiltonian_fixture(id).ok_or("missing Hamiltonian")?;
        let got = match &h.factor {
            None => reconstruct(&h.system),
            Some(c) => hamiltonian_wrt_factor(&h.system, c),
        };
        if !got.is_ok_and(|g| equal_up_to_gauge(&h.system, &g, &h.h)) {
            bad.push(id.to_string());
        }
    }
    for id in ["IX.B(2)", "IX.B(5)", "XIII", "XIV"] {
        if is_standard(&catalog::load(id).map_err(err)?.system) {
            bad.push(format!("{id} is standard"));
        }
    }
    Ok(bad)
}

fn newton() -> Verdict {
    let mut bad = Vec::new();
    let polygon = |id: &str, gauge: bool| -> Result<(u64, bureau::poly::Q, Shape), String> {
        let h = catalog::hamiltonian_fixture(id).ok_or("missing Hamiltonian")?;
        let p = match (&h.gauge, gauge) {
            (Some(g), true) => &h.h + g,
            _ => h.h.clone(),
        };
        let n = polygon_of_hamiltonian(&p, &h.system.rules).map_err(err)?;
        Ok((n.interior, n.area.clone(), n.shape()))
    };
    for (id, gauge, g, a) in [("H5", false, 1, 2), ("H_Ok", false, 1, 2), ("H_Bu92", true, 1, 3), ("H_Bu13", true, 1, 3)] {
        let (gg, aa, _) = polygon(id, gauge)?;
        if (gg, aa.clone()) != (g, q_int(a)) {
            bad.push(format!("{id}: ({gg}, {aa})"));
        }
    }
    if polygon("H_Bu92", false)?.0 != 0 {
        bad.push("H_Bu92 without gauge".into());
    }
    if polygon("H2_Bu13", false)? != (1, q_int(2), Shape::Parallelogram) {
        bad.push("H2_Bu13".into());
    }
    for (id, g, a) in [("IX.B(2)", 0, 1), ("XIV", 0, 1), ("V", 1, 2), ("IX.B(3)", 1, 2)] {
        let n = chiba_polytope(&catalog::load(id).map_err(err)?.system);
        if (n.interior, n.area.clone()) != (g, q_int(a)) {
            bad.push(format!("Chiba {id}: ({}, {})", n.interior, n.area));
        }
    }
    Ok(bad)
}

fn pass_map(id: &str) -> Result<RationalMap, String> {
    let pm = PASS_MAPS.iter().find(|p| p.id == id).ok_or("missing pass map")?;
    let s = PlanarSystem::parse(pm.system).map_err(err)?;
    Ok(RationalMap::new(VarNames::new(pm.vars.0, pm.vars.1), s.names.clone(), pm.comps().map_err(err)?, s.rules))
}

fn same(a: &PlanarSystem, b: &PlanarSystem) -> bool {
    a.rules.equal(&a.f, &b.f) && a.rules.equal(&a.g, &b.g)
}

fn iterate() -> Verdict {
    let mut bad = Vec::new();
    let opts = Options::default();
    let find = |t: &IterationTree, pass: usize, m: &RationalMap| t.at_pass(pass).find(|n| n.back_map.comps == m.comps).cloned();

    let ix = catalog::load("IX.B(5)").map_err(err)?;
    let t = iterate_regularize(&ix.cascade_system, 2, &opts).map_err(err)?;
    let leaf_sys = PlanarSystem::parse(catalog::SYSTEM_IXB5_LEAF).map_err(err)?;
    match find(&t, 1, &pass_map("IX.B(5) pass 1")?) {
        None => bad.push("IX.B(5): no leaf with the printed back-map".into()),
        Some(n) if !same(&n.system, &leaf_sys) => bad.push("IX.B(5): pass-1 leaf differs from the printed system".into()),
        _ => {}
    }
    let pass2 = PlanarSystem::parse(catalog::SYSTEM_IXB5_PASS2).map_err(err)?;
    match t.at_pass(2).find(|n| same(&n.system, &pass2)) {
        None => bad.push("IX.B(5): no pass-2 system w' = 2w^2 + t - 6q, t' = -2wt".into()),
        Some(n) => {
            let m = match_catalog(&n.system);
            if !m.is_some_and(|m| m.id == "IX.B(2)" && m.lambda == q_frac(-1, 2) && m.mu == q_frac(-1, 2)) {
                bad.push("IX.B(5): pass-2 system does not match IX.B(2) with (-1/2, -1/2)".into());
            }
        }
    }

    let xiii = catalog::load("XIII").map_err(err)?;
    let t = iterate_regularize(&xiii.cascade_system, 2, &opts).map_err(err)?;
    if find(&t, 1, &pass_map("XIII pass 1")?).is_none() {
        bad.push("XIII: no leaf with the printed back-map".into());
    }
    let wt = PlanarSystem::parse(catalog::SYSTEM_XIII_WT).map_err(err)?;
    let h1 = catalog::hamiltonian_fixture("H1_Bu13").ok_or("missing H1")?;
    match t.at_pass(2).find(|n| same(&n.system, &wt)) {
        None => bad.push("XIII: no pass-2 node with the printed (w,t) system".into()),
        Some(n) => {
            if !reconstruct(&n.system).is_ok_and(|h| equal_up_to_gauge(&n.system, &h, &h1.h)) {
                bad.push("XIII: Hamiltonian differs from H1_Bu13".into());
            }
        }
    }
    Ok(bad)
}

fn suite<S: Strategy>(name: &str, s: S, f: impl Fn(S::Value) -> common::Check) -> Option<String>
where
    S::Value: Debug,
{
    let mut runner = TestRunner::new(Config { cases: 200, failure_persistence: None, ..Config::default() });
    runner.run(&s, f).err().map(|e| format!("{name}: {e}"))
}

fn properties() -> Verdict {
    use common::*;
    let mut bad = Vec::new();
    let charts = all_charts();
    let n = charts.len();
    bad.extend(suite("Leibniz", ruled_pair(), leibniz));
    bad.extend(suite("confluence", ruled_pair(), confluence));
    bad.extend(suite("blow-down", 0..n, |i| blow_down(charts[i])));
    bad.extend(charts.iter().find_map(|&c| blow_down(c).err().map(|e| format!("blow-down: {e}"))));
    bad.extend(suite("Pick", points(), pick));
    bad.extend(suite("interior count", points(), brute_interior));
    bad.extend(suite("chain rule", maps(), chain_rule));
    Ok(bad)
}

type Criterion = (&'static str, fn() -> Verdict);

fn main() {
    let criteria: [Criterion; 11] = [
        ("cascade reproduction for V", cascade_v),
        ("cascade counts", cascade_counts),
        ("surface types", surface_types),
        ("delta lists", delta_lists),
        ("condition extraction", conditions),
        ("map verification", maps),
        ("Jacobian factors", jacobians),
        ("Hamiltonians", hamiltonians),
        ("Newton data", newton),
        ("iterative regularisation", iterate),
        ("property suites", properties),
    ];
    let mut passed = 0;
    for (k, (name, f)) in criteria.iter().enumerate() {
        let verdict = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|_| Err("panicked".into()));
        let (ok, why) = match verdict {
            Ok(bad) if bad.is_empty() => (true, String::new()),
            Ok(bad) => (false, bad.join("; ")),
            Err(e) => (false, format!("error: {e}")),
        };
        passed += ok as usize;
        let mark = if ok { "PASS" } else { "FAIL" };
        if ok {
            println!("{mark} {:>2} {name}", k + 1);
        } else {
            println!("{mark} {:>2} {name}: {why}", k + 1);
        }
    }
    println!("{passed}/{} criteria pass", criteria.len());
}
