use bureau::blowup::{regularize, Options};
use bureau::catalog::{self, CatalogError, IDS};
use bureau::coeff::Rules;
use bureau::expr::parse_poly;
use bureau::fixtures;
use bureau::par::Exec;
use bureau::poly::{q_int, Poly};
use bureau::system::PlanarSystem;
use std::collections::BTreeMap;

/// Fixtures where the printed data and the computation disagree, with a
/// fragment of the expected report. Each one has been checked by hand.
const KNOWN: [(&str, &str); 14] = [
    ("cascade/IX.B(3)", "printed u5 (0, alpha + f' + 1/2), computed u5 (0, alpha - f' + 1/2)"),
    ("cascade/IX.B(5)", "printed u9, not computed"),
    ("cascade/XIII", "printed u4 (0, 4*p*p' + f' + 2*p''), computed u4 (0, 8*p*p' + 2*f' + 4*p'')"),
    ("cascade/XIV", "cascade 2 step 5"),
    ("delta/XIV", "printed only: G9 - G10, G3 - G4, J - G1 - G2 - G6"),
    ("hamiltonian/H1_Bu13", "computed"),
    ("hamiltonian/H_95m", "divergence 8*y"),
    ("hamiltonian/H_Bu13", "computed"),
    ("iterate/IX.B(5)", "v' = u^2*v^2 - 6*u*v*q"),
    ("iterate/XIII", "pass-2 system is"),
    ("jacobian/XIII -> IX.B(3) (alpha -> -alpha)", "computed -1/4*y13"),
    ("lattice/V+E10 -> IX.B(5)", "do not preserve"),
    ("map/XIII -> IX.B(3) (alpha -> -alpha)", "forward true, inverse false"),
    ("map/XIII(w,t) -> XIII", "forward residuals 0 | (-4*f*p)/(w)"),
];

#[test]
fn fixture_suite_matches_expectations() {
    let known: BTreeMap<&str, &str> = KNOWN.into_iter().collect();
    let results = fixtures::run(Exec::default());
    assert_eq!(results.len(), 57);
    for r in &results {
        match known.get(r.id.as_str()) {
            Some(frag) => {
                assert!(!r.passed, "{} now passes: {}", r.id, r.detail);
                assert!(r.detail.contains(frag), "{}: {}", r.id, r.detail);
            }
            None => assert!(r.passed, "{}: {}", r.id, r.detail),
        }
    }
    for id in known.keys() {
        assert!(results.iter().any(|r| r.id == *id), "missing fixture {id}");
    }
}

#[test]
fn suite_is_sorted_and_deterministic() {
    let a = fixtures::run(Exec::Parallel);
    let b = fixtures::run(Exec::Sequential);
    let ids: Vec<&str> = a.iter().map(|r| r.id.as_str()).collect();
    let mut sorted = ids.clone();
    sorted.sort();
    assert_eq!(ids, sorted);
    assert_eq!(serde_json::to_string(&a).unwrap(), serde_json::to_string(&b).unwrap());
}

#[test]
fn load_v() {
    let e = catalog::load("V").unwrap();
    let s = &e.system;
    let sc = s.scope();
    assert_eq!(s.f, parse_poly("z", &sc).unwrap());
    assert_eq!(s.g, parse_poly("6*y^2 + f", &sc).unwrap());
    let r = s.rules.get("f").unwrap();
    assert_eq!((r.order, r.rhs.clone()), (2, Poly::zero()));
}

#[test]
fn load_xiii_carries_the_third_order_rule() {
    let s = catalog::load("XIII").unwrap().system;
    let r = s.rules.get("p").unwrap();
    assert_eq!(r.order, 3);
    // (p'' - 2 p^3 - f p)' vanishes
    let e = parse_poly("p'' - 2*p^3 - f*p", &s.scope()).unwrap();
    assert!(s.rules.reduce(&s.rules.diff(&e)).is_zero());
}

#[test]
fn unknown_id_is_an_error() {
    assert!(matches!(catalog::load("VI"), Err(CatalogError::Unknown(_))));
}

#[test]
fn xiv_coefficients_solve_ixb2() {
    let s = catalog::load("XIV").unwrap().system;
    let sc = s.scope();
    let lhs = [parse_poly("p'", &sc).unwrap(), parse_poly("r'", &sc).unwrap()];
    // IX.B(2) with (y, z) = (p, r)
    let rhs = [parse_poly("-p^2 + r + 12*q", &sc).unwrap(), parse_poly("p*r", &sc).unwrap()];
    for (a, b) in lhs.iter().zip(&rhs) {
        assert!(s.rules.equal(a, b));
    }
    // and q solves the first Painleve equation
    let q = parse_poly("q", &sc).unwrap();
    let p1 = &(&s.rules.diff_n(&q, 2) - &(&q * &q).scale(&q_int(6))) - &Poly::x();
    assert!(s.rules.reduce(&p1).is_zero());
}

#[test]
fn catalog_systems_round_trip_through_text() {
    for e in catalog::all() {
        for s in [&e.system, &e.cascade_system] {
            let back = PlanarSystem::parse(&s.to_text()).unwrap();
            assert_eq!(&back, s, "{}", e.id);
            assert_eq!(back.to_text(), s.to_text());
        }
    }
}

#[test]
fn cascade_counts() {
    let expected = [("V", 9), ("IX.B(2)", 10), ("IX.B(5)", 10), ("XIV", 11), ("IX.B(3)", 9), ("XIII", 10)];
    for (id, n) in expected {
        let e = catalog::load(id).unwrap();
        let t = regularize(&e.cascade_system, &Options::default()).unwrap();
        assert!(t.is_regular(), "{id}");
        assert_eq!(t.blowups.len(), n, "{id}");
        assert_eq!(e.classes, n, "{id}");
    }
}

#[test]
fn removing_the_rule_breaks_regularity() {
    let free = [("V", "f"), ("IX.B(2)", "q"), ("IX.B(5)", "q"), ("XIV", "p"), ("IX.B(3)", "f"), ("XIII", "p")];
    for (id, sym) in free {
        let e = catalog::load(id).unwrap();
        let t = regularize(&e.system.free(&[sym.to_string()]), &Options::default()).unwrap();
        assert!(!t.is_regular(), "{id} stays regular without its rule for {sym}");
    }
}

#[test]
fn regularisation_is_deterministic() {
    for id in IDS {
        let e = catalog::load(id).unwrap();
        let seq = Options { exec: Exec::Sequential, ..Options::default() };
        let a = regularize(&e.system, &Options::default()).unwrap().describe();
        let b = regularize(&e.system, &seq).unwrap().describe();
        assert_eq!(a, b, "{id}");
    }
}

#[test]
fn rules_reject_cycles() {
    let r = Rules::new(vec![]).unwrap();
    assert!(r.symbols().is_empty());
    let bad = PlanarSystem::parse("vars y z\nrule q'' = q''' + x\ny' = z\nz' = q");
    assert!(bad.is_err());
}
