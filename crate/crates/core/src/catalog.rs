//! The six systems with their printed data: cascades, -2 curve tables,
//! lattice correspondences, changes of variables and Hamiltonians.
//!
//! Everything here is stored as it is printed; where the printed data and the
//! computation disagree the tests say so explicitly.

use crate::birational::RationalMap;
use crate::blowup::Center;
use crate::expr::{parse_frac, parse_poly, ParseError, VarNames};
use crate::field::Frac;
use crate::picard::SurfaceLabel;
use crate::poly::Poly;
use crate::system::{PlanarSystem, SystemError};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CatalogError {
    #[error("unknown catalog system `{0}`")]
    Unknown(String),
    #[error(transparent)]
    System(#[from] SystemError),
    #[error(transparent)]
    Parse(#[from] ParseError),
}

pub const IDS: [&str; 6] = ["V", "IX.B(2)", "IX.B(5)", "XIV", "IX.B(3)", "XIII"];

pub const SYSTEM_V: &str = "\
system V
vars y z
rule f'' = 0
charts oriented
y' = z
z' = 6*y^2 + f
";

pub const SYSTEM_V_X: &str = "\
system V
vars y z
charts oriented
y' = z
z' = 6*y^2 + x
";

pub const SYSTEM_IXB2: &str = "\
system IX.B(2)
vars y z
rule q'' = 6*q^2 + x
y' = -y^2 + z + 12*q
z' = y*z
";

pub const SYSTEM_IXB5: &str = "\
system IX.B(5)
vars y z
rule q'' = 6*q^2 + x
y' = -y^2 + z + 3*q
z' = 4*y*z - 9*q'
";

// p''' is what q'' = 6 q^2 + x becomes once q is written out
pub const SYSTEM_XIV: &str = "\
system XIV
vars y z
rule r' = p*r
rule p''' = (p' + p^2 - r)^2/2 + 12*x - 2*p'^2 - 2*p*p'' + p'*r + p^2*r
abbrev q = (p' + p^2 - r)/12
y' = y*(2*z - y) + 3*p*y + r
z' = z*(y - z) - 2*p*z
";

pub const SYSTEM_IXB3: &str = "\
system IX.B(3)
vars y z
param alpha
rule f'' = 0
y' = -y^2 + z - f/2
z' = 2*y*z + alpha + 1/2
";

pub const SYSTEM_IXB3_X: &str = "\
system IX.B(3)
vars y z
param alpha
y' = -y^2 + z - x/2
z' = 2*y*z + alpha + 1/2
";

pub const SYSTEM_XIII: &str = "\
system XIII
vars y z
rule f'' = 0
rule p''' = 6*p^2*p' + f'*p + f*p'
y' = y*(2*z - y)/2 + 2*p*y
z' = z*(3*y - 2*z)/2 - 4*p*z + 2*p^2 - 2*p' + f
";

pub const SYSTEM_XIII_X: &str = "\
system XIII
vars y z
param alpha
rule p'' = 2*p^3 + x*p + alpha
y' = y*(2*z - y)/2 + 2*p*y
z' = z*(3*y - 2*z)/2 - 4*p*z + 2*p^2 - 2*p' + x
";

/// XIII with alpha replaced by -alpha in the rule for p.
pub const SYSTEM_XIII_X_NEG: &str = "\
system XIII
vars y z
param alpha
rule p'' = 2*p^3 + x*p - alpha
y' = y*(2*z - y)/2 + 2*p*y
z' = z*(3*y - 2*z)/2 - 4*p*z + 2*p^2 - 2*p' + x
";

/// Final chart of the second regularisation of XIII, as printed.
pub const SYSTEM_XIII_WT: &str = "\
system XIII(w,t)
vars w t
rule f'' = 0
rule p''' = 6*p^2*p' + f'*p + f*p'
w' = (4*p*w + 2*t - w^2 + 4*p' - 4*p^2 - 2*f)/2
t' = w*t - 2*p*t + f' - 2*p'' - 2*f*p + 4*p^3
";

pub const SYSTEM_XIII_QUAD: &str = "\
system XIII(quadratic)
vars w t
param alpha
rule f'' = 0
w' = alpha*x + w^2 - t/2
t' = -2*w*(t + f - 2*alpha*x)
";

pub const SYSTEM_IXB5_MOD: &str = "\
system IX.B(5)m
vars y z
rule q'' = 6*q^2 + x
y' = 2*y^2 + z + 3*q
z' = 4*y*z - 9*q'
";

/// First-pass leaf of IX.B(5), as printed.
pub const SYSTEM_IXB5_LEAF: &str = "\
system IX.B(5) leaf
vars u v
rule q'' = 6*q^2 + x
u' = -2 + 6*q*u^2 - u^3*v
v' = -6*q - u*v + u^2*v^2
";

pub const SYSTEM_IXB5_PASS2: &str = "\
system IX.B(5) second pass
vars w t
rule q'' = 6*q^2 + x
w' = 2*w^2 + t - 6*q
t' = -2*w*t
";

/// Printed maps between regularisation passes; each gives the previous
/// pass's variables (or the original ones for pass 1).
pub struct PassMap {
    pub id: &'static str,
    pub system: &'static str,
    pub vars: (&'static str, &'static str),
    pub first: &'static str,
    pub second: &'static str,
}

pub const PASS_MAPS: [PassMap; 4] = [
    PassMap { id: "IX.B(5) pass 1", system: SYSTEM_IXB5, vars: ("u", "v"), first: "1/u", second: "(3 + u^2*(u*v - 9*q))/u^2" },
    PassMap { id: "IX.B(5) pass 2", system: SYSTEM_IXB5, vars: ("w", "t"), first: "1/w", second: "w*t" },
    PassMap {
        id: "XIII pass 1",
        system: SYSTEM_XIII,
        vars: ("u", "v"),
        first: "1/u",
        second: "u*(2*p' - 2*p^2 - f + u*(u*v - 4*f*p - 8*p^3 - 2*f' + 4*p''))",
    },
    PassMap {
        id: "XIII pass 2",
        system: SYSTEM_XIII,
        vars: ("w", "t"),
        first: "1/w",
        second: "w*(4*f*p + 8*p^3 + w*t + 2*f' - 4*p'')",
    },
];

impl PassMap {
    /// Components as fractions in the pass variables.
    pub fn comps(&self) -> Result<(Frac, Frac), CatalogError> {
        let s = PlanarSystem::parse(self.system)?;
        let mut sc = s.scope();
        sc.names = VarNames::new(self.vars.0, self.vars.1);
        Ok((parse_frac(self.first, &sc)?.reduce(&s.rules), parse_frac(self.second, &sc)?.reduce(&s.rules)))
    }
}

#[derive(Clone, Debug)]
pub struct PrintedPoint {
    pub label: &'static str,
    pub first: &'static str,
    pub second: &'static str,
}

const fn pt(label: &'static str, first: &'static str, second: &'static str) -> PrintedPoint {
    PrintedPoint { label, first, second }
}

#[derive(Clone, Debug)]
pub struct CatalogEntry {
    pub id: &'static str,
    pub source: &'static str,
    /// The system as printed, with its rules.
    pub system: PlanarSystem,
    /// The form the printed cascades refer to.
    pub cascade_system: PlanarSystem,
    /// Number of exceptional classes in the printed diagram.
    pub classes: usize,
    pub points: Vec<Vec<PrintedPoint>>,
    /// Names of the hyperplane and exceptional classes in the printed table.
    pub basis: (&'static str, &'static str),
    pub delta: Vec<&'static str>,
    pub surface: SurfaceLabel,
}

impl CatalogEntry {
    pub fn printed_lengths(&self) -> Vec<usize> {
        self.points.iter().map(|c| c.len()).collect()
    }

    /// Printed centers, parsed in the scope of the cascade system.
    pub fn printed_centers(&self) -> Result<Vec<Vec<Center>>, CatalogError> {
        let sc = self.cascade_system.scope();
        let mut out = Vec::new();
        for c in &self.points {
            let mut row = Vec::new();
            for p in c {
                let a = self.cascade_system.rules.reduce(&parse_poly(p.first, &sc)?);
                let b = self.cascade_system.rules.reduce(&parse_poly(p.second, &sc)?);
                row.push((p.label.to_string(), a, b));
            }
            out.push(row);
        }
        Ok(out)
    }
}

pub fn parse_system(src: &str) -> Result<PlanarSystem, CatalogError> {
    Ok(PlanarSystem::parse(src)?)
}

fn entry(id: &str) -> Option<CatalogEntry> {
    let sys = |s| PlanarSystem::parse(s).expect("catalog systems parse");
    let e = match id {
        "V" => CatalogEntry {
            id: "V",
            source: SYSTEM_V,
            system: sys(SYSTEM_V),
            cascade_system: sys(SYSTEM_V_X),
            classes: 9,
            points: vec![vec![
                pt("u0", "0", "0"),
                pt("U1", "0", "0"),
                pt("U2", "0", "0"),
                pt("U3", "4", "0"),
                pt("U4", "0", "0"),
                pt("U5", "0", "0"),
                pt("U6", "0", "0"),
                pt("U7", "32*x", "0"),
                pt("U8", "-64", "0"),
            ]],
            basis: ("H", "E"),
            delta: vec![
                "H - E1 - E2 - E3",
                "E1 - E2",
                "E2 - E3",
                "E3 - E4",
                "E4 - E5",
                "E5 - E6",
                "E6 - E7",
                "E7 - E8",
                "E8 - E9",
            ],
            surface: SurfaceLabel::E8,
        },
        "IX.B(2)" => CatalogEntry {
            id: "IX.B(2)",
            source: SYSTEM_IXB2,
            system: sys(SYSTEM_IXB2),
            cascade_system: sys(SYSTEM_IXB2),
            classes: 10,
            points: vec![
                vec![
                    pt("u0", "0", "0"),
                    pt("U1", "0", "0"),
                    pt("~u2", "0", "3/2"),
                    pt("u3", "0", "0"),
                    pt("u4", "0", "-18*q"),
                    pt("u5", "0", "12*q'"),
                    pt("u6", "0", "-12*q''"),
                    pt("u7", "0", "24*(q''' - 6*q*q')"),
                ],
                vec![pt("U0", "0", "0"), pt("U8", "0", "0")],
            ],
            basis: ("K", "F"),
            delta: vec![
                "F1 - F2",
                "F9 - F10",
                "K - F1 - F2 - F9",
                "F2 - F3",
                "F3 - F4",
                "F4 - F5",
                "F5 - F6",
                "F6 - F7",
                "F7 - F8",
            ],
            surface: SurfaceLabel::E8,
        },
        "IX.B(5)" => CatalogEntry {
            id: "IX.B(5)",
            source: SYSTEM_IXB5,
            system: sys(SYSTEM_IXB5),
            cascade_system: sys(SYSTEM_IXB5),
            classes: 10,
            points: vec![
                vec![pt("u0", "0", "0"), pt("U1", "0", "0"), pt("~u2", "0", "3"), pt("u3", "0", "0"), pt("u4", "0", "-9*q")],
                vec![
                    pt("U0", "0", "0"),
                    pt("U5", "0", "0"),
                    pt("U6", "3*q'", "0"),
                    pt("U7", "3/2*q''", "0"),
                    pt("U8", "3/2*q''' - 9*q*q'", "0"),
                    pt("u9", "0", "0"),
                ],
            ],
            basis: ("I", "L"),
            delta: vec![
                "L1 - L2",
                "L4 - L5",
                "L3 - L4",
                "L2 - L3",
                "I - L1 - L2 - L6",
                "L6 - L7",
                "L7 - L8",
                "L8 - L9",
                "L9 - L10",
            ],
            surface: SurfaceLabel::E8,
        },
        "XIV" => CatalogEntry {
            id: "XIV",
            source: SYSTEM_XIV,
            system: sys(SYSTEM_XIV),
            cascade_system: sys(SYSTEM_XIV),
            classes: 11,
            points: vec![
                vec![pt("u0", "0", "0"), pt("u1", "0", "0"), pt("u2", "0", "-r")],
                vec![
                    pt("u3", "0", "3/2"),
                    pt("u4", "0", "3*p"),
                    pt("u5", "0", "(r - 3*p')/2"),
                    pt("u6", "0", "p'' + 2*p*p' - 2/3*p*r - 1/3*r'"),
                    pt("u7", "0", "2/3*p^2*r - 2*p^2*p' + 2/3*p'*r - 2*(p'^2 + p*r' - 3*p*p'' + 1/3*r'' - p''')"),
                    pt(
                        "u8",
                        "0",
                        "2*p'''' + 6*p'''*p - 1/3*r*p'' + 4*p^2*p'' - 7/3*p'*r' + 4/3*p*r*p' + 2*p*p'^2 + 11*p'*p'' \
                         - 2*p*r'' - 4/3*p^2*r' - 2/3*p*r^2 - 2/3*r''' - 1/3*r*r'",
                    ),
                ],
                vec![pt("U0", "0", "0"), pt("U10", "0", "0")],
            ],
            basis: ("J", "G"),
            delta: vec![
                "G1 - G2",
                "G4 - G5",
                "G3 - G4",
                "J - G1 - G2 - G6",
                "G6 - G7",
                "G7 - G8",
                "G8 - G9",
                "G9 - G10",
                "G10 - G11",
            ],
            surface: SurfaceLabel::E8,
        },
        "IX.B(3)" => CatalogEntry {
            id: "IX.B(3)",
            source: SYSTEM_IXB3,
            system: sys(SYSTEM_IXB3),
            cascade_system: sys(SYSTEM_IXB3),
            classes: 9,
            points: vec![
                vec![
                    pt("u0", "0", "0"),
                    pt("U1", "0", "0"),
                    pt("~u2", "0", "2"),
                    pt("u3", "0", "0"),
                    pt("u4", "0", "f"),
                    pt("u5", "0", "alpha + 1/2 + f'"),
                ],
                vec![pt("U0", "0", "0"), pt("U6", "0", "0"), pt("U7", "-(alpha + 1/2)", "0")],
            ],
            basis: ("H", "E"),
            delta: vec!["E1 - E2", "E8 - E9", "E7 - E8", "H - E1 - E2 - E7", "E2 - E3", "E3 - E4", "E4 - E5", "E5 - E6"],
            surface: SurfaceLabel::E7,
        },
        "XIII" => CatalogEntry {
            id: "XIII",
            source: SYSTEM_XIII,
            system: sys(SYSTEM_XIII),
            cascade_system: sys(SYSTEM_XIII),
            classes: 10,
            points: vec![
                vec![pt("u0", "0", "0"), pt("u1", "0", "0")],
                vec![
                    pt("u0", "0", "1"),
                    pt("u2", "0", "4*p"),
                    pt("u3", "0", "-(f + 2*p' + 2*p^2)"),
                    pt("u4", "0", "f' + 4*p*p' + 2*p''"),
                ],
                vec![
                    pt("U0", "0", "0"),
                    pt("U5", "0", "0"),
                    pt("U6", "2*p' - f - 2*p^2", "0"),
                    pt("U7", "-2*(f' + 2*f*p - 2*p'' + 4*p^3)", "0"),
                ],
            ],
            basis: ("K", "F"),
            delta: vec!["F1 - F2", "F9 - F10", "F8 - F9", "F7 - F8", "K - F1 - F3 - F7", "F3 - F4", "F4 - F5", "F5 - F6"],
            surface: SurfaceLabel::E7,
        },
        _ => return None,
    };
    Some(e)
}

pub fn load(id: &str) -> Result<CatalogEntry, CatalogError> {
    entry(id).ok_or_else(|| CatalogError::Unknown(id.to_string()))
}

pub fn all() -> Vec<CatalogEntry> {
    IDS.iter().map(|id| entry(id).unwrap()).collect()
}

/// A printed class correspondence between two surfaces. `images` lists the
/// images of `H, E_1, E_2, ..` of the source in the target's printed names.
#[derive(Clone, Debug)]
pub struct LatticeCorrespondence {
    pub id: &'static str,
    pub from: &'static str,
    pub to: &'static str,
    /// Disjoint blow-ups added to the source so the ranks agree.
    pub extra: usize,
    pub images: Vec<&'static str>,
}

pub fn lattice_correspondences() -> Vec<LatticeCorrespondence> {
    vec![
        LatticeCorrespondence {
            id: "V+E10 -> IX.B(2)",
            from: "V",
            to: "IX.B(2)",
            extra: 1,
            images: vec![
                "2K - F1 - F9 - F10",
                "K - F1 - F10",
                "K - F1 - F9",
                "F2",
                "F3",
                "F4",
                "F5",
                "F6",
                "F7",
                "F8",
                "K - F9 - F10",
            ],
        },
        LatticeCorrespondence {
            id: "IX.B(2) -> IX.B(5)",
            from: "IX.B(2)",
            to: "IX.B(5)",
            extra: 0,
            images: vec![
                "2I - L1 - L2 - L3",
                "I - L2 - L3",
                "I - L1 - L3",
                "I - L1 - L2",
                "L6",
                "L7",
                "L8",
                "L9",
                "L10",
                "L4",
                "L5",
            ],
        },
        LatticeCorrespondence {
            id: "V+E10 -> IX.B(5)",
            from: "V",
            to: "IX.B(5)",
            extra: 1,
            images: vec![
                "3I - 2L1 - L2 - L3 - L4 - L5",
                "I - L1 - L5",
                "I - L1 - L4",
                "I - L1 - L3",
                "I - L1 - L2",
                "L6",
                "L7",
                "L8",
                "L9",
                "L10",
                "2I - L1 - L2 - L3 - 2L5",
            ],
        },
        LatticeCorrespondence {
            id: "IX.B(3)+E10 -> XIII",
            from: "IX.B(3)",
            to: "XIII",
            extra: 1,
            images: vec![
                "2K - F1 - F2 - F7",
                "K - F2 - F7",
                "K - F1 - F7",
                "F3",
                "F4",
                "F5",
                "F6",
                "F8",
                "F9",
                "F10",
                "K - F1 - F2",
            ],
        },
    ]
}

/// A printed change of variables together with its printed inverse.
#[derive(Clone, Debug)]
pub struct MapFixture {
    pub id: &'static str,
    pub source: PlanarSystem,
    pub target: PlanarSystem,
    pub forward: RationalMap,
    pub inverse: RationalMap,
}

struct MapText {
    id: &'static str,
    source: (&'static str, &'static str, &'static str),
    target: (&'static str, &'static str, &'static str),
    forward: (&'static str, &'static str),
    inverse: (&'static str, &'static str),
}

const MAPS: [MapText; 7] = [
    MapText {
        id: "IX.B(2) -> V",
        source: (SYSTEM_IXB2, "y92", "z92"),
        target: (SYSTEM_V_X, "y5", "z5"),
        forward: ("z92/6 + q", "y92*z92/6 + q'"),
        inverse: ("(z5 - q')/(y5 - q)", "6*(y5 - q)"),
    },
    MapText {
        id: "IX.B(2) -> IX.B(5)",
        source: (SYSTEM_IXB2, "y92", "z92"),
        target: (SYSTEM_IXB5, "y95", "z95"),
        forward: ("-y92/2", "-z92/2 + 3*y92^2/4 - 9*q"),
        inverse: ("-2*y95", "-2*(z95 - 3*y95^2 + 9*q)"),
    },
    MapText {
        id: "V -> IX.B(5)",
        source: (SYSTEM_V_X, "y5", "z5"),
        target: (SYSTEM_IXB5, "y95", "z95"),
        forward: ("-(z5 - q')/(2*(y5 - q))", "-9*q - 3*(y5 - q) + 3*(z5 - q')^2/(4*(y5 - q)^2)"),
        inverse: ("-2*q + y95^2 - z95/3", "6*q*y95 - 2*y95^3 + 2/3*y95*z95 + q'"),
    },
    MapText {
        id: "V -> XIV",
        source: (SYSTEM_V_X, "y5", "z5"),
        target: (SYSTEM_XIV, "y14", "z14"),
        forward: ("(6*q + r - 6*y5)*(q - y5)/(q*p - p*y5 + z5 - q')", "(z5 - q')/(y5 - q) - p"),
        inverse: ("(6*q + r + y14*z14)/6", "(r*z14 + y14*z14^2 + 6*q' + p*(r + y14*z14))/6"),
    },
    MapText {
        id: "IX.B(3) -> XIII",
        source: (SYSTEM_IXB3_X, "y93", "z93"),
        target: (SYSTEM_XIII_X, "y13", "z13"),
        forward: ("2*p - 2*y93", "(2*(x + 2*y93^2 - z93) + 2*p' - 2*p^2 - x)/(2*p - 2*y93)"),
        inverse: ("(2*p - y13)/2", "(y13^2 - y13*z13 - 4*p*y13 + x + 2*p^2 + 2*p')/2"),
    },
    MapText {
        id: "XIII -> IX.B(3) (alpha -> -alpha)",
        source: (SYSTEM_XIII_X_NEG, "y13", "z13"),
        target: (SYSTEM_IXB3_X, "y93", "z93"),
        forward: ("y13/2 - p", "(y13*z13 + x + 2*p^2 - 2*p')/2"),
        inverse: ("2*(y93 - p)", "(2*z93 - x - 2*p^2 + 2*p')/(2*(y93 - p))"),
    },
    MapText {
        id: "XIII(w,t) -> XIII",
        source: (SYSTEM_XIII_WT, "w", "t"),
        target: (SYSTEM_XIII, "y13", "z13"),
        forward: ("w", "(t + 2*p' - 2*p^2 - f)/w"),
        inverse: ("y13", "f + 2*p^2 + y13*z13 - 2*p'"),
    },
];

/// Source and target over the merged rules, with the forward map and the
/// optional inverse parsed in their respective variables.
pub fn map_between(
    src: &PlanarSystem,
    tgt: &PlanarSystem,
    forward: (&str, &str),
    inverse: Option<(&str, &str)>,
) -> Result<(PlanarSystem, PlanarSystem, RationalMap, Option<RationalMap>), CatalogError> {
    let rules = src.rules.merge(&tgt.rules).map_err(SystemError::from)?;
    let mut ssc = src.scope().with_rules(rules.clone());
    let mut tsc = tgt.scope().with_rules(rules.clone());
    for sc in [&mut ssc, &mut tsc] {
        sc.params.extend(src.params.iter().chain(&tgt.params).cloned());
        for (k, v) in src.abbrevs.iter().chain(&tgt.abbrevs) {
            sc.abbrevs.insert(k.clone(), v.clone());
        }
    }
    let fwd = RationalMap::parse(&ssc, tgt.names.clone(), forward.0, forward.1)?;
    let inv = inverse.map(|(a, b)| RationalMap::parse(&tsc, src.names.clone(), a, b)).transpose()?;
    Ok((src.with_rules(rules.clone()), tgt.with_rules(rules), fwd, inv))
}

fn build_map(t: &MapText) -> Result<MapFixture, CatalogError> {
    let src = PlanarSystem::parse(t.source.0)?.renamed(VarNames::new(t.source.1, t.source.2));
    let tgt = PlanarSystem::parse(t.target.0)?.renamed(VarNames::new(t.target.1, t.target.2));
    let (source, target, forward, inverse) = map_between(&src, &tgt, t.forward, Some(t.inverse))?;
    Ok(MapFixture { id: t.id, source, target, forward, inverse: inverse.expect("inverse given") })
}

pub fn map_fixtures() -> Vec<MapFixture> {
    MAPS.iter().map(|t| build_map(t).expect("catalog maps parse")).collect()
}

pub fn map_fixture(id: &str) -> Option<MapFixture> {
    MAPS.iter().find(|t| t.id == id).map(|t| build_map(t).expect("catalog maps parse"))
}

/// A printed Hamiltonian. With `factor`, `factor * first' = H_second`.
#[derive(Clone, Debug)]
pub struct HamiltonianFixture {
    pub id: &'static str,
    pub system: PlanarSystem,
    pub factor: Option<Frac>,
    pub h: Poly,
    /// The printed additive function of x, if any.
    pub gauge: Option<Poly>,
}

struct HamText {
    id: &'static str,
    system: &'static str,
    factor: Option<&'static str>,
    h: &'static str,
    gauge: Option<&'static str>,
}

const HAMILTONIANS: [HamText; 7] = [
    HamText { id: "H5", system: SYSTEM_V_X, factor: None, h: "z^2/2 - y*(x + 2*y^2)", gauge: None },
    HamText { id: "H_Ok", system: SYSTEM_IXB3_X, factor: None, h: "z^2/2 - (y^2 + x/2)*z - (alpha + 1/2)*y", gauge: None },
    HamText { id: "H_95m", system: SYSTEM_IXB5_MOD, factor: None, h: "9*q'*y + 3*q*z + 2*z*y^2 + z^2/2", gauge: None },
    HamText {
        id: "H1_Bu13",
        system: SYSTEM_XIII_WT,
        factor: None,
        h: "-w*(4*p^3 + 2*f*p - 2*p'' + f') + 2*p*w*t - t*(2*p^2 + 2*p' + f + 1/2) - w^2*t/2 + t^2/2",
        gauge: None,
    },
    HamText {
        id: "H2_Bu13",
        system: SYSTEM_XIII_QUAD,
        factor: None,
        h: "-2*alpha*x*w^2 + f*w^2 + alpha*x*t + w^2*t - t^2/4",
        gauge: None,
    },
    HamText { id: "H_Bu92", system: SYSTEM_IXB2, factor: Some("z/36"), h: "z^2*(z/108 - y^2/72 + q/6)", gauge: Some("g") },
    HamText {
        id: "H_Bu13",
        system: SYSTEM_XIII_X,
        factor: Some("-y/2"),
        h: "y^2/2*(p^2 - p' - p*z + (y*z - z^2 + x)/2)",
        gauge: Some("g"),
    },
];

fn build_ham(t: &HamText) -> Result<HamiltonianFixture, CatalogError> {
    let s = PlanarSystem::parse(t.system)?;
    let sc = s.scope();
    let factor = t.factor.map(|f| parse_frac(f, &sc)).transpose()?;
    let h = s.rules.reduce(&parse_poly(t.h, &sc)?);
    let gauge = t.gauge.map(|g| parse_poly(g, &sc)).transpose()?;
    Ok(HamiltonianFixture { id: t.id, system: s, factor, h, gauge })
}

pub fn hamiltonian_fixtures() -> Vec<HamiltonianFixture> {
    HAMILTONIANS.iter().map(|t| build_ham(t).expect("catalog Hamiltonians parse")).collect()
}

pub fn hamiltonian_fixture(id: &str) -> Option<HamiltonianFixture> {
    HAMILTONIANS.iter().find(|t| t.id == id).map(|t| build_ham(t).expect("catalog Hamiltonians parse"))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_entry_loads() {
        for id in IDS {
            assert_eq!(load(id).unwrap().id, id);
        }
        assert!(matches!(load("P7"), Err(CatalogError::Unknown(_))));
    }

    #[test]
    fn fixtures_build() {
        assert_eq!(map_fixtures().len(), 7);
        assert_eq!(hamiltonian_fixtures().len(), 7);
        for e in all() {
            e.printed_centers().unwrap();
        }
    }
}
