//! Divisor classes on P^2 blown up in n points, the configuration of tracked
//! curves, and recognition of the affine E7 / E8 diagrams among the -2 curves.

use crate::blowup::{BlowupTree, Curve};
use crate::expr::fmt_poly;
use serde::Serialize;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PicardError {
    #[error("classes live in different bases ({0} vs {1} exceptional classes)")]
    BasisMismatch(usize, usize),
    #[error("blow-up tree is not regular")]
    NotRegular,
    #[error("cannot read class `{0}`")]
    Parse(String),
}

/// Coefficients over `(H, E_1, .., E_n)`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct DivisorClass(pub Vec<i64>);

impl DivisorClass {
    pub fn zero(n: usize) -> DivisorClass {
        DivisorClass(vec![0; n + 1])
    }

    pub fn hyperplane(n: usize) -> DivisorClass {
        let mut c = DivisorClass::zero(n);
        c.0[0] = 1;
        c
    }

    pub fn exceptional(n: usize, k: usize) -> DivisorClass {
        let mut c = DivisorClass::zero(n);
        c.0[k] = 1;
        c
    }

    /// `3H - E_1 - .. - E_n`
    pub fn anticanonical(n: usize) -> DivisorClass {
        let mut c = DivisorClass(vec![-1; n + 1]);
        c.0[0] = 3;
        c
    }

    /// Number of exceptional classes in the basis.
    pub fn n(&self) -> usize {
        self.0.len() - 1
    }

    pub fn padded(&self, n: usize) -> DivisorClass {
        let mut c = self.0.clone();
        c.resize(n + 1, 0);
        DivisorClass(c)
    }

    pub fn add(&self, o: &DivisorClass) -> DivisorClass {
        DivisorClass(self.0.iter().zip(&o.0).map(|(a, b)| a + b).collect())
    }

    pub fn scale(&self, k: i64) -> DivisorClass {
        DivisorClass(self.0.iter().map(|a| a * k).collect())
    }

    /// Reads sums like `2K - F1 - F9 - F10` where `basis = ("K", "F")`.
    pub fn parse(src: &str, basis: (&str, &str), n: usize) -> Result<DivisorClass, PicardError> {
        let bad = || PicardError::Parse(src.to_string());
        let s: String = src.chars().filter(|c| !c.is_whitespace()).collect();
        let mut out = DivisorClass::zero(n);
        let mut rest = s.as_str();
        if rest.is_empty() {
            return Err(bad());
        }
        while !rest.is_empty() {
            let mut sign = 1;
            if let Some(r) = rest.strip_prefix('+') {
                rest = r;
            } else if let Some(r) = rest.strip_prefix('-') {
                sign = -1;
                rest = r;
            }
            let digits = rest.chars().take_while(|c| c.is_ascii_digit()).count();
            let coeff: i64 = if digits == 0 { 1 } else { rest[..digits].parse().map_err(|_| bad())? };
            rest = &rest[digits..];
            let end = rest.find(['+', '-']).unwrap_or(rest.len());
            let sym = &rest[..end];
            rest = &rest[end..];
            if sym == basis.0 {
                out.0[0] += sign * coeff;
            } else if let Some(k) = sym.strip_prefix(basis.1) {
                let k: usize = k.parse().map_err(|_| bad())?;
                if k == 0 || k > n {
                    return Err(bad());
                }
                out.0[k] += sign * coeff;
            } else {
                return Err(bad());
            }
        }
        Ok(out)
    }

    pub fn display(&self, basis: (&str, &str)) -> String {
        let mut out = String::new();
        for (i, &c) in self.0.iter().enumerate() {
            if c == 0 {
                continue;
            }
            let sym = if i == 0 { basis.0.to_string() } else { format!("{}{}", basis.1, i) };
            let mag = if c.abs() == 1 { String::new() } else { c.abs().to_string() };
            let sign = match (out.is_empty(), c < 0) {
                (true, false) => "",
                (true, true) => "-",
                (false, false) => " + ",
                (false, true) => " - ",
            };
            out.push_str(&format!("{sign}{mag}{sym}"));
        }
        if out.is_empty() {
            "0".into()
        } else {
            out
        }
    }
}

impl fmt::Display for DivisorClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.display(("H", "E")))
    }
}

/// `H.H = 1`, `E_i.E_j = -delta_ij`, `H.E_i = 0`.
pub fn intersect(a: &DivisorClass, b: &DivisorClass) -> Result<i64, PicardError> {
    if a.0.len() != b.0.len() {
        return Err(PicardError::BasisMismatch(a.n(), b.n()));
    }
    Ok(a.0[0] * b.0[0] - a.0[1..].iter().zip(&b.0[1..]).map(|(x, y)| x * y).sum::<i64>())
}

#[derive(Clone, Debug, Serialize)]
pub struct Node {
    pub curve: Curve,
    pub class: DivisorClass,
    pub self_intersection: i64,
    /// Local equation `(chart, equation)` in the first chart where the curve is visible.
    pub equation: Option<(String, String)>,
}

#[derive(Clone, Debug, Serialize)]
pub struct IntersectionDiagram {
    pub n: usize,
    pub nodes: Vec<Node>,
    /// Node index pairs with nonzero intersection number.
    pub edges: Vec<(usize, usize, i64)>,
}

impl IntersectionDiagram {
    pub fn minus_two(&self) -> Vec<usize> {
        (0..self.nodes.len()).filter(|&i| self.nodes[i].self_intersection == -2).collect()
    }

    pub fn minus_two_classes(&self) -> BTreeSet<DivisorClass> {
        self.minus_two().into_iter().map(|i| self.nodes[i].class.clone()).collect()
    }

    pub fn anticanonical(&self) -> DivisorClass {
        DivisorClass::anticanonical(self.n)
    }

    /// The same curves on a surface with `extra` further (disjoint) blow-ups.
    pub fn with_extra_blowups(&self, extra: usize) -> IntersectionDiagram {
        let n = self.n + extra;
        let nodes = self.nodes.iter().map(|nd| Node { class: nd.class.padded(n), ..nd.clone() }).collect();
        IntersectionDiagram { n, nodes, edges: self.edges.clone() }
    }

    /// DOT export; -2 curves green, -1 blue, the rest gray.
    pub fn to_dot(&self, name: &str) -> String {
        let mut out = format!("graph \"{name}\" {{\n  node [style=filled, shape=box];\n");
        for (i, nd) in self.nodes.iter().enumerate() {
            let colour = match nd.self_intersection {
                -2 => "green",
                -1 => "lightblue",
                _ => "gray",
            };
            out.push_str(&format!(
                "  n{i} [label=\"{}\\n{}\\n({})\", fillcolor={colour}];\n",
                nd.curve, nd.class, nd.self_intersection
            ));
        }
        for (a, b, k) in &self.edges {
            if *k == 1 {
                out.push_str(&format!("  n{a} -- n{b};\n"));
            } else {
                out.push_str(&format!("  n{a} -- n{b} [label=\"{k}\"];\n"));
            }
        }
        out.push_str("}\n");
        out
    }

    pub fn class_table(&self) -> String {
        let mut out = String::new();
        for nd in &self.nodes {
            out.push_str(&format!("{:<4} {:>3}  {}\n", nd.curve.to_string(), nd.self_intersection, nd.class));
        }
        out
    }
}

/// Classes of the line at infinity and of every exceptional curve, with the
/// strict-transform subtraction applied for each center lying on the curve.
pub fn component_configuration(tree: &BlowupTree) -> Result<IntersectionDiagram, PicardError> {
    if !tree.is_regular() {
        return Err(PicardError::NotRegular);
    }
    let n = tree.blowups.len();
    let mut classes: BTreeMap<Curve, DivisorClass> = BTreeMap::new();
    classes.insert(Curve::Line, DivisorClass::hyperplane(n));
    for b in &tree.blowups {
        for c in &b.on_curves {
            let cl = classes.get_mut(c).expect("curve tracked before it is hit");
            cl.0[b.index] -= 1;
        }
        classes.insert(Curve::Exc(b.index), DivisorClass::exceptional(n, b.index));
    }
    let mut nodes = Vec::new();
    for (curve, class) in classes {
        let equation = tree.charts.iter().find_map(|ch| {
            ch.curves.iter().find(|(c, _)| *c == curve).map(|(_, eq)| (ch.label.clone(), fmt_poly(eq, &ch.names)))
        });
        let self_intersection = intersect(&class, &class)?;
        nodes.push(Node { curve, class, self_intersection, equation });
    }
    let mut edges = Vec::new();
    for i in 0..nodes.len() {
        for j in i + 1..nodes.len() {
            let k = intersect(&nodes[i].class, &nodes[j].class)?;
            if k != 0 {
                edges.push((i, j, k));
            }
        }
    }
    Ok(IntersectionDiagram { n, nodes, edges })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum SurfaceLabel {
    E7,
    E8,
    Unknown,
}

impl fmt::Display for SurfaceLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SurfaceLabel::E7 => "E7(1)",
            SurfaceLabel::E8 => "E8(1)",
            SurfaceLabel::Unknown => "unknown",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SurfaceType {
    pub label: SurfaceLabel,
    /// `node_map[k]` is the diagram node carrying `delta_{k+1}`.
    pub node_map: Vec<usize>,
}

// delta labels are 1-based, matching the usual pictures
const E8_EDGES: [(usize, usize); 8] = [(1, 4), (2, 3), (3, 4), (4, 5), (5, 6), (6, 7), (7, 8), (8, 9)];
const E7_EDGES: [(usize, usize); 7] = [(1, 5), (2, 3), (3, 4), (4, 5), (5, 6), (6, 7), (7, 8)];

fn adjacency(m: usize, edges: &[(usize, usize)]) -> Vec<Vec<bool>> {
    let mut a = vec![vec![false; m]; m];
    for &(i, j) in edges {
        a[i][j] = true;
        a[j][i] = true;
    }
    a
}

/// Lexicographically first isomorphism `template -> graph`, if any.
fn first_isomorphism(t: &[Vec<bool>], g: &[Vec<bool>]) -> Option<Vec<usize>> {
    fn go(k: usize, t: &[Vec<bool>], g: &[Vec<bool>], map: &mut Vec<usize>, used: &mut [bool]) -> bool {
        if k == t.len() {
            return true;
        }
        for cand in 0..g.len() {
            if used[cand] {
                continue;
            }
            if (0..k).all(|j| t[k][j] == g[cand][map[j]]) {
                map.push(cand);
                used[cand] = true;
                if go(k + 1, t, g, map, used) {
                    return true;
                }
                used[cand] = false;
                map.pop();
            }
        }
        false
    }
    if t.len() != g.len() {
        return None;
    }
    let mut map = Vec::new();
    let mut used = vec![false; g.len()];
    go(0, t, g, &mut map, &mut used).then_some(map)
}

/// Compares the dual graph of the -2 curves with the affine E7 and E8 diagrams.
pub fn classify(diag: &IntersectionDiagram) -> SurfaceType {
    let nodes = diag.minus_two();
    let m = nodes.len();
    let mut g = vec![vec![false; m]; m];
    for (a, b, k) in &diag.edges {
        if let (Some(i), Some(j)) = (nodes.iter().position(|x| x == a), nodes.iter().position(|x| x == b)) {
            if *k != 1 {
                return SurfaceType { label: SurfaceLabel::Unknown, node_map: Vec::new() };
            }
            g[i][j] = true;
            g[j][i] = true;
        }
    }
    type Template<'a> = (SurfaceLabel, usize, &'a [(usize, usize)]);
    let templates: [Template; 2] = [(SurfaceLabel::E8, 9, &E8_EDGES), (SurfaceLabel::E7, 8, &E7_EDGES)];
    for (label, size, edges) in templates {
        let e: Vec<(usize, usize)> = edges.iter().map(|(a, b)| (a - 1, b - 1)).collect();
        if let Some(map) = first_isomorphism(&adjacency(size, &e), &g) {
            return SurfaceType { label, node_map: map.into_iter().map(|i| nodes[i]).collect() };
        }
    }
    SurfaceType { label: SurfaceLabel::Unknown, node_map: Vec::new() }
}

/// `images[i]` is the image of the i-th basis class of `a` (H, E_1, ..),
/// written in the basis of `b`.
pub fn verify_isometry(images: &[DivisorClass], a: &IntersectionDiagram, b: &IntersectionDiagram) -> Result<bool, PicardError> {
    if images.len() != a.n + 1 || a.n != b.n {
        return Err(PicardError::BasisMismatch(a.n, b.n));
    }
    if let Some(bad) = images.iter().find(|c| c.n() != b.n) {
        return Err(PicardError::BasisMismatch(bad.n(), b.n));
    }
    let apply = |c: &DivisorClass| c.0.iter().zip(images).fold(DivisorClass::zero(b.n), |acc, (k, img)| acc.add(&img.scale(*k)));
    for i in 0..=a.n {
        for j in i..=a.n {
            let e_i = DivisorClass(if i == 0 { DivisorClass::hyperplane(a.n).0 } else { DivisorClass::exceptional(a.n, i).0 });
            let e_j = DivisorClass(if j == 0 { DivisorClass::hyperplane(a.n).0 } else { DivisorClass::exceptional(a.n, j).0 });
            if intersect(&images[i], &images[j])? != intersect(&e_i, &e_j)? {
                return Ok(false);
            }
        }
    }
    if apply(&a.anticanonical()) != b.anticanonical() {
        return Ok(false);
    }
    let mapped: BTreeSet<DivisorClass> = a.minus_two_classes().iter().map(apply).collect();
    Ok(mapped == b.minus_two_classes())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_display() {
        let c = DivisorClass::parse("2K - F1 - F9 - F10", ("K", "F"), 10).unwrap();
        assert_eq!(c.0, vec![2, -1, 0, 0, 0, 0, 0, 0, 0, -1, -1]);
        assert_eq!(c.display(("K", "F")), "2K - F1 - F9 - F10");
        assert!(DivisorClass::parse("K - G1", ("K", "F"), 3).is_err());
        assert!(DivisorClass::parse("F4", ("K", "F"), 3).is_err());
    }

    #[test]
    fn basic_numbers() {
        let n = 3;
        let h = DivisorClass::hyperplane(n);
        let e1 = DivisorClass::exceptional(n, 1);
        let e2 = DivisorClass::exceptional(n, 2);
        let he = h.add(&e1.scale(-1));
        assert_eq!(intersect(&he, &he), Ok(0));
        let d = e1.add(&e2.scale(-1));
        assert_eq!(intersect(&d, &d), Ok(-2));
        assert_eq!(intersect(&h, &h), Ok(1));
        assert!(intersect(&h, &DivisorClass::hyperplane(4)).is_err());
    }

    #[test]
    fn empty_diagram_is_unknown() {
        let d = IntersectionDiagram { n: 0, nodes: Vec::new(), edges: Vec::new() };
        assert_eq!(classify(&d).label, SurfaceLabel::Unknown);
    }
}
