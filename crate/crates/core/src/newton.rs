//! Newton polygons of Hamiltonians and the shifted-exponent polytope of a
//! general planar system.
//!
//! A Hamiltonian term `z^j y^k` contributes the point `(j, k)`. For a system,
//! a term `y^n z^m` of the first equation contributes `(n - 1, m)` and one of
//! the second equation `(n, m - 1)`.

use crate::coeff::Rules;
use crate::field::chart_table;
use crate::poly::{Poly, Q};
use crate::system::PlanarSystem;
use num_integer::Integer;
use num_traits::{Signed, Zero};
use serde::Serialize;
use std::collections::BTreeSet;
use thiserror::Error;

pub type Point = (i64, i64);

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum NewtonError {
    #[error("the zero polynomial has no Newton polygon")]
    Zero,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Shape {
    Point,
    Segment,
    Triangle,
    Parallelogram,
    Quadrilateral,
    Polygon(usize),
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct NewtonPolygon {
    pub support: BTreeSet<Point>,
    /// Counter-clockwise, starting from the lowest-leftmost point; collinear
    /// points dropped.
    pub hull: Vec<Point>,
    pub interior: u64,
    pub boundary: u64,
    #[serde(serialize_with = "ser_q")]
    pub area: Q,
}

fn ser_q<S: serde::Serializer>(q: &Q, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&q.to_string())
}

fn cross(o: Point, a: Point, b: Point) -> i64 {
    (a.0 - o.0) * (b.1 - o.1) - (a.1 - o.1) * (b.0 - o.0)
}

/// Monotone chain.
pub fn convex_hull(points: &BTreeSet<Point>) -> Vec<Point> {
    let pts: Vec<Point> = points.iter().copied().collect();
    if pts.len() <= 2 {
        return pts;
    }
    let mut lower: Vec<Point> = Vec::new();
    for &p in &pts {
        while lower.len() >= 2 && cross(lower[lower.len() - 2], lower[lower.len() - 1], p) <= 0 {
            lower.pop();
        }
        lower.push(p);
    }
    let mut upper: Vec<Point> = Vec::new();
    for &p in pts.iter().rev() {
        while upper.len() >= 2 && cross(upper[upper.len() - 2], upper[upper.len() - 1], p) <= 0 {
            upper.pop();
        }
        upper.push(p);
    }
    lower.pop();
    upper.pop();
    lower.extend(upper);
    lower
}

fn twice_area(hull: &[Point]) -> i64 {
    let n = hull.len();
    (0..n)
        .map(|i| {
            let (a, b) = (hull[i], hull[(i + 1) % n]);
            a.0 * b.1 - a.1 * b.0
        })
        .sum::<i64>()
        .abs()
}

fn boundary_count(hull: &[Point]) -> u64 {
    match hull.len() {
        0 => 0,
        1 => 1,
        2 => (hull[1].0 - hull[0].0).abs().gcd(&(hull[1].1 - hull[0].1).abs()) as u64 + 1,
        n => (0..n)
            .map(|i| {
                let (a, b) = (hull[i], hull[(i + 1) % n]);
                (b.0 - a.0).abs().gcd(&(b.1 - a.1).abs()) as u64
            })
            .sum(),
    }
}

/// Lattice points strictly inside a convex polygon, row by row.
fn interior_count(hull: &[Point]) -> u64 {
    if hull.len() < 3 {
        return 0;
    }
    let ymin = hull.iter().map(|p| p.1).min().unwrap();
    let ymax = hull.iter().map(|p| p.1).max().unwrap();
    let n = hull.len();
    let mut total = 0u64;
    for y in ymin + 1..ymax {
        let mut xs: Vec<Q> = Vec::new();
        for i in 0..n {
            let (a, b) = (hull[i], hull[(i + 1) % n]);
            if a.1 == b.1 || y < a.1.min(b.1) || y > a.1.max(b.1) {
                continue;
            }
            xs.push(Q::from_integer(a.0.into()) + Q::new(((y - a.1) * (b.0 - a.0)).into(), (b.1 - a.1).into()));
        }
        let lo = xs.iter().min().unwrap();
        let hi = xs.iter().max().unwrap();
        let count: num_bigint::BigInt = hi.ceil().to_integer() - lo.floor().to_integer() - 1;
        if count.is_positive() {
            total += u64::try_from(count).expect("small polygon");
        }
    }
    total
}

impl NewtonPolygon {
    pub fn from_support(support: BTreeSet<Point>) -> NewtonPolygon {
        let hull = convex_hull(&support);
        let area = if hull.len() < 3 { Q::zero() } else { Q::new(twice_area(&hull).into(), 2.into()) };
        NewtonPolygon { interior: interior_count(&hull), boundary: boundary_count(&hull), area, hull, support }
    }

    /// `(interior lattice points, Euclidean area)`
    pub fn genus_and_area(&self) -> (u64, Q) {
        (self.interior, self.area.clone())
    }

    pub fn shape(&self) -> Shape {
        let h = &self.hull;
        match h.len() {
            1 => Shape::Point,
            2 => Shape::Segment,
            3 => Shape::Triangle,
            4 => {
                let d = |a: Point, b: Point| (b.0 - a.0, b.1 - a.1);
                if d(h[0], h[1]) == d(h[3], h[2]) {
                    Shape::Parallelogram
                } else {
                    Shape::Quadrilateral
                }
            }
            n => Shape::Polygon(n),
        }
    }

    /// Plain-text picture, `o` for support points, `.` elsewhere; first
    /// coordinate to the right.
    pub fn sketch(&self) -> String {
        let xs = self.support.iter().map(|p| p.0);
        let ys = self.support.iter().map(|p| p.1);
        let (x0, x1) = (xs.clone().min().unwrap_or(0), xs.max().unwrap_or(0));
        let (y0, y1) = (ys.clone().min().unwrap_or(0), ys.max().unwrap_or(0));
        let mut out = String::new();
        for y in (y0..=y1).rev() {
            for x in x0..=x1 {
                out.push(if self.support.contains(&(x, y)) { 'o' } else { '.' });
            }
            out.push('\n');
        }
        out
    }
}

/// Support of `H` by `(deg_z, deg_y)` where `z` is the second chart variable;
/// terms free of both chart variables count as the point `(0, 0)`.
pub fn polygon_of_hamiltonian(h: &Poly, rules: &Rules) -> Result<NewtonPolygon, NewtonError> {
    let h = rules.reduce(h);
    if h.is_zero() {
        return Err(NewtonError::Zero);
    }
    let support = chart_table(&h).into_iter().filter(|(_, c)| !c.is_zero()).map(|((a, b), _)| (b as i64, a as i64)).collect();
    Ok(NewtonPolygon::from_support(support))
}

pub fn chiba_polytope(s: &PlanarSystem) -> NewtonPolygon {
    let mut support = BTreeSet::new();
    for ((n, m), c) in chart_table(&s.f) {
        if !c.is_zero() {
            support.insert((n as i64 - 1, m as i64));
        }
    }
    for ((n, m), c) in chart_table(&s.g) {
        if !c.is_zero() {
            support.insert((n as i64, m as i64 - 1));
        }
    }
    NewtonPolygon::from_support(support)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn h5_triangle() {
        let p = NewtonPolygon::from_support([(2, 0), (0, 1), (0, 3)].into_iter().collect());
        assert_eq!(p.genus_and_area(), (1, Q::from_integer(2.into())));
        assert_eq!(p.shape(), Shape::Triangle);
    }

    #[test]
    fn single_monomial_is_degenerate() {
        let h = crate::expr::poly("u*v");
        let p = polygon_of_hamiltonian(&h, &Rules::empty()).unwrap();
        assert_eq!(p.genus_and_area(), (0, Q::zero()));
        assert_eq!(p.shape(), Shape::Point);
        assert_eq!(polygon_of_hamiltonian(&Poly::zero(), &Rules::empty()), Err(NewtonError::Zero));
    }

    #[test]
    fn collinear_points_dropped() {
        let p = NewtonPolygon::from_support([(0, 0), (1, 1), (2, 2), (2, 0)].into_iter().collect());
        assert_eq!(p.hull.len(), 3);
        assert_eq!(p.boundary, 6);
    }
}
