//! Hamiltonian structure: `first' = dH/d(second)`, `second' = -dH/d(first)`.

use crate::field::Frac;
use crate::poly::{Mono, Poly, Var, Q};
use crate::system::PlanarSystem;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum HamiltonianError {
    #[error("vector field is not divergence free (divergence {0:?})")]
    NotClosed(Poly),
    #[error("scaled field is not polynomial")]
    NotPolynomial,
}

impl HamiltonianError {
    /// The message with the divergence written in the system's variables.
    pub fn describe(&self, names: &crate::expr::VarNames) -> String {
        match self {
            HamiltonianError::NotClosed(d) => {
                format!("vector field is not divergence free (divergence {})", crate::expr::fmt_poly(d, names))
            }
            e => e.to_string(),
        }
    }
}

/// `dF/dU + dG/dV`, reduced.
pub fn divergence(s: &PlanarSystem) -> Poly {
    s.rules.reduce(&(&s.f.derivative(&Var::U) + &s.g.derivative(&Var::V)))
}

pub fn is_standard(s: &PlanarSystem) -> bool {
    divergence(s).is_zero()
}

fn integrate(p: &Poly, v: &Var) -> Poly {
    Poly::from_terms(p.terms().map(|(m, c)| {
        let e = m.exp(v);
        (m.mul(&Mono::var(v.clone(), 1)), c / Q::from_integer((e + 1).into()))
    }))
}

/// Polynomial potential of a closed pair: `H_V = a`, `H_U = -b`.
fn potential(a: &Poly, b: &Poly) -> Poly {
    let h0 = integrate(a, &Var::V);
    let rest = &(-b) - &h0.derivative(&Var::U);
    let h = &h0 + &integrate(&rest, &Var::U);
    without_gauge(&h)
}

/// Drops the terms free of both chart variables.
pub fn without_gauge(h: &Poly) -> Poly {
    Poly::from_terms(h.terms().filter(|(m, _)| m.exp(&Var::U) + m.exp(&Var::V) > 0).map(|(m, c)| (m.clone(), c.clone())))
}

/// Equality up to a function of x alone.
pub fn equal_up_to_gauge(s: &PlanarSystem, a: &Poly, b: &Poly) -> bool {
    let d = s.rules.reduce(&(a - b));
    !d.has_chart_vars()
}

/// Reconstructs H for a system already in standard form; the gauge (terms
/// without chart variables) is fixed to zero.
pub fn reconstruct(s: &PlanarSystem) -> Result<Poly, HamiltonianError> {
    let d = divergence(s);
    if !d.is_zero() {
        return Err(HamiltonianError::NotClosed(d));
    }
    Ok(s.rules.reduce(&potential(&s.f, &s.g)))
}

/// H with `c*first' = H_second`, `c*second' = -H_first`.
pub fn hamiltonian_wrt_factor(s: &PlanarSystem, c: &Frac) -> Result<Poly, HamiltonianError> {
    let a = c.mul_poly(&s.f).reduce(&s.rules);
    let b = c.mul_poly(&s.g).reduce(&s.rules);
    let (a, b) = match (a.as_poly(), b.as_poly()) {
        (Some(a), Some(b)) => (a.clone(), b.clone()),
        _ => return Err(HamiltonianError::NotPolynomial),
    };
    let d = s.rules.reduce(&(&a.derivative(&Var::U) + &b.derivative(&Var::V)));
    if !d.is_zero() {
        return Err(HamiltonianError::NotClosed(d));
    }
    Ok(s.rules.reduce(&potential(&a, &b)))
}

/// Checks that `h` generates `s` with multiplier `c`.
pub fn generates(s: &PlanarSystem, h: &Poly, c: &Frac) -> bool {
    let hz = Frac::from_poly(h.derivative(&Var::V));
    let hy = Frac::from_poly(-&h.derivative(&Var::U));
    let a = c.mul_poly(&s.f);
    let b = c.mul_poly(&s.g);
    (&a - &hz).reduce(&s.rules).is_zero() && (&b - &hy).reduce(&s.rules).is_zero()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::{parse_poly, Scope, VarNames};

    #[test]
    fn p1_hamiltonian() {
        let s = PlanarSystem::parse("vars y z\ny' = z\nz' = 6 y^2 + x").unwrap();
        let h = reconstruct(&s).unwrap();
        let sc = Scope::new(VarNames::new("y", "z"));
        assert_eq!(h, parse_poly("z^2/2 - 2 y^3 - x y", &sc).unwrap());
        assert!(generates(&s, &h, &Frac::one()));
    }

    #[test]
    fn non_closed_reports_divergence() {
        let s = PlanarSystem::parse("vars y z\ny' = y\nz' = 0").unwrap();
        assert_eq!(reconstruct(&s), Err(HamiltonianError::NotClosed(Poly::one())));
    }
}
