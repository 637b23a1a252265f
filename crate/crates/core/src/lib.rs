//! Blow-up regularisation, Picard-lattice surface types, birational maps and
//! Newton polygons for planar polynomial ODE systems whose coefficients
//! involve Painleve transcendents.

pub mod birational;
pub mod blowup;
pub mod catalog;
pub mod cli;
pub mod coeff;
pub mod expr;
pub mod field;
pub mod fixtures;
pub mod hamiltonian;
pub mod iterate;
pub mod newton;
pub mod par;
pub mod picard;
pub mod poly;
pub mod system;
