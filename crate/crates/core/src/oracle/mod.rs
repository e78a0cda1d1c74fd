//! Reference computations that share no quadrature with [`crate::potentials`]:
//! a spectral cascade of first-order potentials, finite-difference solvers
//! for the `m = 1` boundary value problem, and finite-difference application
//! of the iterated heat operator.

mod cascade;
mod compare;
mod crank_nicolson;
mod fd;

pub use cascade::{cascade_snapshot, cascade_volume_potential, CascadeRules, CascadeSnapshot};
pub use compare::{compare_cascade, seeded_probes, OracleComparison, OracleProbe, ORACLE_PROBES};
pub use crank_nicolson::{crank_nicolson_m1, GridSolution};
pub use fd::fd_heat_operator_residual;
