//! Iterated heat potentials and nonlocal transparent boundary conditions.
//!
//! The crate evaluates the volume potential of the iterated heat kernel
//! `eps_{m,n}`, the boundary traces `diamond^k u` it generates, and the
//! nonlocal boundary functionals `I^k` that vanish identically on those
//! traces. For `m = 1` it also solves the heat equation with inhomogeneous
//! nonlocal boundary data through Dirichlet Green functions built by the
//! method of images. Independent oracles (a Fourier cascade of first-order
//! potentials, Crank-Nicolson, finite differences) back every check.

// `!(x > 0.0)` is used on purpose so that NaN fails validation.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod geometry;
pub mod greens;
pub mod kernel;
pub mod oracle;
mod par;
pub mod potentials;
pub mod quadrature;
pub mod scenario;
pub mod source;
pub mod transparent_bc;

pub use error::{HeatError, Result};
pub use geometry::{Aabb, Domain};
pub use kernel::{KernelOrder, SpaceVec};
