//! Two-dimensional compressible Navier–Stokes solver for the model with
//! constant shear viscosity and bulk viscosity `λ(ρ) = ρ^β`, on the periodic
//! unit torus and on the unit disc with Navier-slip walls.
//!
//! The crate is organised bottom-up:
//!
//! * [`field`] – grids, fields, finite-difference operators, quadrature;
//! * [`physics`] – constitutive laws, semi-discrete tendencies, effective flux;
//! * [`steady`] – equilibrium density for a potential force;
//! * [`integrate`] – SSP-RK3 time stepping, flow-line tracing;
//! * [`elliptic`] – periodic inverse Laplacian, disc Neumann solver and the
//!   Green-function representation of the effective viscous flux;
//! * [`diagnostics`] – energy functionals, norms and decay fits;
//! * [`oracles`] – numerical checks of functional inequalities;
//! * [`cli`] – configuration, presets and command entry points.

pub mod cli;
pub mod diagnostics;
pub mod elliptic;
pub mod error;
pub mod field;
pub mod integrate;
pub mod oracles;
pub mod physics;
pub mod steady;

pub use error::{Error, Result};
