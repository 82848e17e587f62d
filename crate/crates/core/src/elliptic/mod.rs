//! Elliptic solvers and singular-integral diagnostics.

pub mod green;
pub mod neumann;
pub mod representation;
pub mod spectral;

pub use green::{green_disc, green_grad_y, pullback_green, pullback_green_grad_y, ConformalMap};
pub use neumann::{neumann_solve_disc, NeumannProblem};
pub use representation::{g_representation, h_field, Representation};
pub use spectral::{commutator_field, f1_field, poisson_periodic, spectral_laplacian};
