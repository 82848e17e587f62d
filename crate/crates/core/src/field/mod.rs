//! Grids, fields and the discrete calculus used by every other module.

mod grid;
mod interp;
mod ops;
pub mod snapshot;
mod values;

pub use grid::{DiscGeometry, Grid, GridDisc, GridTorus};
pub use interp::{interp, interp_cubic, interp_vector};
pub use ops::{
    advective_derivative, div, grad, grad_frobenius, grad_tensor, laplacian, perp_grad, rot,
    vector_laplacian,
};
pub use values::{pairwise_sum, ScalarField, VectorField};

