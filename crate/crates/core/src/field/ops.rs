//! Second-order finite-difference operators.
//!
//! Sign conventions follow the model: `rot v = ∂₂v₁ − ∂₁v₂` (the negative of
//! the usual 2D curl) and `∇⊥s = (∂₂s, −∂₁s)`, so that
//! `Δv = ∇div v + ∇⊥rot v`.
//!
//! On the torus all stencils are central with periodic wrap. On the disc,
//! radial differences cross the pole through the antipodal cell and switch to
//! three-point one-sided stencils on the outermost ring. Angular stencils are
//! normalised so that the first harmonic is exact; together with the chain
//! rule on Cartesian components this differentiates affine vector fields
//! (uniform flow, rigid rotation, dilation) exactly, pole included.

use super::grid::{DiscGeometry, Grid, GridDisc, GridTorus};
use super::values::{same_grid, ScalarField, VectorField};
use crate::Result;

pub fn grad(s: &ScalarField) -> VectorField {
    let grid = *s.grid();
    match grid {
        Grid::Torus(g) => {
            let (gx, gy) = torus_grad(&g, s.values());
            VectorField::from_raw(grid, gx, gy)
        }
        Grid::Disc(g) => {
            let geo = DiscGeometry::new(g);
            let (gx, gy) = disc_grad(&geo, s.values());
            VectorField::from_raw(grid, gx, gy)
        }
    }
}

pub fn div(v: &VectorField) -> ScalarField {
    let (gx, gy) = cartesian_derivatives(v);
    let grid = *v.grid();
    ScalarField::from_raw(
        grid,
        gx.x().iter().zip(gy.y()).map(|(a, b)| a + b).collect(),
    )
}

/// `∂₂v₁ − ∂₁v₂`.
pub fn rot(v: &VectorField) -> ScalarField {
    let (gx, gy) = cartesian_derivatives(v);
    let grid = *v.grid();
    ScalarField::from_raw(
        grid,
        gx.y().iter().zip(gy.x()).map(|(a, b)| a - b).collect(),
    )
}

/// Gradients of the two Cartesian components.
fn cartesian_derivatives(v: &VectorField) -> (VectorField, VectorField) {
    (grad(&v.component(0)), grad(&v.component(1)))
}

/// `∇⊥s = (∂₂s, −∂₁s)`.
pub fn perp_grad(s: &ScalarField) -> VectorField {
    let g = grad(s);
    let grid = *g.grid();
    let (gx, gy) = g.into_parts();
    VectorField::from_raw(grid, gy, gx.into_iter().map(|v| -v).collect())
}

/// Five-point Laplacian. On the disc the outer ghost value is a cubic
/// extrapolation of the last four rings.
pub fn laplacian(s: &ScalarField) -> ScalarField {
    let grid = *s.grid();
    let out = match grid {
        Grid::Torus(g) => torus_laplacian(&g, s.values()),
        Grid::Disc(g) => disc_laplacian(&g, s.values()),
    };
    ScalarField::from_raw(grid, out)
}

/// Componentwise Laplacian of a vector field.
pub fn vector_laplacian(v: &VectorField) -> VectorField {
    VectorField::from_raw(
        *v.grid(),
        laplacian(&v.component(0)).into_values(),
        laplacian(&v.component(1)).into_values(),
    )
}

/// Velocity gradient `[∂₁v₁, ∂₂v₁, ∂₁v₂, ∂₂v₂]` in Cartesian components.
pub fn grad_tensor(v: &VectorField) -> [ScalarField; 4] {
    let (gx, gy) = cartesian_derivatives(v);
    let grid = *v.grid();
    let (a, b) = gx.into_parts();
    let (c, d) = gy.into_parts();
    [a, b, c, d].map(|c| ScalarField::from_raw(grid, c))
}

/// Pointwise Frobenius norm of the velocity gradient.
pub fn grad_frobenius(v: &VectorField) -> ScalarField {
    let t = grad_tensor(v);
    let grid = *v.grid();
    ScalarField::from_raw(
        grid,
        (0..grid.len())
            .map(|k| t.iter().map(|c| c.values()[k].powi(2)).sum::<f64>().sqrt())
            .collect(),
    )
}

/// `(a·∇)b` with `b` differentiated componentwise.
pub fn advective_derivative(a: &VectorField, b: &VectorField) -> Result<VectorField> {
    same_grid(a.grid(), b.grid())?;
    let gx = grad(&b.component(0));
    let gy = grad(&b.component(1));
    let n = a.grid().len();
    let (ax, ay) = (a.x(), a.y());
    Ok(VectorField::from_raw(
        *a.grid(),
        (0..n).map(|k| ax[k] * gx.x()[k] + ay[k] * gx.y()[k]).collect(),
        (0..n).map(|k| ax[k] * gy.x()[k] + ay[k] * gy.y()[k]).collect(),
    ))
}

pub(crate) fn torus_grad(g: &GridTorus, s: &[f64]) -> (Vec<f64>, Vec<f64>) {
    let n = g.n();
    let inv2h = 0.5 / g.h();
    let mut gx = vec![0.0; n * n];
    let mut gy = vec![0.0; n * n];
    for j in 0..n {
        let jp = (j + 1) % n;
        let jm = (j + n - 1) % n;
        for i in 0..n {
            let ip = (i + 1) % n;
            let im = (i + n - 1) % n;
            gx[j * n + i] = (s[j * n + ip] - s[j * n + im]) * inv2h;
            gy[j * n + i] = (s[jp * n + i] - s[jm * n + i]) * inv2h;
        }
    }
    (gx, gy)
}

fn torus_laplacian(g: &GridTorus, s: &[f64]) -> Vec<f64> {
    let n = g.n();
    let inv_h2 = 1.0 / (g.h() * g.h());
    let mut out = vec![0.0; n * n];
    for j in 0..n {
        let jp = (j + 1) % n;
        let jm = (j + n - 1) % n;
        for i in 0..n {
            let ip = (i + 1) % n;
            let im = (i + n - 1) % n;
            let c = s[j * n + i];
            out[j * n + i] = (s[j * n + ip] + s[j * n + im] + s[jp * n + i] + s[jm * n + i]
                - 4.0 * c)
                * inv_h2;
        }
    }
    out
}

/// Radial derivative of a scalar.
pub(crate) fn disc_dr_scalar(g: &GridDisc, s: &[f64]) -> Vec<f64> {
    let (nr, nth) = (g.n_r(), g.n_th());
    let dr = g.dr();
    let mut out = vec![0.0; nr * nth];
    for i in 0..nr {
        for j in 0..nth {
            let k = g.idx(i, j);
            out[k] = if i == 0 {
                (s[g.idx(1, j)] - s[g.idx(0, g.antipode(j))]) / (2.0 * dr)
            } else if i == nr - 1 {
                (3.0 * s[k] - 4.0 * s[g.idx(i - 1, j)] + s[g.idx(i - 2, j)]) / (2.0 * dr)
            } else {
                (s[g.idx(i + 1, j)] - s[g.idx(i - 1, j)]) / (2.0 * dr)
            };
        }
    }
    out
}

/// Central `∂θ` (not divided by r), normalised by `2 sin Δθ` so the first
/// angular harmonic is differentiated exactly.
pub(crate) fn disc_dth(geo: &DiscGeometry, q: &[f64]) -> Vec<f64> {
    let g = &geo.grid;
    let (nr, nth) = (g.n_r(), g.n_th());
    let inv = 0.5 / g.dth().sin();
    let mut out = vec![0.0; nr * nth];
    for i in 0..nr {
        for j in 0..nth {
            let jp = (j + 1) % nth;
            let jm = (j + nth - 1) % nth;
            out[g.idx(i, j)] = (q[g.idx(i, jp)] - q[g.idx(i, jm)]) * inv;
        }
    }
    out
}

fn disc_grad(geo: &DiscGeometry, s: &[f64]) -> (Vec<f64>, Vec<f64>) {
    let g = &geo.grid;
    let dr = disc_dr_scalar(g, s);
    let dt = disc_dth(geo, s);
    let nth = g.n_th();
    let mut gx = vec![0.0; s.len()];
    let mut gy = vec![0.0; s.len()];
    for k in 0..s.len() {
        let (i, j) = (k / nth, k % nth);
        let gt = dt[k] / geo.r[i];
        gx[k] = geo.cos[j] * dr[k] - geo.sin[j] * gt;
        gy[k] = geo.sin[j] * dr[k] + geo.cos[j] * gt;
    }
    (gx, gy)
}

fn disc_laplacian(g: &GridDisc, s: &[f64]) -> Vec<f64> {
    let (nr, nth) = (g.n_r(), g.n_th());
    let dr = g.dr();
    // 4 sin²(Δθ/2) keeps the first harmonic exact, so affine data has zero
    // Laplacian even next to the pole.
    let ang2 = 4.0 * (0.5 * g.dth()).sin().powi(2);
    let mut out = vec![0.0; nr * nth];
    for i in 0..nr {
        let r = g.r(i);
        let r_in = i as f64 * dr;
        let r_out = g.r_face(i);
        for j in 0..nth {
            let k = g.idx(i, j);
            let c = s[k];
            let outer = if i == nr - 1 {
                4.0 * c - 6.0 * s[g.idx(i - 1, j)] + 4.0 * s[g.idx(i - 2, j)]
                    - s[g.idx(i - 3, j)]
            } else {
                s[g.idx(i + 1, j)]
            };
            let inner = if i == 0 { c } else { s[g.idx(i - 1, j)] };
            let radial = (r_out * (outer - c) - r_in * (c - inner)) / (r * dr * dr);
            let jp = (j + 1) % nth;
            let jm = (j + nth - 1) % nth;
            let angular = (s[g.idx(i, jp)] - 2.0 * c + s[g.idx(i, jm)]) / (r * r * ang2);
            out[k] = radial + angular;
        }
    }
    out
}
