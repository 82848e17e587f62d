use std::f64::consts::PI;

use super::grid::{Grid, GridDisc, GridTorus};
use super::values::{ScalarField, VectorField};
use crate::{Error, Result};

/// Bilinear interpolation of a scalar field at `(x, y)`.
///
/// The torus wraps; the disc interpolates in `(r, θ)`, bridging the pole
/// through the antipodal ring and extrapolating linearly between the last
/// ring centre and the wall.
pub fn interp(s: &ScalarField, x: f64, y: f64) -> Result<f64> {
    interp_values(s.grid(), s.values(), x, y)
}

pub fn interp_vector(v: &VectorField, x: f64, y: f64) -> Result<(f64, f64)> {
    Ok((
        interp_values(v.grid(), v.x(), x, y)?,
        interp_values(v.grid(), v.y(), x, y)?,
    ))
}

pub(crate) fn interp_values(grid: &Grid, values: &[f64], x: f64, y: f64) -> Result<f64> {
    if !(x.is_finite() && y.is_finite()) {
        return Err(Error::OutOfDomain { x, y });
    }
    match grid {
        Grid::Torus(g) => Ok(torus(g, values, x, y)),
        Grid::Disc(g) => disc(g, values, x, y),
    }
}

fn torus(g: &GridTorus, v: &[f64], x: f64, y: f64) -> f64 {
    let n = g.n();
    let fx = x.rem_euclid(1.0) * n as f64;
    let fy = y.rem_euclid(1.0) * n as f64;
    let (i0, j0) = (fx.floor() as usize % n, fy.floor() as usize % n);
    let (wx, wy) = (fx - fx.floor(), fy - fy.floor());
    let (i1, j1) = ((i0 + 1) % n, (j0 + 1) % n);
    let a = v[g.idx(i0, j0)] * (1.0 - wx) + v[g.idx(i1, j0)] * wx;
    let b = v[g.idx(i0, j1)] * (1.0 - wx) + v[g.idx(i1, j1)] * wx;
    a * (1.0 - wy) + b * wy
}

/// Linear interpolation around ring `i` at angle `theta`.
fn ring(g: &GridDisc, v: &[f64], i: usize, theta: f64) -> f64 {
    let t = theta.rem_euclid(2.0 * PI) / g.dth();
    let j0 = t.floor() as usize % g.n_th();
    let w = t - t.floor();
    let j1 = (j0 + 1) % g.n_th();
    v[g.idx(i, j0)] * (1.0 - w) + v[g.idx(i, j1)] * w
}

fn disc(g: &GridDisc, v: &[f64], x: f64, y: f64) -> Result<f64> {
    let r = x.hypot(y);
    if r > 1.0 + 1e-12 {
        return Err(Error::OutOfDomain { x, y });
    }
    let theta = y.atan2(x);
    let dr = g.dr();
    let s = r / dr - 0.5;
    let nr = g.n_r();
    if s < 0.0 {
        // Between the antipodal ring-0 value (signed radius −r₀) and ring 0.
        let w = (r + 0.5 * dr) / dr;
        let inner = ring(g, v, 0, theta + PI);
        let outer = ring(g, v, 0, theta);
        return Ok(inner * (1.0 - w) + outer * w);
    }
    let i0 = (s.floor() as usize).min(nr - 2);
    let w = s - i0 as f64;
    Ok(ring(g, v, i0, theta) * (1.0 - w) + ring(g, v, i0 + 1, theta) * w)
}

/// Piecewise-cubic convolution interpolation (Keys, `a = −½`).
///
/// Continuously differentiable across cells and third-order accurate, so
/// differences of samples along a path stay second order. On the disc the
/// radial stencil crosses the pole through the antipodal rings and uses a
/// one-sided cubic next to the wall.
pub fn interp_cubic(s: &ScalarField, x: f64, y: f64) -> Result<f64> {
    if !(x.is_finite() && y.is_finite()) {
        return Err(Error::OutOfDomain { x, y });
    }
    let v = s.values();
    match s.grid() {
        Grid::Torus(g) => {
            let n = g.n();
            let fx = x.rem_euclid(1.0) * n as f64;
            let fy = y.rem_euclid(1.0) * n as f64;
            let (i0, j0) = (fx.floor() as isize, fy.floor() as isize);
            let (wx, wy) = (keys(fx - fx.floor()), keys(fy - fy.floor()));
            let mut acc = 0.0;
            for (b, cy) in wy.iter().enumerate() {
                let j = g.wrap(j0 - 1 + b as isize);
                let mut row = 0.0;
                for (a, cx) in wx.iter().enumerate() {
                    row += cx * v[g.idx(g.wrap(i0 - 1 + a as isize), j)];
                }
                acc += cy * row;
            }
            Ok(acc)
        }
        Grid::Disc(g) => {
            let r = x.hypot(y);
            if r > 1.0 + 1e-12 {
                return Err(Error::OutOfDomain { x, y });
            }
            let theta = y.atan2(x);
            let nr = g.n_r() as isize;
            let s = r / g.dr() - 0.5;
            let i0 = s.floor() as isize;
            let (start, w) = if i0 + 2 < nr {
                (i0 - 1, keys(s - i0 as f64))
            } else {
                (nr - 4, lagrange4(s - (nr - 4) as f64))
            };
            let mut acc = 0.0;
            for (a, c) in w.iter().enumerate() {
                let m = start + a as isize;
                acc += c * if m < 0 {
                    ring_cubic(g, v, (-m - 1) as usize, theta + PI)
                } else {
                    ring_cubic(g, v, m as usize, theta)
                };
            }
            Ok(acc)
        }
    }
}

fn ring_cubic(g: &GridDisc, v: &[f64], i: usize, theta: f64) -> f64 {
    let t = theta.rem_euclid(2.0 * PI) / g.dth();
    let j0 = t.floor() as isize;
    keys(t - t.floor())
        .iter()
        .enumerate()
        .map(|(a, c)| c * v[g.idx(i, g.wrap(j0 - 1 + a as isize))])
        .sum()
}

/// Weights of nodes `−1, 0, 1, 2` at fraction `w ∈ [0, 1)`.
fn keys(w: f64) -> [f64; 4] {
    let (w2, w3) = (w * w, w * w * w);
    [
        -0.5 * w3 + w2 - 0.5 * w,
        1.5 * w3 - 2.5 * w2 + 1.0,
        -1.5 * w3 + 2.0 * w2 + 0.5 * w,
        0.5 * w3 - 0.5 * w2,
    ]
}

/// Lagrange weights of nodes `0, 1, 2, 3` at `s`.
fn lagrange4(s: f64) -> [f64; 4] {
    [
        -(s - 1.0) * (s - 2.0) * (s - 3.0) / 6.0,
        s * (s - 2.0) * (s - 3.0) / 2.0,
        -s * (s - 1.0) * (s - 3.0) / 2.0,
        s * (s - 1.0) * (s - 2.0) / 6.0,
    ]
}
