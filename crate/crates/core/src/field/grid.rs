use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Uniform periodic grid on `[0,1)²` with `n` nodes per axis at `x_i = i·h`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct GridTorus {
    n: usize,
}

impl GridTorus {
    pub const MIN_N: usize = 8;

    pub fn new(n: usize) -> Result<Self> {
        if n < Self::MIN_N {
            return Err(Error::InvalidGrid(format!(
                "torus needs at least {} cells per axis, got {n}",
                Self::MIN_N
            )));
        }
        Ok(Self { n })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn h(&self) -> f64 {
        1.0 / self.n as f64
    }

    pub fn len(&self) -> usize {
        self.n * self.n
    }

    /// Row-major index, `x` fastest.
    #[inline]
    pub fn idx(&self, i: usize, j: usize) -> usize {
        j * self.n + i
    }

    #[inline]
    pub fn wrap(&self, i: isize) -> usize {
        i.rem_euclid(self.n as isize) as usize
    }

    pub fn node(&self, i: usize, j: usize) -> (f64, f64) {
        (i as f64 * self.h(), j as f64 * self.h())
    }
}

/// Cell-centred polar grid on the unit disc.
///
/// Radial centres sit at `r_i = (i+½)Δr`, so no node lands on the pole;
/// angular nodes at `θ_j = jΔθ`. The angular count must be even so every
/// cell has an antipodal partner across the pole.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct GridDisc {
    n_r: usize,
    n_th: usize,
}

impl GridDisc {
    pub fn new(n_r: usize, n_th: usize) -> Result<Self> {
        if n_r < 4 {
            return Err(Error::InvalidGrid(format!(
                "disc needs at least 4 radial cells, got {n_r}"
            )));
        }
        if n_th < 8 || n_th % 2 != 0 {
            return Err(Error::InvalidGrid(format!(
                "disc needs an even angular count >= 8, got {n_th}"
            )));
        }
        Ok(Self { n_r, n_th })
    }

    pub fn n_r(&self) -> usize {
        self.n_r
    }

    pub fn n_th(&self) -> usize {
        self.n_th
    }

    pub fn dr(&self) -> f64 {
        1.0 / self.n_r as f64
    }

    pub fn dth(&self) -> f64 {
        2.0 * PI / self.n_th as f64
    }

    pub fn len(&self) -> usize {
        self.n_r * self.n_th
    }

    /// Angle-fastest index within each ring.
    #[inline]
    pub fn idx(&self, i: usize, j: usize) -> usize {
        i * self.n_th + j
    }

    #[inline]
    pub fn wrap(&self, j: isize) -> usize {
        j.rem_euclid(self.n_th as isize) as usize
    }

    /// Angular index of the cell diametrically opposite across the pole.
    #[inline]
    pub fn antipode(&self, j: usize) -> usize {
        (j + self.n_th / 2) % self.n_th
    }

    pub fn r(&self, i: usize) -> f64 {
        (i as f64 + 0.5) * self.dr()
    }

    /// Radius of the face between ring `i` and ring `i+1`.
    pub fn r_face(&self, i: usize) -> f64 {
        (i as f64 + 1.0) * self.dr()
    }

    pub fn theta(&self, j: usize) -> f64 {
        j as f64 * self.dth()
    }

    pub fn node(&self, i: usize, j: usize) -> (f64, f64) {
        let (r, t) = (self.r(i), self.theta(j));
        (r * t.cos(), r * t.sin())
    }

    /// Exact area of cell `(i, ·)`: `r_i Δr Δθ`.
    pub fn cell_area(&self, i: usize) -> f64 {
        self.r(i) * self.dr() * self.dth()
    }
}

/// Either supported grid.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Grid {
    Torus(GridTorus),
    Disc(GridDisc),
}

impl Grid {
    pub fn torus(n: usize) -> Result<Self> {
        Ok(Grid::Torus(GridTorus::new(n)?))
    }

    pub fn disc(n_r: usize, n_th: usize) -> Result<Self> {
        Ok(Grid::Disc(GridDisc::new(n_r, n_th)?))
    }

    pub fn len(&self) -> usize {
        match self {
            Grid::Torus(g) => g.len(),
            Grid::Disc(g) => g.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Physical coordinates of node `k` in flat storage order.
    pub fn point(&self, k: usize) -> (f64, f64) {
        match self {
            Grid::Torus(g) => g.node(k % g.n(), k / g.n()),
            Grid::Disc(g) => g.node(k / g.n_th(), k % g.n_th()),
        }
    }

    pub fn points(&self) -> Vec<(f64, f64)> {
        (0..self.len()).map(|k| self.point(k)).collect()
    }

    /// Quadrature weight of node `k`.
    pub fn weight(&self, k: usize) -> f64 {
        match self {
            Grid::Torus(g) => g.h() * g.h(),
            Grid::Disc(g) => g.cell_area(k / g.n_th()),
        }
    }

    pub fn weights(&self) -> Vec<f64> {
        (0..self.len()).map(|k| self.weight(k)).collect()
    }

    /// Smallest grid spacing used for time-step control.
    ///
    /// On the disc this is `Δr`: the polar filter applied by the integrator
    /// removes angular modes finer than `Δr` near the pole.
    pub fn spacing(&self) -> f64 {
        match self {
            Grid::Torus(g) => g.h(),
            Grid::Disc(g) => g.dr(),
        }
    }

    pub fn area(&self) -> f64 {
        match self {
            Grid::Torus(_) => 1.0,
            Grid::Disc(_) => PI,
        }
    }

    pub fn kind_name(&self) -> &'static str {
        match self {
            Grid::Torus(_) => "torus",
            Grid::Disc(_) => "disc",
        }
    }

    pub fn dims(&self) -> Vec<usize> {
        match self {
            Grid::Torus(g) => vec![g.n(), g.n()],
            Grid::Disc(g) => vec![g.n_r(), g.n_th()],
        }
    }
}

/// Trigonometric tables for a disc grid.
#[derive(Debug, Clone)]
pub struct DiscGeometry {
    pub grid: GridDisc,
    pub cos: Vec<f64>,
    pub sin: Vec<f64>,
    /// `cos`/`sin` at the angular faces `θ_{j+½}`.
    pub cos_face: Vec<f64>,
    pub sin_face: Vec<f64>,
    pub r: Vec<f64>,
}

impl DiscGeometry {
    pub fn new(grid: GridDisc) -> Self {
        let dth = grid.dth();
        let cos = (0..grid.n_th()).map(|j| grid.theta(j).cos()).collect();
        let sin = (0..grid.n_th()).map(|j| grid.theta(j).sin()).collect();
        let cos_face = (0..grid.n_th())
            .map(|j| (grid.theta(j) + 0.5 * dth).cos())
            .collect();
        let sin_face = (0..grid.n_th())
            .map(|j| (grid.theta(j) + 0.5 * dth).sin())
            .collect();
        let r = (0..grid.n_r()).map(|i| grid.r(i)).collect();
        Self {
            grid,
            cos,
            sin,
            cos_face,
            sin_face,
            r,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_small_grids() {
        assert!(GridTorus::new(4).is_err());
        assert!(GridDisc::new(2, 16).is_err());
        assert!(GridDisc::new(8, 15).is_err());
    }

    #[test]
    fn disc_areas_sum_to_pi() {
        let g = Grid::disc(13, 22).unwrap();
        let total: f64 = g.weights().iter().sum();
        assert!((total - PI).abs() < 1e-13);
    }

    #[test]
    fn antipode_is_involution() {
        let g = GridDisc::new(4, 10).unwrap();
        for j in 0..10 {
            assert_eq!(g.antipode(g.antipode(j)), j);
            let (x0, y0) = g.node(0, j);
            let (x1, y1) = g.node(0, g.antipode(j));
            assert!((x0 + x1).abs() < 1e-15 && (y0 + y1).abs() < 1e-15);
        }
    }
}
