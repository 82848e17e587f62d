use super::grid::Grid;
use crate::{Error, Result};

/// Real scalar samples on a grid, one value per node.
#[derive(Debug, Clone, PartialEq)]
pub struct ScalarField {
    grid: Grid,
    values: Vec<f64>,
}

impl ScalarField {
    /// Validated constructor: length must match the grid and every value
    /// must be finite.
    pub fn new(grid: Grid, values: Vec<f64>) -> Result<Self> {
        check_values("scalar", &grid, &values)?;
        Ok(Self { grid, values })
    }

    /// Operator outputs skip the finiteness scan.
    pub(crate) fn from_raw(grid: Grid, values: Vec<f64>) -> Self {
        debug_assert_eq!(grid.len(), values.len());
        Self { grid, values }
    }

    pub fn constant(grid: Grid, c: f64) -> Self {
        Self::from_raw(grid, vec![c; grid.len()])
    }

    pub fn zeros(grid: Grid) -> Self {
        Self::constant(grid, 0.0)
    }

    /// Samples `f(x, y)` at every node.
    pub fn from_fn(grid: Grid, f: impl Fn(f64, f64) -> f64) -> Result<Self> {
        let values = (0..grid.len())
            .map(|k| {
                let (x, y) = grid.point(k);
                f(x, y)
            })
            .collect();
        Self::new(grid, values)
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    pub fn map(&self, f: impl Fn(f64) -> f64) -> Self {
        Self::from_raw(self.grid, self.values.iter().map(|&v| f(v)).collect())
    }

    pub fn zip_map(&self, other: &Self, f: impl Fn(f64, f64) -> f64) -> Result<Self> {
        same_grid(&self.grid, &other.grid)?;
        Ok(Self::from_raw(
            self.grid,
            self.values
                .iter()
                .zip(&other.values)
                .map(|(&a, &b)| f(a, b))
                .collect(),
        ))
    }

    pub fn min(&self) -> f64 {
        self.values.iter().copied().fold(f64::INFINITY, f64::min)
    }

    pub fn max(&self) -> f64 {
        self.values.iter().copied().fold(f64::NEG_INFINITY, f64::max)
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    /// Quadrature of the field over the domain.
    pub fn integral(&self) -> f64 {
        let terms: Vec<f64> = self
            .values
            .iter()
            .enumerate()
            .map(|(k, v)| v * self.grid.weight(k))
            .collect();
        pairwise_sum(&terms)
    }

    pub fn mean(&self) -> f64 {
        self.integral() / self.grid.area()
    }

    /// `‖s‖_{L^p}`; pass `f64::INFINITY` for the sup norm.
    pub fn lp_norm(&self, p: f64) -> Result<f64> {
        if p.is_nan() || p < 1.0 {
            return Err(Error::InvalidExponent(p));
        }
        if p.is_infinite() {
            return Ok(self.max_abs());
        }
        let terms: Vec<f64> = self
            .values
            .iter()
            .enumerate()
            .map(|(k, v)| v.abs().powf(p) * self.grid.weight(k))
            .collect();
        Ok(pairwise_sum(&terms).powf(1.0 / p))
    }

    /// In-place `self += a * other`.
    pub fn axpy(&mut self, a: f64, other: &Self) -> Result<()> {
        same_grid(&self.grid, &other.grid)?;
        for (s, o) in self.values.iter_mut().zip(&other.values) {
            *s += a * o;
        }
        Ok(())
    }

    #[cfg(test)]
    pub(crate) fn values_mut(&mut self) -> &mut [f64] {
        &mut self.values
    }
}

/// Two-component vector field stored as Cartesian components.
#[derive(Debug, Clone, PartialEq)]
pub struct VectorField {
    grid: Grid,
    x: Vec<f64>,
    y: Vec<f64>,
}

impl VectorField {
    pub fn new(grid: Grid, x: Vec<f64>, y: Vec<f64>) -> Result<Self> {
        check_values("vector.x", &grid, &x)?;
        check_values("vector.y", &grid, &y)?;
        Ok(Self { grid, x, y })
    }

    pub(crate) fn from_raw(grid: Grid, x: Vec<f64>, y: Vec<f64>) -> Self {
        debug_assert!(x.len() == grid.len() && y.len() == grid.len());
        Self { grid, x, y }
    }

    pub fn zeros(grid: Grid) -> Self {
        Self::from_raw(grid, vec![0.0; grid.len()], vec![0.0; grid.len()])
    }

    pub fn from_fn(grid: Grid, f: impl Fn(f64, f64) -> (f64, f64)) -> Result<Self> {
        let (mut x, mut y) = (Vec::with_capacity(grid.len()), Vec::with_capacity(grid.len()));
        for k in 0..grid.len() {
            let (px, py) = grid.point(k);
            let (a, b) = f(px, py);
            x.push(a);
            y.push(b);
        }
        Self::new(grid, x, y)
    }

    pub fn from_components(x: ScalarField, y: ScalarField) -> Result<Self> {
        same_grid(x.grid(), y.grid())?;
        Ok(Self::from_raw(x.grid, x.values, y.values))
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn x(&self) -> &[f64] {
        &self.x
    }

    pub fn y(&self) -> &[f64] {
        &self.y
    }

    pub fn component(&self, c: usize) -> ScalarField {
        match c {
            0 => ScalarField::from_raw(self.grid, self.x.clone()),
            _ => ScalarField::from_raw(self.grid, self.y.clone()),
        }
    }

    /// Pointwise Euclidean magnitude.
    pub fn magnitude(&self) -> ScalarField {
        ScalarField::from_raw(
            self.grid,
            self.x.iter().zip(&self.y).map(|(a, b)| a.hypot(*b)).collect(),
        )
    }

    pub fn dot(&self, other: &Self) -> Result<ScalarField> {
        same_grid(&self.grid, &other.grid)?;
        Ok(ScalarField::from_raw(
            self.grid,
            (0..self.grid.len())
                .map(|k| self.x[k] * other.x[k] + self.y[k] * other.y[k])
                .collect(),
        ))
    }

    /// Multiplies both components by a scalar field.
    pub fn scale(&self, s: &ScalarField) -> Result<Self> {
        same_grid(&self.grid, s.grid())?;
        let v = s.values();
        Ok(Self::from_raw(
            self.grid,
            self.x.iter().zip(v).map(|(a, b)| a * b).collect(),
            self.y.iter().zip(v).map(|(a, b)| a * b).collect(),
        ))
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        same_grid(&self.grid, &other.grid)?;
        Ok(Self::from_raw(
            self.grid,
            self.x.iter().zip(&other.x).map(|(a, b)| a - b).collect(),
            self.y.iter().zip(&other.y).map(|(a, b)| a - b).collect(),
        ))
    }

    pub fn max_abs(&self) -> f64 {
        self.x
            .iter()
            .chain(&self.y)
            .fold(0.0, |m, v| m.max(v.abs()))
    }

    pub fn integral(&self) -> (f64, f64) {
        (self.component(0).integral(), self.component(1).integral())
    }

    pub fn axpy(&mut self, a: f64, other: &Self) -> Result<()> {
        same_grid(&self.grid, &other.grid)?;
        for (s, o) in self.x.iter_mut().zip(&other.x) {
            *s += a * o;
        }
        for (s, o) in self.y.iter_mut().zip(&other.y) {
            *s += a * o;
        }
        Ok(())
    }

    pub fn into_parts(self) -> (Vec<f64>, Vec<f64>) {
        (self.x, self.y)
    }
}

pub(crate) fn same_grid(a: &Grid, b: &Grid) -> Result<()> {
    if a == b {
        Ok(())
    } else {
        Err(Error::GridMismatch)
    }
}

fn check_values(name: &str, grid: &Grid, values: &[f64]) -> Result<()> {
    if values.len() != grid.len() {
        return Err(Error::InvalidGrid(format!(
            "{name} has {} values, grid expects {}",
            values.len(),
            grid.len()
        )));
    }
    if let Some(index) = values.iter().position(|v| !v.is_finite()) {
        return Err(Error::NonFinite {
            name: name.to_string(),
            index,
        });
    }
    Ok(())
}

/// Pairwise (tree) summation; the split points depend only on the length,
/// so results are reproducible run to run.
pub fn pairwise_sum(values: &[f64]) -> f64 {
    const BLOCK: usize = 32;
    if values.len() <= BLOCK {
        values.iter().sum()
    } else {
        let mid = values.len() / 2;
        pairwise_sum(&values[..mid]) + pairwise_sum(&values[mid..])
    }
}
