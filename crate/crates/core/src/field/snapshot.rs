//! Field snapshots: raw little-endian `f64` data plus a JSON sidecar.
//!
//! Storage order is the grid's flat order (torus: `x` fastest within each
//! `y` row; disc: `θ` fastest within each ring). Vector fields store all
//! `x` components followed by all `y` components.

use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use super::grid::Grid;
use super::values::{ScalarField, VectorField};
use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SnapshotHeader {
    pub grid: String,
    pub dims: Vec<usize>,
    pub time: f64,
    pub name: String,
    pub components: usize,
}

fn paths(base: &Path) -> (PathBuf, PathBuf) {
    (base.with_extension("bin"), base.with_extension("json"))
}

fn write_raw(base: &Path, header: &SnapshotHeader, data: &[f64]) -> Result<PathBuf> {
    let (bin, json) = paths(base);
    if let Some(dir) = bin.parent() {
        fs::create_dir_all(dir)?;
    }
    let mut bytes = Vec::with_capacity(data.len() * 8);
    for v in data {
        bytes.extend_from_slice(&v.to_le_bytes());
    }
    fs::write(&bin, bytes)?;
    fs::write(&json, serde_json::to_string_pretty(header)?)?;
    Ok(bin)
}

fn header(grid: &Grid, time: f64, name: &str, components: usize) -> SnapshotHeader {
    SnapshotHeader {
        grid: grid.kind_name().to_string(),
        dims: grid.dims(),
        time,
        name: name.to_string(),
        components,
    }
}

pub fn write_scalar(base: &Path, s: &ScalarField, time: f64, name: &str) -> Result<PathBuf> {
    write_raw(base, &header(s.grid(), time, name, 1), s.values())
}

pub fn write_vector(base: &Path, v: &VectorField, time: f64, name: &str) -> Result<PathBuf> {
    let mut data = v.x().to_vec();
    data.extend_from_slice(v.y());
    write_raw(base, &header(v.grid(), time, name, 2), &data)
}

fn read_raw(base: &Path) -> Result<(SnapshotHeader, Grid, Vec<f64>)> {
    let (bin, json) = paths(base);
    let header: SnapshotHeader = serde_json::from_str(&fs::read_to_string(&json)?)?;
    let grid = match (header.grid.as_str(), header.dims.as_slice()) {
        ("torus", [n, m]) if n == m => Grid::torus(*n)?,
        ("disc", [nr, nth]) => Grid::disc(*nr, *nth)?,
        _ => {
            return Err(Error::InvalidGrid(format!(
                "unsupported snapshot grid {} {:?}",
                header.grid, header.dims
            )))
        }
    };
    let bytes = fs::read(&bin)?;
    if bytes.len() != 8 * grid.len() * header.components {
        return Err(Error::InvalidGrid(format!(
            "snapshot {} has {} bytes, expected {}",
            bin.display(),
            bytes.len(),
            8 * grid.len() * header.components
        )));
    }
    let data = bytes
        .chunks_exact(8)
        .map(|c| f64::from_le_bytes(c.try_into().expect("chunk of 8")))
        .collect();
    Ok((header, grid, data))
}

pub fn read_scalar(base: &Path) -> Result<(SnapshotHeader, ScalarField)> {
    let (h, grid, data) = read_raw(base)?;
    if h.components != 1 {
        return Err(Error::InvalidGrid("expected a scalar snapshot".into()));
    }
    Ok((h, ScalarField::new(grid, data)?))
}

pub fn read_vector(base: &Path) -> Result<(SnapshotHeader, VectorField)> {
    let (h, grid, mut data) = read_raw(base)?;
    if h.components != 2 {
        return Err(Error::InvalidGrid("expected a vector snapshot".into()));
    }
    let y = data.split_off(grid.len());
    Ok((h, VectorField::new(grid, data, y)?))
}
