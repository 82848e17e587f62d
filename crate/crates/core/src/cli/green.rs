//! Refinement study of the Green-function representation of `G` on a
//! manufactured disc state.

use serde::{Deserialize, Serialize};

use crate::elliptic::{ConformalMap, Representation};
use crate::field::{interp_cubic, Grid, ScalarField, VectorField};
use crate::physics::{flux_g, FluidParams, State};
use crate::steady::{solve_steady, DEFAULT_TOL};
use crate::Result;

pub const STUDY_LEVELS: [usize; 3] = [32, 64, 128];
pub const SAMPLE_POINTS: usize = 20;
/// Sample points stay inside this radius.
const SAMPLE_RADIUS: f64 = 0.7;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GreenLevel {
    pub n_r: usize,
    pub n_th: usize,
    pub max_error: f64,
    pub g_max: f64,
    /// `max_error / g_max`
    pub relative_error: f64,
}

/// Smooth positive density and a tangential velocity with both solenoidal
/// and potential parts.
pub fn manufactured_state(grid: Grid) -> Result<State> {
    let rho = ScalarField::from_fn(grid, |x, y| 1.0 + 0.2 * (1.5 * x).sin() * (y + 0.3).cos())?;
    let u = VectorField::from_fn(grid, manufactured_velocity)?;
    State::new(rho, u, 0.0)
}

/// `0.3∇⊥((1−r²)(1+x)) + 0.2∇((1−r²)²y)`
fn manufactured_velocity(x: f64, y: f64) -> (f64, f64) {
    let q = 1.0 - x * x - y * y;
    let (sx, sy) = (q - 2.0 * x * (1.0 + x), -2.0 * y * (1.0 + x));
    let (px, py) = (-4.0 * q * x * y, q * q - 4.0 * q * y * y);
    (0.3 * sy + 0.2 * px, -0.3 * sx + 0.2 * py)
}

/// Golden-angle spiral of interior points.
pub fn sample_points(count: usize) -> Vec<(f64, f64)> {
    let golden = std::f64::consts::PI * (3.0 - 5f64.sqrt());
    (0..count)
        .map(|k| {
            let r = SAMPLE_RADIUS * ((k as f64 + 0.5) / count as f64).sqrt();
            let a = k as f64 * golden;
            (r * a.cos(), r * a.sin())
        })
        .collect()
}

/// Compares the representation with the directly computed flux at the
/// sample points, for `n_θ = 2n_r` at each level.
pub fn green_study(
    levels: &[usize],
    params_on: impl Fn(Grid) -> Result<FluidParams>,
    map: &ConformalMap,
) -> Result<Vec<GreenLevel>> {
    let points = sample_points(SAMPLE_POINTS);
    levels
        .iter()
        .map(|&n_r| {
            let grid = Grid::disc(n_r, 2 * n_r)?;
            let params = params_on(grid)?;
            let state = manufactured_state(grid)?;
            let ss = solve_steady(params.force(), state.rho().integral(), params.gamma(), DEFAULT_TOL)?;
            let g = flux_g(&state, &params, ss.rho_s())?;
            let rep = Representation::new(&state, &params, ss.rho_s())?;
            let mut max_error: f64 = 0.0;
            for &x in &points {
                let err = rep.eval(x, map)? - interp_cubic(&g, x.0, x.1)?;
                max_error = max_error.max(err.abs());
            }
            let g_max = g.max_abs();
            Ok(GreenLevel {
                n_r,
                n_th: 2 * n_r,
                max_error,
                g_max,
                relative_error: max_error / g_max,
            })
        })
        .collect()
}

/// `log₂` of successive error ratios.
pub fn observed_orders(levels: &[GreenLevel]) -> Vec<f64> {
    levels
        .windows(2)
        .map(|w| (w[0].max_error / w[1].max_error).log2())
        .collect()
}
