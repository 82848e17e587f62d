//! Pointwise representation of the effective viscous flux through the
//! pulled-back Neumann Green function.
//!
//! With `H = ρu̇ − (ρ − ρ_s)∇f = ∇G + μ∇⊥ω` and `Δ_y Ñ = −δ_x`, Green's second
//! identity gives
//!
//! `G(x) = ∫ ∇_yÑ·H dy − ∮ ∂_nÑ G dS + μ∮ Ñ (n⊥·∇)ω dS`,
//!
//! where the Neumann data follow from `∂_n G = n·H + μ(n⊥·∇)ω`.

use num_complex::Complex64;
use rustfft::FftPlanner;

use super::green::{pullback_green, pullback_green_grad_y, ConformalMap};
use crate::field::{grad, interp_vector, Grid, GridDisc, ScalarField, VectorField};
use crate::physics::{flux_g, material_accel, rhs, wall_tangential, FluidParams, State};
use crate::{Error, Result};

/// `H = ρu̇ − (ρ − ρ_s)∇f`.
pub fn h_field(state: &State, params: &FluidParams, rho_s: &ScalarField) -> Result<VectorField> {
    let tend = rhs(state, params)?;
    let acc = material_accel(state, &tend)?;
    let gf = grad(params.force());
    let rho = state.rho().values();
    let rs = rho_s.values();
    if rho_s.grid() != state.grid() {
        return Err(Error::GridMismatch);
    }
    let n = rho.len();
    VectorField::new(
        *state.grid(),
        (0..n)
            .map(|k| rho[k] * acc.x()[k] - (rho[k] - rs[k]) * gf.x()[k])
            .collect(),
        (0..n)
            .map(|k| rho[k] * acc.y()[k] - (rho[k] - rs[k]) * gf.y()[k])
            .collect(),
    )
}

/// Precomputed volume and boundary data for repeated evaluations.
#[derive(Debug, Clone)]
pub struct Representation {
    grid: GridDisc,
    h: VectorField,
    g_wall: Vec<f64>,
    tangential_omega: Vec<f64>,
    mu: f64,
}

impl Representation {
    pub fn new(state: &State, params: &FluidParams, rho_s: &ScalarField) -> Result<Self> {
        let Grid::Disc(g) = *state.grid() else {
            return Err(Error::InvalidGrid("representation needs a disc".into()));
        };
        let h = h_field(state, params, rho_s)?;
        let gfield = flux_g(state, params, rho_s)?;
        let (a, b) = (g.n_r() - 1, g.n_r() - 2);
        let g_wall = (0..g.n_th())
            .map(|j| 1.5 * gfield.values()[g.idx(a, j)] - 0.5 * gfield.values()[g.idx(b, j)])
            .collect();
        // wall vorticity from the slip condition ω = K u_θ
        let ut = wall_tangential(state, params)?;
        let omega: Vec<f64> = ut
            .iter()
            .zip(params.friction())
            .map(|(u, k)| k * u)
            .collect();
        Self::from_parts(h, g_wall, &omega, params.mu())
    }

    /// `omega_wall` is the boundary vorticity at the angular nodes.
    pub fn from_parts(h: VectorField, g_wall: Vec<f64>, omega_wall: &[f64], mu: f64) -> Result<Self> {
        let Grid::Disc(g) = *h.grid() else {
            return Err(Error::InvalidGrid("representation needs a disc".into()));
        };
        if g_wall.len() != g.n_th() || omega_wall.len() != g.n_th() {
            return Err(Error::InvalidParameter("wall traces need one value per angle".into()));
        }
        // (n⊥·∇)ω = −∂_θ ω on the unit circle
        let tangential_omega = angular_derivative(omega_wall)
            .into_iter()
            .map(|v| -v)
            .collect();
        Ok(Self {
            grid: g,
            h,
            g_wall,
            tangential_omega,
            mu,
        })
    }

    pub fn eval(&self, x: (f64, f64), map: &ConformalMap) -> Result<f64> {
        let g = self.grid;
        let rx = x.0.hypot(x.1);
        if 1.0 - rx < 2.0 * g.dr() {
            return Err(Error::Geometry(format!(
                "point at radius {rx} is within two cells of the wall"
            )));
        }
        let hx = interp_vector(&self.h, x.0, x.1)?;
        let grid = Grid::Disc(g);
        let mut terms = Vec::with_capacity(g.len());
        for k in 0..g.len() {
            let y = grid.point(k);
            if (y.0 - x.0).hypot(y.1 - x.1) < 1e-14 {
                continue;
            }
            let d = pullback_green_grad_y(map, x, y)?;
            let dh = (self.h.x()[k] - hx.0, self.h.y()[k] - hx.1);
            terms.push((d.0 * dh.0 + d.1 * dh.1) * grid.weight(k));
        }
        let volume = crate::field::pairwise_sum(&terms);

        let dth = g.dth();
        let (mut mean_part, mut wall_g, mut wall_w) = (0.0, 0.0, 0.0);
        for j in 0..g.n_th() {
            let t = g.theta(j);
            let y = (t.cos(), t.sin());
            let n = pullback_green(map, x, y)?;
            let d = pullback_green_grad_y(map, x, y)?;
            mean_part += n * (hx.0 * y.0 + hx.1 * y.1);
            wall_g += (d.0 * y.0 + d.1 * y.1) * self.g_wall[j];
            wall_w += n * self.tangential_omega[j];
        }
        Ok(volume + (mean_part - wall_g + self.mu * wall_w) * dth)
    }
}

pub fn g_representation(
    state: &State,
    params: &FluidParams,
    rho_s: &ScalarField,
    x: (f64, f64),
    map: &ConformalMap,
) -> Result<f64> {
    Representation::new(state, params, rho_s)?.eval(x, map)
}

/// Spectral `∂_θ` of equispaced periodic samples.
pub(crate) fn angular_derivative(v: &[f64]) -> Vec<f64> {
    let n = v.len();
    let mut planner = FftPlanner::new();
    let mut d: Vec<Complex64> = v.iter().map(|&a| Complex64::new(a, 0.0)).collect();
    planner.plan_fft_forward(n).process(&mut d);
    for (k, c) in d.iter_mut().enumerate() {
        let kk = if 2 * k == n {
            0.0
        } else if k < n / 2 + 1 {
            k as f64
        } else {
            k as f64 - n as f64
        };
        *c *= Complex64::new(0.0, kk);
    }
    planner.plan_fft_inverse(n).process(&mut d);
    d.into_iter().map(|c| c.re / n as f64).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn spectral_angle_derivative() {
        let n = 32;
        let v: Vec<f64> = (0..n)
            .map(|j| (3.0 * j as f64 * 2.0 * std::f64::consts::PI / n as f64).sin())
            .collect();
        let d = angular_derivative(&v);
        for j in 0..n {
            let t = j as f64 * 2.0 * std::f64::consts::PI / n as f64;
            assert!((d[j] - 3.0 * (3.0 * t).cos()).abs() < 1e-12);
        }
    }

    #[test]
    fn rest_state_represents_zero() {
        let g = Grid::disc(16, 32).unwrap();
        let f = ScalarField::from_fn(g, |x, _| 0.1 * x).unwrap();
        let params = FluidParams::new(1.0, 2.0, 2.0, f.clone())
            .unwrap()
            .with_uniform_friction(1.0)
            .unwrap();
        let ss = crate::steady::solve_steady(&f, std::f64::consts::PI, 2.0, 1e-12).unwrap();
        let state = State::new(ss.rho_s().clone(), VectorField::zeros(g), 0.0).unwrap();
        let v = g_representation(&state, &params, ss.rho_s(), (0.2, -0.1), &ConformalMap::Identity)
            .unwrap();
        assert!(v.abs() < 1e-10, "{v}");
        assert!(matches!(
            g_representation(&state, &params, ss.rho_s(), (0.95, 0.0), &ConformalMap::Identity),
            Err(Error::Geometry(_))
        ));
    }

    #[test]
    fn harmonic_flux_is_reproduced() {
        // H = ∇G with G = x² − y² (harmonic) and no vorticity: the formula
        // must return G(x) up to quadrature error, for any automorphism
        let g = Grid::disc(48, 96).unwrap();
        let gd = GridDisc::new(48, 96).unwrap();
        let h = VectorField::from_fn(g, |x, y| (2.0 * x, -2.0 * y)).unwrap();
        let wall: Vec<f64> = (0..96).map(|j| (2.0 * gd.theta(j)).cos()).collect();
        let rep = Representation::from_parts(h, wall, &vec![0.0; 96], 1.0).unwrap();
        let m = ConformalMap::mobius([0.2, 0.1], 0.4).unwrap();
        for &(x, y) in &[(0.1, 0.2), (-0.4, 0.3), (0.5, -0.5)] {
            for map in [ConformalMap::Identity, m] {
                let v = rep.eval((x, y), &map).unwrap();
                assert!((v - (x * x - y * y)).abs() < 5e-3, "{v} vs {}", x * x - y * y);
            }
        }
    }
}
