//! Equilibrium density `ρ_s = ((γ−1)/γ·(f + C₀))^{1/(γ−1)}` for a potential
//! force at prescribed total mass.

use serde::Serialize;

use crate::field::{grad, ScalarField};
use crate::physics::pow;
use crate::{Error, Result};

/// Default relative mass tolerance of [`solve_steady`].
pub const DEFAULT_TOL: f64 = 1e-12;
const MAX_NEWTON: usize = 50;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SteadyState {
    #[serde(skip)]
    rho_s: ScalarField,
    c0: f64,
    total_mass: f64,
}

impl SteadyState {
    pub fn rho_s(&self) -> &ScalarField {
        &self.rho_s
    }

    pub fn c0(&self) -> f64 {
        self.c0
    }

    pub fn total_mass(&self) -> f64 {
        self.total_mass
    }

    /// `P_s = ρ_s^γ`.
    pub fn pressure(&self, gamma: f64) -> ScalarField {
        self.rho_s.map(|r| pow(r, gamma))
    }
}

fn check_gamma(gamma: f64) -> Result<()> {
    if gamma.is_finite() && gamma > 1.0 {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!("gamma must be > 1, got {gamma}")))
    }
}

/// Closed-form density for a given constant; `None` where `f + C₀ ≤ 0`.
pub fn density_for(f: &ScalarField, gamma: f64, c0: f64) -> Option<ScalarField> {
    let a = (gamma - 1.0) / gamma;
    let e = 1.0 / (gamma - 1.0);
    if f.values().iter().any(|&v| !(v + c0 > 0.0)) {
        return None;
    }
    Some(f.map(|v| pow(a * (v + c0), e)))
}

/// Total mass of the closed-form density as a function of `C₀`.
pub fn mass_map(f: &ScalarField, gamma: f64, c0: f64) -> Result<f64> {
    check_gamma(gamma)?;
    let lo = -f.min();
    if c0 < lo {
        return Err(Error::InvalidParameter(format!(
            "C0 = {c0} below the admissible bound {lo}"
        )));
    }
    let a = (gamma - 1.0) / gamma;
    let e = 1.0 / (gamma - 1.0);
    Ok(f.map(|v| pow((a * (v + c0)).max(0.0), e)).integral())
}

/// Mass at the lower end of the admissible range of `C₀`.
pub fn admissibility_threshold(f: &ScalarField, gamma: f64) -> Result<f64> {
    mass_map(f, gamma, -f.min())
}

/// Strict form: the mass must exceed the threshold.
pub fn admissible(f: &ScalarField, total_mass: f64, gamma: f64) -> Result<bool> {
    Ok(total_mass > admissibility_threshold(f, gamma)?)
}

pub fn solve_steady(f: &ScalarField, total_mass: f64, gamma: f64, tol: f64) -> Result<SteadyState> {
    check_gamma(gamma)?;
    if !(tol > 0.0 && tol.is_finite()) {
        return Err(Error::InvalidParameter(format!("tol must be > 0, got {tol}")));
    }
    if !(total_mass.is_finite() && total_mass > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "total mass must be > 0, got {total_mass}"
        )));
    }
    let threshold = admissibility_threshold(f, gamma)?;
    if total_mass <= threshold {
        return Err(Error::Inadmissible {
            mass: total_mass,
            threshold,
        });
    }
    let target = total_mass;
    let residual = |c: f64| mass_map(f, gamma, c).map(|m| m - target);

    let mut lo = -f.min();
    let mut step = 1.0_f64.max(lo.abs());
    let mut hi = lo + step;
    let mut doublings = 0;
    while residual(hi)? < 0.0 {
        lo = hi;
        step *= 2.0;
        hi += step;
        doublings += 1;
        if doublings > 200 || !hi.is_finite() {
            return Err(Error::Bracket(format!("no upper bound for C0 (last {hi})")));
        }
    }

    let scale = 1.0 + lo.abs().max(hi.abs());
    while hi - lo > 1e-6 * scale {
        let mid = 0.5 * (lo + hi);
        if residual(mid)? < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }

    let derivative = |c: f64| {
        let a = (gamma - 1.0) / gamma;
        let e = (2.0 - gamma) / (gamma - 1.0);
        f.map(|v| pow(a * (v + c), e) / gamma).integral()
    };
    let mut c = 0.5 * (lo + hi);
    for _ in 0..MAX_NEWTON {
        let r = residual(c)?;
        if r == 0.0 {
            break;
        }
        if r < 0.0 {
            lo = c;
        } else {
            hi = c;
        }
        let d = derivative(c);
        let next = c - r / d;
        let newton = next > lo && next < hi && d.is_finite() && d > 0.0;
        // polish past the tolerance until Newton stalls at rounding level
        if newton && (next - c).abs() <= 4.0 * f64::EPSILON * c.abs().max(1.0) {
            c = next;
            break;
        }
        c = if newton { next } else { 0.5 * (lo + hi) };
        if hi - lo <= f64::EPSILON * scale {
            break;
        }
    }
    let r = residual(c)?;
    if r.abs() > tol * target {
        return Err(Error::Bracket(format!(
            "mass residual {r:e} above tolerance after refinement"
        )));
    }
    let rho_s = density_for(f, gamma, c)
        .ok_or_else(|| Error::Bracket("root left the admissible range".into()))?;
    Ok(SteadyState {
        rho_s,
        c0: c,
        total_mass,
    })
}

/// `‖∇ρ_s^γ − ρ_s∇f‖_∞`.
pub fn steady_residual(ss: &SteadyState, f: &ScalarField, gamma: f64) -> Result<f64> {
    let gp = grad(&ss.pressure(gamma));
    let gf = grad(f);
    let rs = ss.rho_s.values();
    if ss.rho_s.grid() != f.grid() {
        return Err(Error::GridMismatch);
    }
    Ok((0..rs.len())
        .map(|k| {
            let ex = gp.x()[k] - rs[k] * gf.x()[k];
            let ey = gp.y()[k] - rs[k] * gf.y()[k];
            ex.abs().max(ey.abs())
        })
        .fold(0.0, f64::max))
}
