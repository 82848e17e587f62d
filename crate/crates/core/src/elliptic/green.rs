//! Neumann Green function of the unit disc and its pull-back by disc
//! automorphisms.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::{Error, Result};

const EDGE: f64 = 1e-12;

/// Analytic self-map of the closed unit disc.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum ConformalMap {
    Identity,
    /// `z ↦ e^{iα}(z − a)/(1 − āz)`.
    Mobius { a: [f64; 2], phase: f64 },
}

impl ConformalMap {
    pub fn mobius(a: [f64; 2], phase: f64) -> Result<Self> {
        let r = a[0].hypot(a[1]);
        if !(r < 1.0) || !phase.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "Möbius centre must lie inside the disc, got |a| = {r}"
            )));
        }
        Ok(ConformalMap::Mobius { a, phase })
    }

    pub fn forward(&self, z: Complex64) -> Complex64 {
        match *self {
            ConformalMap::Identity => z,
            ConformalMap::Mobius { a, phase } => {
                let a = Complex64::new(a[0], a[1]);
                Complex64::from_polar(1.0, phase) * (z - a) / (1.0 - a.conj() * z)
            }
        }
    }

    pub fn inverse(&self, w: Complex64) -> Complex64 {
        match *self {
            ConformalMap::Identity => w,
            ConformalMap::Mobius { a, phase } => {
                let a = Complex64::new(a[0], a[1]);
                let v = w * Complex64::from_polar(1.0, -phase);
                (v + a) / (1.0 + a.conj() * v)
            }
        }
    }

    /// Complex derivative `φ'(z)`.
    pub fn derivative(&self, z: Complex64) -> Complex64 {
        match *self {
            ConformalMap::Identity => Complex64::new(1.0, 0.0),
            ConformalMap::Mobius { a, phase } => {
                let a = Complex64::new(a[0], a[1]);
                let d = 1.0 - a.conj() * z;
                Complex64::from_polar(1.0, phase) * (1.0 - a.norm_sqr()) / (d * d)
            }
        }
    }

    fn apply(&self, p: (f64, f64)) -> (f64, f64) {
        let w = self.forward(Complex64::new(p.0, p.1));
        (w.re, w.im)
    }
}

fn check_point(p: (f64, f64)) -> Result<()> {
    if !(p.0.is_finite() && p.1.is_finite()) || p.0.hypot(p.1) > 1.0 + EDGE {
        return Err(Error::OutOfDomain { x: p.0, y: p.1 });
    }
    Ok(())
}

/// `N(x,y) = −(1/2π)(log|x−y| + log| |x|y − x/|x| |)`.
///
/// The second modulus equals `√(|x|²|y|² − 2x·y + 1)`, which is used
/// directly; it is symmetric and tends to 1 as `x → 0`.
pub fn green_disc(x: (f64, f64), y: (f64, f64)) -> Result<f64> {
    check_point(x)?;
    check_point(y)?;
    let (dx, dy) = (x.0 - y.0, x.1 - y.1);
    let d2 = dx * dx + dy * dy;
    if d2 == 0.0 {
        return Err(Error::Singular(format!(
            "Green function evaluated at coincident points ({}, {})",
            x.0, x.1
        )));
    }
    let s = reflected_sq(x, y);
    Ok(-(d2.ln() + s.ln()) / (4.0 * PI))
}

fn reflected_sq(x: (f64, f64), y: (f64, f64)) -> f64 {
    let xx = x.0 * x.0 + x.1 * x.1;
    let yy = y.0 * y.0 + y.1 * y.1;
    // |x|²|y|² − 2x·y + 1 = |x − y|² + (1 − |x|²)(1 − |y|²)
    let (dx, dy) = (x.0 - y.0, x.1 - y.1);
    dx * dx + dy * dy + (1.0 - xx) * (1.0 - yy)
}

/// `∇_y N(x, y)`.
pub fn green_grad_y(x: (f64, f64), y: (f64, f64)) -> Result<(f64, f64)> {
    check_point(x)?;
    check_point(y)?;
    let (dx, dy) = (y.0 - x.0, y.1 - x.1);
    let d2 = dx * dx + dy * dy;
    if d2 == 0.0 {
        return Err(Error::Singular("gradient at coincident points".into()));
    }
    let xx = x.0 * x.0 + x.1 * x.1;
    let s = reflected_sq(x, y);
    let c = -1.0 / (2.0 * PI);
    Ok((
        c * (dx / d2 + (xx * y.0 - x.0) / s),
        c * (dy / d2 + (xx * y.1 - x.1) / s),
    ))
}

/// `Ñ(x,y) = N(φ(x), φ(y))`.
pub fn pullback_green(map: &ConformalMap, x: (f64, f64), y: (f64, f64)) -> Result<f64> {
    check_point(x)?;
    check_point(y)?;
    green_disc(map.apply(x), map.apply(y))
}

/// `∇_y Ñ(x,y) = \overline{φ'(y)}·∇N(φ(x), φ(y))` in complex notation.
pub fn pullback_green_grad_y(
    map: &ConformalMap,
    x: (f64, f64),
    y: (f64, f64),
) -> Result<(f64, f64)> {
    check_point(x)?;
    check_point(y)?;
    let g = green_grad_y(map.apply(x), map.apply(y))?;
    let d = map.derivative(Complex64::new(y.0, y.1)).conj() * Complex64::new(g.0, g.1);
    Ok((d.re, d.im))
}
