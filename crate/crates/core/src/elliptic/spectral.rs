//! Fourier-space operators on the periodic torus.

use std::sync::Arc;

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

use crate::field::{Grid, GridTorus, ScalarField};
use crate::physics::State;
use crate::{Error, Result};

/// Relative size of the mean that [`poisson_periodic`] still accepts.
pub const MEAN_TOLERANCE: f64 = 1e-12;

/// Planned 2D transforms for one torus size.
pub(crate) struct Fft2 {
    n: usize,
    fwd: Arc<dyn Fft<f64>>,
    inv: Arc<dyn Fft<f64>>,
}

impl Fft2 {
    pub(crate) fn new(n: usize) -> Self {
        let mut planner = FftPlanner::new();
        Self {
            n,
            fwd: planner.plan_fft_forward(n),
            inv: planner.plan_fft_inverse(n),
        }
    }

    fn transform(&self, data: &mut [Complex64], plan: &Arc<dyn Fft<f64>>) {
        let n = self.n;
        // rows (x direction), then columns through a transpose
        plan.process(data);
        let mut t = vec![Complex64::default(); n * n];
        for j in 0..n {
            for i in 0..n {
                t[i * n + j] = data[j * n + i];
            }
        }
        plan.process(&mut t);
        for j in 0..n {
            for i in 0..n {
                data[j * n + i] = t[i * n + j];
            }
        }
    }

    pub(crate) fn forward(&self, s: &[f64]) -> Vec<Complex64> {
        let mut d: Vec<Complex64> = s.iter().map(|&v| Complex64::new(v, 0.0)).collect();
        self.transform(&mut d, &self.fwd);
        d
    }

    /// Inverse transform keeping the real part, normalised.
    pub(crate) fn inverse(&self, mut d: Vec<Complex64>) -> Vec<f64> {
        self.transform(&mut d, &self.inv);
        let scale = 1.0 / (self.n * self.n) as f64;
        d.into_iter().map(|c| c.re * scale).collect()
    }

    /// Signed wavenumber of index `k`; the Nyquist index maps to `n/2`.
    pub(crate) fn wavenumber(&self, k: usize) -> f64 {
        if k <= self.n / 2 {
            k as f64
        } else {
            k as f64 - self.n as f64
        }
    }

    /// Wavenumber for odd symbols: Nyquist has no real derivative.
    pub(crate) fn odd_wavenumber(&self, k: usize) -> f64 {
        if 2 * k == self.n {
            0.0
        } else {
            self.wavenumber(k)
        }
    }
}

fn torus_of(s: &ScalarField) -> Result<GridTorus> {
    match *s.grid() {
        Grid::Torus(g) => Ok(g),
        Grid::Disc(_) => Err(Error::InvalidGrid("spectral operators need a torus".into())),
    }
}

/// Zero-mean solution of `Δφ = s`.
pub fn poisson_periodic(s: &ScalarField) -> Result<ScalarField> {
    let g = torus_of(s)?;
    let sup = s.max_abs();
    let mean = s.mean();
    if mean.abs() > MEAN_TOLERANCE * sup {
        return Err(Error::Compatibility {
            gap: mean.abs(),
            tolerance: MEAN_TOLERANCE * sup,
        });
    }
    if sup == 0.0 {
        return Ok(ScalarField::zeros(*s.grid()));
    }
    let fft = Fft2::new(g.n());
    let mut d = fft.forward(s.values());
    let n = g.n();
    let two_pi_sq = 4.0 * std::f64::consts::PI * std::f64::consts::PI;
    for j in 0..n {
        let ky = fft.wavenumber(j);
        for i in 0..n {
            let kx = fft.wavenumber(i);
            let k2 = kx * kx + ky * ky;
            d[j * n + i] = if k2 == 0.0 {
                Complex64::default()
            } else {
                d[j * n + i] / (-two_pi_sq * k2)
            };
        }
    }
    Ok(ScalarField::from_raw(*s.grid(), fft.inverse(d)))
}

/// Spectral Laplacian, exact on band-limited data.
pub fn spectral_laplacian(s: &ScalarField) -> Result<ScalarField> {
    let g = torus_of(s)?;
    let n = g.n();
    let fft = Fft2::new(n);
    let mut d = fft.forward(s.values());
    let two_pi_sq = 4.0 * std::f64::consts::PI * std::f64::consts::PI;
    for j in 0..n {
        for i in 0..n {
            let k2 = fft.wavenumber(i).powi(2) + fft.wavenumber(j).powi(2);
            d[j * n + i] *= -two_pi_sq * k2;
        }
    }
    Ok(ScalarField::from_raw(*s.grid(), fft.inverse(d)))
}

/// `F₁ = Δ⁻¹div(ρu)`.
pub fn f1_field(state: &State) -> Result<ScalarField> {
    let g = torus_of(state.rho())?;
    let m = state.momentum();
    let fft = Fft2::new(g.n());
    let (mx, my) = (fft.forward(m.x()), fft.forward(m.y()));
    let n = g.n();
    let mut out = vec![Complex64::default(); n * n];
    let tp = 2.0 * std::f64::consts::PI;
    for j in 0..n {
        for i in 0..n {
            let k = j * n + i;
            let (kx, ky) = (fft.odd_wavenumber(i), fft.odd_wavenumber(j));
            let k2 = fft.wavenumber(i).powi(2) + fft.wavenumber(j).powi(2);
            if k2 > 0.0 {
                // (i2πk·m̂)/(−4π²|k|²)
                out[k] = Complex64::new(0.0, -1.0) * (mx[k] * kx + my[k] * ky) / (tp * k2);
            }
        }
    }
    Ok(ScalarField::from_raw(*state.grid(), fft.inverse(out)))
}

/// Scalar commutator `u·∇Δ⁻¹div(ρu) − Δ⁻¹div div(ρu⊗u)`, i.e.
/// `Σᵢⱼ [uᵢ, Rᵢⱼ](ρuⱼ)` with `Rᵢⱼ = ∂ᵢ∂ⱼΔ⁻¹`.
pub fn commutator_field(state: &State) -> Result<ScalarField> {
    let g = torus_of(state.rho())?;
    let n = g.n();
    let fft = Fft2::new(n);
    let rho = state.rho().values();
    let (ux, uy) = (state.u().x(), state.u().y());
    let m = state.momentum();
    let (mx, my) = (fft.forward(m.x()), fft.forward(m.y()));
    let prod = |a: &[f64], b: &[f64]| -> Vec<f64> {
        (0..n * n).map(|k| rho[k] * a[k] * b[k]).collect()
    };
    let qxx = fft.forward(&prod(ux, ux));
    let qxy = fft.forward(&prod(ux, uy));
    let qyy = fft.forward(&prod(uy, uy));
    let mut wx = vec![Complex64::default(); n * n];
    let mut wy = vec![Complex64::default(); n * n];
    let mut rq = vec![Complex64::default(); n * n];
    for j in 0..n {
        for i in 0..n {
            let k = j * n + i;
            let k2 = fft.wavenumber(i).powi(2) + fft.wavenumber(j).powi(2);
            if k2 == 0.0 {
                continue;
            }
            let (ox, oy) = (fft.odd_wavenumber(i), fft.odd_wavenumber(j));
            let (ex, ey) = (fft.wavenumber(i), fft.wavenumber(j));
            let dm = (mx[k] * ox + my[k] * oy) / k2;
            wx[k] = dm * ox;
            wy[k] = dm * oy;
            rq[k] = (qxx[k] * ex * ex + qxy[k] * 2.0 * ox * oy + qyy[k] * ey * ey) / k2;
        }
    }
    let (wx, wy, rq) = (fft.inverse(wx), fft.inverse(wy), fft.inverse(rq));
    Ok(ScalarField::from_raw(
        *state.grid(),
        (0..n * n)
            .map(|k| ux[k] * wx[k] + uy[k] * wy[k] - rq[k])
            .collect(),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::VectorField;
    use std::f64::consts::PI;

    fn torus(n: usize) -> Grid {
        Grid::torus(n).unwrap()
    }

    #[test]
    fn single_mode_inverse() {
        let s = ScalarField::from_fn(torus(32), |x, _| (2.0 * PI * x).cos()).unwrap();
        let p = poisson_periodic(&s).unwrap();
        for k in 0..s.grid().len() {
            let expect = -s.values()[k] / (4.0 * PI * PI);
            assert!((p.values()[k] - expect).abs() < 1e-15);
        }
        let z = poisson_periodic(&ScalarField::zeros(torus(16))).unwrap();
        assert_eq!(z.max_abs(), 0.0);
    }

    #[test]
    fn rejects_nonzero_mean() {
        let s = ScalarField::from_fn(torus(16), |x, _| 1.0 + x).unwrap();
        assert!(matches!(poisson_periodic(&s), Err(Error::Compatibility { .. })));
    }

    #[test]
    fn round_trip_on_random_zero_mean_data() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        let g = torus(32);
        let raw: Vec<f64> = (0..g.len()).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let mean = raw.iter().sum::<f64>() / raw.len() as f64;
        let s = ScalarField::new(g, raw.iter().map(|v| v - mean).collect()).unwrap();
        let p = poisson_periodic(&s).unwrap();
        assert!(p.mean().abs() < 1e-15);
        let back = spectral_laplacian(&p).unwrap();
        let err = back.zip_map(&s, |a, b| a - b).unwrap().max_abs();
        assert!(err <= 1e-10 * s.max_abs(), "{err}");
    }

    #[test]
    fn f1_vanishes_for_solenoidal_momentum() {
        let g = torus(32);
        let tp = 2.0 * PI;
        // u = ∇⊥ψ for ψ = sin(2πx)cos(4πy), sampled analytically
        let u = VectorField::from_fn(g, |x, y| {
            (
                -2.0 * tp * (tp * x).sin() * (2.0 * tp * y).sin(),
                -tp * (tp * x).cos() * (2.0 * tp * y).cos(),
            )
        })
        .unwrap();
        let s = State::new(ScalarField::constant(g, 1.0), u, 0.0).unwrap();
        assert!(f1_field(&s).unwrap().max_abs() < 1e-13);
    }

    #[test]
    fn constant_state_has_zero_commutator() {
        let g = torus(16);
        let s = State::new(
            ScalarField::constant(g, 1.0),
            VectorField::from_fn(g, |_, _| (0.4, -0.9)).unwrap(),
            0.0,
        )
        .unwrap();
        assert!(f1_field(&s).unwrap().max_abs() < 1e-13);
        assert!(commutator_field(&s).unwrap().max_abs() < 1e-13);
    }
}
