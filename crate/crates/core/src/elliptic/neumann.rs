//! Direct Neumann solver on the polar grid: Fourier in angle, tridiagonal
//! finite-volume systems in radius.

use num_complex::Complex64;
use rustfft::FftPlanner;

use crate::field::{DiscGeometry, Grid, GridDisc, ScalarField, VectorField};
use crate::{Error, Result};

/// Gap below which the boundary data are shifted to restore solvability,
/// relative to the size of the data.
pub const COMPATIBILITY_TOLERANCE: f64 = 1e-6;

/// `ΔG = div H` in the disc with `∂_n G = g` on the circle.
#[derive(Debug, Clone)]
pub struct NeumannProblem {
    grid: GridDisc,
    /// Cell averages of `div H`.
    source: Vec<f64>,
    /// Normal data at the angular nodes.
    boundary: Vec<f64>,
    gap: f64,
    scale: f64,
}

impl NeumannProblem {
    /// Builds the source as the finite-volume divergence of `h`. The wall
    /// flux uses `h_normal` when given, otherwise `H·n` extrapolated from the
    /// last two rings.
    pub fn new(h: &VectorField, boundary: Vec<f64>, h_normal: Option<Vec<f64>>) -> Result<Self> {
        let Grid::Disc(g) = *h.grid() else {
            return Err(Error::InvalidGrid("Neumann problem needs a disc".into()));
        };
        let nth = g.n_th();
        if boundary.len() != nth || h_normal.as_ref().is_some_and(|v| v.len() != nth) {
            return Err(Error::InvalidParameter(format!(
                "boundary data need {nth} samples"
            )));
        }
        if boundary.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite {
                name: "boundary".into(),
                index: boundary.iter().position(|v| !v.is_finite()).unwrap_or(0),
            });
        }
        let geo = DiscGeometry::new(g);
        let wall = h_normal.unwrap_or_else(|| {
            let (a, b) = (g.n_r() - 1, g.n_r() - 2);
            (0..nth)
                .map(|j| {
                    let (ka, kb) = (g.idx(a, j), g.idx(b, j));
                    let hx = 1.5 * h.x()[ka] - 0.5 * h.x()[kb];
                    let hy = 1.5 * h.y()[ka] - 0.5 * h.y()[kb];
                    hx * geo.cos[j] + hy * geo.sin[j]
                })
                .collect()
        });
        let source = fv_divergence(&geo, h.x(), h.y(), &wall);
        let dth = g.dth();
        let src_total: f64 = (0..g.len()).map(|k| source[k] * g.cell_area(k / nth)).sum();
        let wall_total: f64 = boundary.iter().sum::<f64>() * dth;
        let scale = (0..g.len())
            .map(|k| source[k].abs() * g.cell_area(k / nth))
            .sum::<f64>()
            + boundary.iter().map(|v| v.abs()).sum::<f64>() * dth;
        Ok(Self {
            grid: g,
            source,
            boundary,
            gap: src_total - wall_total,
            scale,
        })
    }

    /// `∫div H − ∮g` in the discrete measure.
    pub fn gap(&self) -> f64 {
        self.gap
    }

    pub fn boundary(&self) -> &[f64] {
        &self.boundary
    }

    pub fn source(&self) -> ScalarField {
        ScalarField::from_raw(Grid::Disc(self.grid), self.source.clone())
    }
}

/// Finite-volume divergence with radial faces `r Δθ` and angular faces
/// `Δr Δθ / (2 sin(Δθ/2))`, exact on affine fields.
pub(crate) fn fv_divergence(geo: &DiscGeometry, hx: &[f64], hy: &[f64], wall: &[f64]) -> Vec<f64> {
    let g = &geo.grid;
    let (nr, nth) = (g.n_r(), g.n_th());
    let (dr, dth) = (g.dr(), g.dth());
    let ang_len = dr * dth / (2.0 * (0.5 * dth).sin());
    let mut radial = vec![0.0; nr * nth];
    let mut angular = vec![0.0; nr * nth];
    for i in 0..nr {
        let len = g.r_face(i) * dth;
        for j in 0..nth {
            let k = g.idx(i, j);
            radial[k] = if i == nr - 1 {
                wall[j] * len
            } else {
                let o = g.idx(i + 1, j);
                0.5 * ((hx[k] + hx[o]) * geo.cos[j] + (hy[k] + hy[o]) * geo.sin[j]) * len
            };
            let o = g.idx(i, (j + 1) % nth);
            angular[k] = 0.5
                * (-(hx[k] + hx[o]) * geo.sin_face[j] + (hy[k] + hy[o]) * geo.cos_face[j])
                * ang_len;
        }
    }
    let mut out = vec![0.0; nr * nth];
    for i in 0..nr {
        let area = g.cell_area(i);
        for j in 0..nth {
            let k = g.idx(i, j);
            let inner = if i == 0 { 0.0 } else { radial[g.idx(i - 1, j)] };
            let w = g.idx(i, (j + nth - 1) % nth);
            out[k] = (radial[k] - inner + angular[k] - angular[w]) / area;
        }
    }
    out
}

/// Zero-mean solution of the Neumann problem.
pub fn neumann_solve_disc(problem: &NeumannProblem) -> Result<ScalarField> {
    let g = problem.grid;
    let (nr, nth) = (g.n_r(), g.n_th());
    let (dr, dth) = (g.dr(), g.dth());
    let tolerance = COMPATIBILITY_TOLERANCE * problem.scale;
    if problem.gap.abs() > tolerance {
        return Err(Error::Compatibility {
            gap: problem.gap.abs(),
            tolerance,
        });
    }
    let shift = problem.gap / (2.0 * std::f64::consts::PI);
    let boundary: Vec<f64> = problem.boundary.iter().map(|v| v + shift).collect();

    let mut planner = FftPlanner::new();
    let fwd = planner.plan_fft_forward(nth);
    let inv = planner.plan_fft_inverse(nth);
    let mut modes: Vec<Vec<Complex64>> = (0..nr)
        .map(|i| {
            let mut row: Vec<Complex64> = (0..nth)
                .map(|j| Complex64::new(problem.source[g.idx(i, j)], 0.0))
                .collect();
            fwd.process(&mut row);
            row
        })
        .collect();
    let mut gb: Vec<Complex64> = boundary.iter().map(|&v| Complex64::new(v, 0.0)).collect();
    fwd.process(&mut gb);

    let sin_half = (0.5 * dth).sin();
    let mut column = vec![Complex64::default(); nr];
    for k in 0..nth {
        let kk = k.min(nth - k) as f64;
        let angular = ((kk * 0.5 * dth).sin() / sin_half).powi(2);
        // r_i Δr² × cell equation: flux differences minus r_i Δr² λ G
        let rhs: Vec<Complex64> = (0..nr)
            .map(|i| {
                let mut v = modes[i][k] * g.r(i) * dr * dr;
                if i == nr - 1 {
                    v -= gb[k] * dr;
                }
                v
            })
            .collect();
        if k == 0 {
            // march outward: the flux through r_{i+½} equals the enclosed source
            column[0] = Complex64::default();
            let mut enclosed = Complex64::default();
            for i in 0..nr - 1 {
                enclosed += rhs[i];
                column[i + 1] = column[i] + enclosed / g.r_face(i);
            }
        } else {
            let mut lower = vec![0.0; nr];
            let mut diag = vec![0.0; nr];
            let mut upper = vec![0.0; nr];
            for i in 0..nr {
                let ri = g.r(i);
                let out = if i == nr - 1 { 0.0 } else { g.r_face(i) };
                let inn = if i == 0 { 0.0 } else { i as f64 * dr };
                lower[i] = inn;
                upper[i] = out;
                diag[i] = -(inn + out) - angular * dr * dr / ri;
            }
            thomas(&lower, &diag, &upper, &rhs, &mut column);
        }
        for i in 0..nr {
            modes[i][k] = column[i];
        }
    }
    let mut values = vec![0.0; nr * nth];
    let scale = 1.0 / nth as f64;
    for (i, row) in modes.iter_mut().enumerate() {
        inv.process(row);
        for j in 0..nth {
            values[g.idx(i, j)] = row[j].re * scale;
        }
    }
    let field = ScalarField::from_raw(Grid::Disc(g), values);
    let mean = field.mean();
    Ok(field.map(|v| v - mean))
}

fn thomas(a: &[f64], b: &[f64], c: &[f64], d: &[Complex64], x: &mut [Complex64]) {
    let n = b.len();
    let mut cp = vec![0.0; n];
    let mut dp = vec![Complex64::default(); n];
    cp[0] = c[0] / b[0];
    dp[0] = d[0] / b[0];
    for i in 1..n {
        let m = b[i] - a[i] * cp[i - 1];
        cp[i] = c[i] / m;
        dp[i] = (d[i] - dp[i - 1] * a[i]) / m;
    }
    x[n - 1] = dp[n - 1];
    for i in (0..n - 1).rev() {
        x[i] = dp[i] - x[i + 1] * cp[i];
    }
}
