//! Time-series observables, energy functionals and decay fits.

use std::io::{Read, Write};

use serde::{Deserialize, Serialize};

use crate::elliptic::{commutator_field, f1_field};
use crate::field::{div, grad_frobenius, Grid, ScalarField};
use crate::physics::{flux_g, material_accel, pow, wall_tangential, FluidParams, State, Tendencies};
use crate::{Error, Result};

/// One sample of the run; the CSV header lists the fields in this order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DiagRecord {
    pub t: f64,
    pub mass: f64,
    pub momentum_x: f64,
    pub momentum_y: f64,
    pub energy: f64,
    pub kinetic_energy: f64,
    pub boundary_dissipation: f64,
    pub a1_sq: f64,
    pub a2_sq: f64,
    pub b_sq: f64,
    pub sup_rho: f64,
    pub rho_dev_l1: f64,
    pub rho_dev_l2: f64,
    pub rho_dev_l4: f64,
    pub rho_dev_linf: f64,
    pub u_l2: f64,
    pub gradu_l2: f64,
    pub gradu_l4: f64,
    pub sup_g: f64,
    pub f1_norm: f64,
    pub commutator_norm: f64,
}

pub fn record(
    state: &State,
    params: &FluidParams,
    rho_s: &ScalarField,
    tend: &Tendencies,
) -> Result<DiagRecord> {
    let grid = *state.grid();
    if rho_s.grid() != &grid || tend.drho.grid() != &grid {
        return Err(Error::GridMismatch);
    }
    let (mu, beta, gamma) = (params.mu(), params.beta(), params.gamma());
    let rho = state.rho();
    let u = state.u();
    let speed_sq = u.dot(u)?;
    let (r, f, q) = (rho.values(), params.force().values(), speed_sq.values());
    let n = r.len();
    let field = |v: Vec<f64>| ScalarField::new(grid, v);

    let kinetic = field((0..n).map(|k| 0.5 * r[k] * q[k]).collect())?.integral();
    let energy = field(
        (0..n)
            .map(|k| 0.5 * r[k] * q[k] + pow(r[k], gamma) / (gamma - 1.0) - r[k] * f[k])
            .collect(),
    )?
    .integral();
    let m = state.momentum();
    let (px, py) = m.integral();

    let boundary_dissipation = match grid {
        Grid::Disc(g) => {
            let ut = wall_tangential(state, params)?;
            let terms: Vec<f64> = ut
                .iter()
                .zip(params.friction())
                .map(|(v, k)| k * v * v * g.dth())
                .collect();
            crate::field::pairwise_sum(&terms)
        }
        Grid::Torus(_) => 0.0,
    };

    let dv = div(u);
    let gu = grad_frobenius(u);
    let (d, gn) = (dv.values(), gu.values());
    let a1_sq = field(
        (0..n)
            .map(|k| (mu + pow(r[k], beta)) * d[k] * d[k] + gn[k] * gn[k])
            .collect(),
    )?
    .integral();
    let rs = rho_s.values();
    let dev = field((0..n).map(|k| r[k] - rs[k]).collect())?;
    let a2_sq = field(
        (0..n)
            .map(|k| pow(r[k] + 1.0, gamma - 1.0) * (r[k] - rs[k]).powi(2))
            .collect(),
    )?
    .integral();
    let acc = material_accel(state, tend)?;
    let a2 = acc.dot(&acc)?;
    let b_sq = field((0..n).map(|k| r[k] * a2.values()[k]).collect())?.integral();
    let g = flux_g(state, params, rho_s)?;

    let (f1_norm, commutator_norm) = match grid {
        Grid::Torus(_) => (
            f1_field(state)?.lp_norm(2.0)?,
            commutator_field(state)?.lp_norm(2.0)?,
        ),
        Grid::Disc(_) => (0.0, 0.0),
    };

    let rec = DiagRecord {
        t: state.t(),
        mass: rho.integral(),
        momentum_x: px,
        momentum_y: py,
        energy,
        kinetic_energy: kinetic,
        boundary_dissipation,
        a1_sq,
        a2_sq,
        b_sq,
        sup_rho: rho.max(),
        rho_dev_l1: dev.lp_norm(1.0)?,
        rho_dev_l2: dev.lp_norm(2.0)?,
        rho_dev_l4: dev.lp_norm(4.0)?,
        rho_dev_linf: dev.lp_norm(f64::INFINITY)?,
        u_l2: speed_sq.integral().sqrt(),
        gradu_l2: gu.lp_norm(2.0)?,
        gradu_l4: gu.lp_norm(4.0)?,
        sup_g: g.max_abs(),
        f1_norm,
        commutator_norm,
    };
    if let Some(name) = rec.non_finite_field() {
        return Err(Error::NonFinite {
            name: name.to_string(),
            index: 0,
        });
    }
    Ok(rec)
}

impl DiagRecord {
    pub const COLUMNS: [&'static str; 21] = [
        "t",
        "mass",
        "momentum_x",
        "momentum_y",
        "energy",
        "kinetic_energy",
        "boundary_dissipation",
        "a1_sq",
        "a2_sq",
        "b_sq",
        "sup_rho",
        "rho_dev_l1",
        "rho_dev_l2",
        "rho_dev_l4",
        "rho_dev_linf",
        "u_l2",
        "gradu_l2",
        "gradu_l4",
        "sup_g",
        "f1_norm",
        "commutator_norm",
    ];

    pub fn values(&self) -> [f64; 21] {
        [
            self.t,
            self.mass,
            self.momentum_x,
            self.momentum_y,
            self.energy,
            self.kinetic_energy,
            self.boundary_dissipation,
            self.a1_sq,
            self.a2_sq,
            self.b_sq,
            self.sup_rho,
            self.rho_dev_l1,
            self.rho_dev_l2,
            self.rho_dev_l4,
            self.rho_dev_linf,
            self.u_l2,
            self.gradu_l2,
            self.gradu_l4,
            self.sup_g,
            self.f1_norm,
            self.commutator_norm,
        ]
    }

    /// Value of a column by its CSV name.
    pub fn get(&self, column: &str) -> Option<f64> {
        Self::COLUMNS
            .iter()
            .position(|c| *c == column)
            .map(|i| self.values()[i])
    }

    fn non_finite_field(&self) -> Option<&'static str> {
        Self::COLUMNS
            .iter()
            .zip(self.values())
            .find(|(_, v)| !v.is_finite())
            .map(|(c, _)| *c)
    }
}

/// Writes records with shortest round-trip decimal formatting.
pub fn write_csv<W: Write>(records: &[DiagRecord], out: W) -> Result<()> {
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(out);
    w.write_record(DiagRecord::COLUMNS)?;
    for r in records {
        w.write_record(r.values().iter().map(|v| format!("{v:?}")))?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_csv<R: Read>(input: R) -> Result<Vec<DiagRecord>> {
    let mut rdr = csv::Reader::from_reader(input);
    let mut out = Vec::new();
    for row in rdr.deserialize() {
        out.push(row?);
    }
    Ok(out)
}

/// Reads `(t, column)` pairs from any CSV with a `t` column.
pub fn read_series<R: Read>(input: R, column: &str) -> Result<Vec<(f64, f64)>> {
    let mut rdr = csv::Reader::from_reader(input);
    let headers = rdr.headers()?.clone();
    let find = |name: &str| {
        headers
            .iter()
            .position(|h| h == name)
            .ok_or_else(|| Error::Fit(format!("column `{name}` not found")))
    };
    let (it, ic) = (find("t")?, find(column)?);
    let mut out = Vec::new();
    for row in rdr.records() {
        let row = row?;
        let parse = |i: usize| {
            row.get(i)
                .and_then(|s| s.trim().parse::<f64>().ok())
                .ok_or_else(|| Error::Fit(format!("unparsable value in row {:?}", row.position())))
        };
        out.push((parse(it)?, parse(ic)?));
    }
    Ok(out)
}

/// Result of a log-linear least-squares fit `value ≈ e^{intercept − xi·t}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DecayFit {
    pub xi: f64,
    pub intercept: f64,
    pub r_squared: f64,
    pub window: [f64; 2],
    pub n_points: usize,
}

pub const MIN_FIT_POINTS: usize = 5;

/// Fits samples with `t` inside the closed window. A zero-variance response
/// has `r² = 0` by convention.
pub fn decay_fit(series: &[(f64, f64)], window: (f64, f64)) -> Result<DecayFit> {
    let (lo, hi) = window;
    if !(lo < hi) {
        return Err(Error::Fit(format!("empty window [{lo}, {hi}]")));
    }
    let pts: Vec<(f64, f64)> = series
        .iter()
        .copied()
        .filter(|(t, _)| *t >= lo && *t <= hi)
        .collect();
    if pts.len() < MIN_FIT_POINTS {
        return Err(Error::TooFewSamples {
            got: pts.len(),
            need: MIN_FIT_POINTS,
        });
    }
    if let Some((t, v)) = pts.iter().find(|(_, v)| !(*v > 0.0) || !v.is_finite()) {
        return Err(Error::Fit(format!("non-positive value {v} at t = {t}")));
    }
    let n = pts.len() as f64;
    let ys: Vec<f64> = pts.iter().map(|(_, v)| v.ln()).collect();
    let tm = pts.iter().map(|(t, _)| t).sum::<f64>() / n;
    let ym = ys.iter().sum::<f64>() / n;
    let (mut stt, mut sty, mut syy) = (0.0, 0.0, 0.0);
    for ((t, _), y) in pts.iter().zip(&ys) {
        let (dt, dy) = (t - tm, y - ym);
        stt += dt * dt;
        sty += dt * dy;
        syy += dy * dy;
    }
    let slope = sty / stt;
    let intercept = ym - slope * tm;
    let r_squared = if syy == 0.0 {
        0.0
    } else {
        (sty * sty / (stt * syy)).clamp(0.0, 1.0)
    };
    Ok(DecayFit {
        xi: (-slope).max(0.0),
        intercept,
        r_squared,
        window: [lo, hi],
        n_points: pts.len(),
    })
}

/// Series of one column from in-memory records.
pub fn column(records: &[DiagRecord], name: &str) -> Result<Vec<(f64, f64)>> {
    records
        .iter()
        .map(|r| {
            r.get(name)
                .map(|v| (r.t, v))
                .ok_or_else(|| Error::Fit(format!("column `{name}` not found")))
        })
        .collect()
}
