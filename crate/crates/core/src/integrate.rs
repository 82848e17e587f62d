//! SSP-RK3 time stepping of the conserved variables, run driver with
//! diagnostics and snapshots, and flow-line tracing.

use std::sync::Arc;

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};
use serde::{Deserialize, Serialize};

use crate::diagnostics::{record, DiagRecord};
use crate::field::{interp_cubic, interp_vector, Grid, GridDisc, ScalarField, VectorField};
use crate::physics::{flux_g, pow, rhs, FluidParams, Kernel, State};
use crate::steady::{solve_steady, SteadyState, DEFAULT_TOL};
use crate::{Error, Result};

/// Smallest density a run may reach before it is aborted.
pub const DENSITY_FLOOR: f64 = 1e-8;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub t_end: f64,
    pub cfl: f64,
    pub snapshot_every: f64,
    pub diag_every: f64,
    #[serde(default)]
    pub seed: u64,
}

impl RunConfig {
    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::InvalidParameter(m));
        if !(self.t_end >= 0.0 && self.t_end.is_finite()) {
            return bad(format!("t_end must be finite and >= 0, got {}", self.t_end));
        }
        if !(self.cfl > 0.0 && self.cfl <= 1.0) {
            return bad(format!("cfl must lie in (0, 1], got {}", self.cfl));
        }
        if !(self.snapshot_every > 0.0 && self.diag_every > 0.0) {
            return bad("output intervals must be positive".into());
        }
        Ok(())
    }
}

/// `cfl · min(h/(max|u| + c_max), h²/(2ν_max))`.
pub fn stable_dt(state: &State, params: &FluidParams, cfl: f64) -> f64 {
    let h = state.grid().spacing();
    let (ux, uy) = (state.u().x(), state.u().y());
    let u2 = ux.iter().zip(uy).map(|(a, b)| a * a + b * b).fold(0.0, f64::max);
    let consts = (params.mu(), params.beta(), params.gamma());
    dt_formula(h, consts, u2.sqrt(), state.rho().min(), state.rho().max(), cfl)
}

fn dt_formula(h: f64, (mu, beta, gamma): (f64, f64, f64), umax: f64, rmin: f64, rmax: f64, cfl: f64) -> f64 {
    // both constitutive powers are monotone in ρ
    let cmax = (gamma * pow(rmin, gamma - 1.0))
        .max(gamma * pow(rmax, gamma - 1.0))
        .sqrt();
    let lmax = pow(rmin, beta).max(pow(rmax, beta));
    let nu = (2.0 * mu + lmax) / rmin;
    cfl * (h / (umax + cmax)).min(h * h / (2.0 * nu))
}

/// Removes angular modes finer than the radial spacing from tendencies on
/// the inner rings.
struct PolarFilter {
    n_th: usize,
    /// `(ring, highest kept |k|)` for every ring that needs filtering.
    rings: Vec<(usize, usize)>,
    fwd: Arc<dyn Fft<f64>>,
    inv: Arc<dyn Fft<f64>>,
    buf: Vec<Complex64>,
}

impl PolarFilter {
    fn new(g: GridDisc) -> Option<Self> {
        let (n, dth, dr) = (g.n_th(), g.dth(), g.dr());
        let rings: Vec<(usize, usize)> = (0..g.n_r())
            .filter_map(|i| {
                let limit = 2.0 * g.r(i) * (0.5 * dth).sin() / dr;
                let kmax = (0..=n / 2)
                    .take_while(|&k| (k as f64 * 0.5 * dth).sin() <= limit * (1.0 + 1e-12))
                    .last()
                    .unwrap_or(0);
                (kmax < n / 2).then_some((i, kmax))
            })
            .collect();
        if rings.is_empty() {
            return None;
        }
        let mut planner = FftPlanner::new();
        Some(Self {
            n_th: n,
            rings,
            fwd: planner.plan_fft_forward(n),
            inv: planner.plan_fft_inverse(n),
            buf: vec![Complex64::default(); n],
        })
    }

    fn apply(&mut self, v: &mut [f64]) {
        let n = self.n_th;
        let scale = 1.0 / n as f64;
        for &(i, kmax) in &self.rings {
            let row = &mut v[i * n..(i + 1) * n];
            for (b, &x) in self.buf.iter_mut().zip(row.iter()) {
                *b = Complex64::new(x, 0.0);
            }
            self.fwd.process(&mut self.buf);
            for (k, b) in self.buf.iter_mut().enumerate() {
                if k.min(n - k) > kmax {
                    *b = Complex64::default();
                }
            }
            self.inv.process(&mut self.buf);
            for (x, b) in row.iter_mut().zip(&self.buf) {
                *x = b.re * scale;
            }
        }
    }
}

/// Reusable SSP-RK3 stepper holding the conserved variables `(ρ, ρu)`.
pub struct Stepper {
    grid: Grid,
    kernel: Kernel,
    filter: Option<PolarFilter>,
    consts: (f64, f64, f64),
    t: f64,
    q0: [Vec<f64>; 3],
    q: [Vec<f64>; 3],
    k: [Vec<f64>; 3],
}

impl Stepper {
    pub fn new(params: &FluidParams) -> Self {
        let grid = *params.grid();
        let n = grid.len();
        let z = || [vec![0.0; n], vec![0.0; n], vec![0.0; n]];
        Self {
            grid,
            kernel: Kernel::new(params),
            filter: match grid {
                Grid::Disc(g) => PolarFilter::new(g),
                Grid::Torus(_) => None,
            },
            consts: (params.mu(), params.beta(), params.gamma()),
            t: 0.0,
            q0: z(),
            q: z(),
            k: z(),
        }
    }

    fn load(&mut self, state: &State) -> Result<()> {
        if state.grid() != &self.grid {
            return Err(Error::GridMismatch);
        }
        let rho = state.rho().values();
        self.q[0].copy_from_slice(rho);
        for (c, u) in [state.u().x(), state.u().y()].into_iter().enumerate() {
            for ((m, r), v) in self.q[c + 1].iter_mut().zip(rho).zip(u) {
                *m = r * v;
            }
        }
        self.t = state.t();
        Ok(())
    }

    fn state_of(&self, q: &[Vec<f64>; 3], t: f64) -> Result<State> {
        let rho = ScalarField::new(self.grid, q[0].clone())?;
        let m = VectorField::new(self.grid, q[1].clone(), q[2].clone())?;
        State::from_conserved(rho, &m, t)
    }

    fn current(&self) -> Result<State> {
        self.state_of(&self.q, self.t)
    }

    /// [`stable_dt`] of the held state.
    fn dt_limit(&self, cfl: f64) -> f64 {
        let [r, mx, my] = &self.q;
        let (mut u2, mut rmin, mut rmax) = (0.0f64, f64::INFINITY, 0.0f64);
        for ((&r, &a), &b) in r.iter().zip(mx).zip(my) {
            let (ux, uy) = (a / r, b / r);
            u2 = u2.max(ux * ux + uy * uy);
            rmin = rmin.min(r);
            rmax = rmax.max(r);
        }
        dt_formula(self.grid.spacing(), self.consts, u2.sqrt(), rmin, rmax, cfl)
    }

    fn stage(&mut self, dt: f64, a0: f64) {
        let [r, mx, my] = &self.q;
        let [dr, dmx, dmy] = &mut self.k;
        self.kernel.eval(r, mx, my, dr, dmx, dmy);
        if let Some(f) = &mut self.filter {
            for v in self.k.iter_mut() {
                f.apply(v);
            }
        }
        // q ← a0·q0 + (1 − a0)(q + dt·L(q))
        let b = 1.0 - a0;
        for ((q, q0), k) in self.q.iter_mut().zip(&self.q0).zip(&self.k) {
            for ((q, q0), k) in q.iter_mut().zip(q0).zip(k) {
                *q = a0 * q0 + b * (*q + dt * k);
            }
        }
    }

    fn violation(&self) -> Option<String> {
        let low = self.q[0].iter().fold(f64::INFINITY, |a, &r| a.min(r));
        let finite = self.q[1..].iter().flatten().fold(0.0, |a, &v| a + v * 0.0) == 0.0;
        if low >= DENSITY_FLOOR && finite {
            return None;
        }
        self.q[0]
            .iter()
            .position(|r| !(*r >= DENSITY_FLOOR))
            .map(|i| format!("density {:e} below floor at cell {i}", self.q[0][i]))
            .or_else(|| {
                self.q[1..]
                    .iter()
                    .flatten()
                    .position(|v| !v.is_finite())
                    .map(|i| format!("non-finite momentum at flat index {i}"))
            })
    }

    /// Advances the held state; on failure it is restored and returned as
    /// the last good state.
    fn advance(&mut self, dt: f64) -> Result<()> {
        if !(dt > 0.0 && dt.is_finite()) {
            return Err(Error::InvalidParameter(format!("time step must be positive, got {dt}")));
        }
        for c in 0..3 {
            self.q0[c].copy_from_slice(&self.q[c]);
        }
        for (s, a0) in [0.0, 0.75, 1.0 / 3.0].into_iter().enumerate() {
            self.stage(dt, a0);
            if let Some(reason) = self.violation() {
                std::mem::swap(&mut self.q, &mut self.q0);
                return Err(Error::NumericalAbort {
                    t: self.t,
                    reason: format!("{reason} (stage {})", s + 1),
                    last_good: Box::new(self.current()?),
                });
            }
        }
        self.t += dt;
        Ok(())
    }

    /// Advances `state` by `dt`; the caller keeps `dt` within [`stable_dt`].
    pub fn step(&mut self, state: &State, dt: f64) -> Result<State> {
        self.load(state)?;
        self.advance(dt).map_err(|e| match e {
            Error::NumericalAbort { t, reason, .. } => Error::NumericalAbort {
                t,
                reason,
                last_good: Box::new(state.clone()),
            },
            e => e,
        })?;
        self.current()
    }
}

/// One SSP-RK3 step.
pub fn step(state: &State, params: &FluidParams, dt: f64) -> Result<State> {
    if state.grid() != params.grid() {
        return Err(Error::GridMismatch);
    }
    Stepper::new(params).step(state, dt)
}

#[derive(Debug, Clone)]
pub struct RunOutput {
    pub final_state: State,
    pub records: Vec<DiagRecord>,
    /// States at the snapshot times, when collected.
    pub snapshots: Vec<State>,
    pub steady: SteadyState,
    pub steps: usize,
}

/// Integrates to `t_end`, keeping snapshots in memory.
pub fn run(config: &RunConfig, params: &FluidParams, initial: State) -> Result<RunOutput> {
    let mut snaps = Vec::new();
    let mut out = run_with(config, params, initial, |s| {
        snaps.push(s.clone());
        Ok(())
    })?;
    out.snapshots = snaps;
    Ok(out)
}

/// Integrates to `t_end`, handing each snapshot to `on_snapshot`. Steps are
/// shortened to land exactly on every output time.
pub fn run_with(
    config: &RunConfig,
    params: &FluidParams,
    initial: State,
    mut on_snapshot: impl FnMut(&State) -> Result<()>,
) -> Result<RunOutput> {
    config.validate()?;
    if initial.grid() != params.grid() {
        return Err(Error::GridMismatch);
    }
    let steady = solve_steady(params.force(), initial.rho().integral(), params.gamma(), DEFAULT_TOL)?;
    let rho_s = steady.rho_s().clone();
    let diag = |s: &State| -> Result<DiagRecord> { record(s, params, &rho_s, &rhs(s, params)?) };

    let t0 = initial.t();
    let t_end = t0 + config.t_end;
    let (mut kd, mut ks) = (0u64, 0u64);
    let next = |k: u64, every: f64| t0 + k as f64 * every;
    let mut records = Vec::new();
    let mut stepper = Stepper::new(params);
    stepper.load(&initial)?;
    let mut state = initial;
    let mut steps = 0;
    loop {
        let t = stepper.t;
        let (at_diag, at_snap) = (t == next(kd, config.diag_every), t == next(ks, config.snapshot_every));
        if at_diag || at_snap || t == t_end {
            if steps > 0 {
                state = stepper.current()?;
            }
            if at_diag || t == t_end {
                records.push(diag(&state)?);
            }
            if at_diag {
                kd += 1;
            }
            if at_snap {
                on_snapshot(&state)?;
                ks += 1;
            }
        }
        if t >= t_end {
            break;
        }
        let target = next(kd, config.diag_every)
            .min(next(ks, config.snapshot_every))
            .min(t_end);
        let dt_max = stepper.dt_limit(config.cfl);
        if t + dt_max >= target {
            stepper.advance(target - t)?;
            stepper.t = target;
        } else {
            stepper.advance(dt_max)?;
        }
        steps += 1;
    }
    Ok(RunOutput {
        final_state: state,
        records,
        snapshots: Vec::new(),
        steady,
        steps,
    })
}

/// Fields sampled along flow lines at one instant.
#[derive(Debug, Clone)]
struct Frame {
    t: f64,
    u: VectorField,
    theta: ScalarField,
    g: ScalarField,
    p_dev: ScalarField,
}

/// Time-ordered velocity and transport fields for particle tracing.
#[derive(Debug, Clone, Default)]
pub struct FlowHistory {
    frames: Vec<Frame>,
}

impl FlowHistory {
    pub fn new() -> Self {
        Self::default()
    }

    /// Appends a frame; times must increase strictly.
    pub fn push(&mut self, state: &State, params: &FluidParams, rho_s: &ScalarField) -> Result<()> {
        if let Some(last) = self.frames.last() {
            if !(state.t() > last.t) {
                return Err(Error::InvalidParameter(format!(
                    "frame time {} does not follow {}",
                    state.t(),
                    last.t
                )));
            }
            if last.u.grid() != state.grid() {
                return Err(Error::GridMismatch);
            }
        }
        let gamma = params.gamma();
        let p_dev = state
            .rho()
            .zip_map(rho_s, |r, rs| pow(r, gamma) - pow(rs, gamma))?;
        self.frames.push(Frame {
            t: state.t(),
            u: state.u().clone(),
            theta: params.theta_of(state.rho())?,
            g: flux_g(state, params, rho_s)?,
            p_dev,
        });
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.frames.len()
    }

    pub fn is_empty(&self) -> bool {
        self.frames.is_empty()
    }

    pub fn times(&self) -> Vec<f64> {
        self.frames.iter().map(|f| f.t).collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PathSample {
    pub t: f64,
    pub x: [f64; 2],
    pub theta: f64,
    pub g: f64,
    /// `P − P_s` at the particle.
    pub p_dev: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ParticlePath {
    pub samples: Vec<PathSample>,
    /// Set when the disc radius had to be clamped inside the wall.
    pub clamped: bool,
}

/// Largest radius a traced particle may reach on the disc.
pub const WALL_CLAMP: f64 = 1.0 - 1e-9;

/// Midpoint-rule flow line through the history, one step per frame
/// interval, with velocity linear in time between frames.
pub fn trace_particle(x0: (f64, f64), history: &FlowHistory) -> Result<ParticlePath> {
    let frames = &history.frames;
    let Some(first) = frames.first() else {
        return Err(Error::TooFewSamples { got: 0, need: 1 });
    };
    let grid = *first.u.grid();
    let mut clamped = false;
    let mut place = |p: (f64, f64)| -> Result<(f64, f64)> {
        if !(p.0.is_finite() && p.1.is_finite()) {
            return Err(Error::OutOfDomain { x: p.0, y: p.1 });
        }
        Ok(match grid {
            Grid::Torus(_) => (p.0.rem_euclid(1.0), p.1.rem_euclid(1.0)),
            Grid::Disc(_) => {
                let r = p.0.hypot(p.1);
                if r > WALL_CLAMP {
                    clamped = true;
                    let s = WALL_CLAMP / r;
                    (p.0 * s, p.1 * s)
                } else {
                    p
                }
            }
        })
    };
    if let Grid::Disc(_) = grid {
        if x0.0.hypot(x0.1) > 1.0 {
            return Err(Error::OutOfDomain { x: x0.0, y: x0.1 });
        }
    }
    let mut x = place(x0)?;
    let sample = |f: &Frame, x: (f64, f64)| -> Result<PathSample> {
        Ok(PathSample {
            t: f.t,
            x: [x.0, x.1],
            theta: interp_cubic(&f.theta, x.0, x.1)?,
            g: interp_cubic(&f.g, x.0, x.1)?,
            p_dev: interp_cubic(&f.p_dev, x.0, x.1)?,
        })
    };
    let mut samples = vec![sample(first, x)?];
    for w in frames.windows(2) {
        let (a, b) = (&w[0], &w[1]);
        let dt = b.t - a.t;
        let u0 = interp_vector(&a.u, x.0, x.1)?;
        let xm = place((x.0 + 0.5 * dt * u0.0, x.1 + 0.5 * dt * u0.1))?;
        let (ua, ub) = (interp_vector(&a.u, xm.0, xm.1)?, interp_vector(&b.u, xm.0, xm.1)?);
        let um = (0.5 * (ua.0 + ub.0), 0.5 * (ua.1 + ub.1));
        x = place((x.0 + dt * um.0, x.1 + dt * um.1))?;
        samples.push(sample(b, x)?);
    }
    Ok(ParticlePath { samples, clamped })
}

/// `max |dθ/dt + (P − P_s) + G|` over interior samples, with `dθ/dt` from
/// centred differences along the path.
pub fn theta_transport_residual(path: &ParticlePath) -> Result<f64> {
    let s = &path.samples;
    if s.len() < 3 {
        return Err(Error::TooFewSamples { got: s.len(), need: 3 });
    }
    let mut worst = 0.0f64;
    for w in s.windows(3) {
        let dtheta = (w[2].theta - w[0].theta) / (w[2].t - w[0].t);
        worst = worst.max((dtheta + w[1].p_dev + w[1].g).abs());
    }
    Ok(worst)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn acoustic(n: usize) -> (State, FluidParams) {
        let g = Grid::torus(n).unwrap();
        let params = FluidParams::new(1.0, 2.0, 2.0, ScalarField::zeros(g)).unwrap();
        let rho = ScalarField::from_fn(g, |x, _| 1.0 + 0.1 * (2.0 * PI * x).cos()).unwrap();
        (State::new(rho, VectorField::zeros(g), 0.0).unwrap(), params)
    }

    #[test]
    fn stable_dt_formula() {
        let g = Grid::torus(64).unwrap();
        let params = FluidParams::new(1.0, 1.0, 2.0, ScalarField::zeros(g)).unwrap();
        let s = State::new(ScalarField::constant(g, 1.0), VectorField::zeros(g), 0.0).unwrap();
        let h = 1.0 / 64.0;
        let want = 0.5 * (h / 2f64.sqrt()).min(h * h / 6.0);
        assert!((stable_dt(&s, &params, 0.5) - want).abs() < 1e-18);
        let fine = State::new(
            ScalarField::constant(Grid::torus(128).unwrap(), 1.0),
            VectorField::zeros(Grid::torus(128).unwrap()),
            0.0,
        )
        .unwrap();
        let pf = FluidParams::new(1.0, 1.0, 2.0, ScalarField::zeros(*fine.grid())).unwrap();
        assert!((stable_dt(&fine, &pf, 0.5) - want / 4.0).abs() < 1e-18);
    }

    #[test]
    fn equilibrium_is_kept() {
        let g = Grid::disc(12, 24).unwrap();
        let f = ScalarField::from_fn(g, |x, y| 0.3 * x * y + 0.1 * y).unwrap();
        let params = FluidParams::new(1.0, 2.0, 2.0, f.clone())
            .unwrap()
            .with_uniform_friction(1.0)
            .unwrap();
        let ss = solve_steady(&f, 3.0, 2.0, 1e-12).unwrap();
        let s = State::new(ss.rho_s().clone(), VectorField::zeros(g), 0.0).unwrap();
        let dt = stable_dt(&s, &params, 0.5);
        let next = step(&s, &params, dt).unwrap();
        let drift = next.rho().zip_map(s.rho(), |a, b| a - b).unwrap().max_abs();
        assert!(drift < 1e-14 && next.u().max_abs() < 1e-13, "{drift}");
    }

    #[test]
    fn torus_step_conserves_mass_and_momentum() {
        let g = Grid::torus(16).unwrap();
        let params = FluidParams::new(0.5, 2.0, 1.4, ScalarField::zeros(g)).unwrap();
        let s = State::new(
            ScalarField::from_fn(g, |x, y| 1.0 + 0.2 * (2.0 * PI * (x + y)).sin()).unwrap(),
            VectorField::from_fn(g, |x, y| ((2.0 * PI * y).cos(), 0.3 * (2.0 * PI * x).sin()))
                .unwrap(),
            0.0,
        )
        .unwrap();
        let before = (s.rho().integral(), s.momentum().integral());
        let next = step(&s, &params, stable_dt(&s, &params, 0.5)).unwrap();
        let after = (next.rho().integral(), next.momentum().integral());
        assert!((after.0 - before.0).abs() < 1e-14);
        assert!((after.1 .0 - before.1 .0).abs() < 1e-14);
        assert!((after.1 .1 - before.1 .1).abs() < 1e-14);
    }

    #[test]
    fn collapse_aborts_with_last_good_state() {
        let (s, params) = acoustic(8);
        let err = step(&s, &params, 10.0).unwrap_err();
        match err {
            Error::NumericalAbort { last_good, .. } => assert_eq!(*last_good, s),
            e => panic!("unexpected {e}"),
        }
    }

    #[test]
    fn zero_length_run_returns_initial_state() {
        let (s, params) = acoustic(8);
        let cfg = RunConfig { t_end: 0.0, cfl: 0.5, snapshot_every: 1.0, diag_every: 0.1, seed: 0 };
        let out = run(&cfg, &params, s.clone()).unwrap();
        assert_eq!(out.final_state, s);
        assert_eq!(out.records.len(), 1);
        assert_eq!(out.snapshots.len(), 1);
    }

    #[test]
    fn run_lands_on_output_times() {
        let (s, params) = acoustic(8);
        let cfg = RunConfig { t_end: 0.05, cfl: 0.5, snapshot_every: 0.02, diag_every: 0.01, seed: 0 };
        let out = run(&cfg, &params, s).unwrap();
        let ts: Vec<f64> = out.records.iter().map(|r| r.t).collect();
        assert_eq!(ts.len(), 6);
        for (k, t) in ts.iter().enumerate() {
            assert_eq!(*t, k as f64 * 0.01);
        }
        let snaps: Vec<f64> = out.snapshots.iter().map(|s| s.t()).collect();
        assert_eq!(snaps, vec![0.0, 0.02, 0.04]);
        assert_eq!(out.final_state.t(), 0.05);
        assert!(RunConfig { cfl: 1.5, ..cfg.clone() }.validate().is_err());
    }

    #[test]
    fn polar_filter_keeps_low_modes() {
        let g = GridDisc::new(8, 32).unwrap();
        let mut f = PolarFilter::new(g).unwrap();
        assert_eq!(f.rings[0], (0, 1));
        let mut v: Vec<f64> = (0..g.len())
            .map(|k| {
                let t = g.theta(k % 32);
                1.0 + t.cos() + (7.0 * t).sin()
            })
            .collect();
        f.apply(&mut v);
        for j in 0..32 {
            assert!((v[j] - 1.0 - g.theta(j).cos()).abs() < 1e-13);
        }
        let outer = g.idx(7, 3);
        assert!((v[outer] - (1.0 + g.theta(3).cos() + (7.0 * g.theta(3)).sin())).abs() < 1e-15);
    }

    #[test]
    fn still_fluid_path_is_fixed() {
        let g = Grid::torus(16).unwrap();
        let params = FluidParams::new(1.0, 2.0, 2.0, ScalarField::zeros(g)).unwrap();
        let rho = ScalarField::constant(g, 1.0);
        let mut h = FlowHistory::new();
        for k in 0..4 {
            let s = State::new(rho.clone(), VectorField::zeros(g), k as f64 * 0.1).unwrap();
            h.push(&s, &params, &rho).unwrap();
        }
        let p = trace_particle((0.3, 0.7), &h).unwrap();
        assert!(p.samples.iter().all(|s| s.x == [0.3, 0.7]));
        assert!(theta_transport_residual(&p).unwrap() < 1e-14);
        let s = State::new(rho.clone(), VectorField::zeros(g), 0.2).unwrap();
        assert!(h.push(&s, &params, &rho).is_err());
    }

    #[test]
    fn rigid_rotation_orbit() {
        let g = Grid::disc(32, 64).unwrap();
        let params = FluidParams::new(1.0, 2.0, 2.0, ScalarField::zeros(g))
            .unwrap()
            .with_uniform_friction(0.0)
            .unwrap();
        let rho = ScalarField::constant(g, 1.0);
        let omega = 2.0;
        let u = VectorField::from_fn(g, |x, y| (-omega * y, omega * x)).unwrap();
        let drift = |frames: usize| {
            let mut h = FlowHistory::new();
            let period = 2.0 * PI / omega;
            for k in 0..=frames {
                let s = State::new(rho.clone(), u.clone(), k as f64 * period / frames as f64).unwrap();
                h.push(&s, &params, &rho).unwrap();
            }
            let p = trace_particle((0.5, 0.0), &h).unwrap();
            assert!(!p.clamped);
            p.samples
                .iter()
                .map(|s| (s.x[0].hypot(s.x[1]) - 0.5).abs())
                .fold(0.0, f64::max)
        };
        let (a, b) = (drift(64), drift(128));
        assert!(a < 1e-2 && a / b > 3.0, "{a} {b}");
    }

    #[test]
    fn residual_needs_three_samples() {
        let p = ParticlePath { samples: vec![], clamped: false };
        assert!(matches!(theta_transport_residual(&p), Err(Error::TooFewSamples { .. })));
    }
}
