//! JSON run configuration and its translation into solver inputs.

use std::f64::consts::PI;
use std::path::{Path, PathBuf};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::field::snapshot::{read_scalar, read_vector};
use crate::field::{Grid, ScalarField, VectorField};
use crate::integrate::RunConfig;
use crate::physics::{FluidParams, State};
use crate::{Error, Result};

/// Lower end of the bulk-viscosity exponent range covered by the theory.
pub const THEORY_BETA_MIN: f64 = 4.0 / 3.0;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Config {
    pub params: ParamsSection,
    pub grid: GridSpec,
    pub run: RunSection,
    #[serde(default)]
    pub output: OutputSection,
    #[serde(default)]
    pub oracle: OracleSection,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ParamsSection {
    pub mu: f64,
    pub beta: f64,
    pub gamma: f64,
    pub force: ForceSpec,
    /// Wall friction, disc only.
    #[serde(rename = "K", default, skip_serializing_if = "Option::is_none")]
    pub k: Option<FrictionSpec>,
    #[serde(default)]
    pub allow_outside_theory: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum ForceSpec {
    Preset {
        name: ForcePreset,
        #[serde(default = "one")]
        amplitude: f64,
    },
    /// Scalar snapshot (path without extension).
    File { path: PathBuf },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ForcePreset {
    Zero,
    /// `a·cos(2πx)cos(2πy)`
    Cosine,
    /// `a·(0.2|x|² + 0.1x)`
    TiltedBowl,
}

fn one() -> f64 {
    1.0
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum FrictionSpec {
    Constant(f64),
    /// One value per angular node.
    Profile(Vec<f64>),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
pub enum GridSpec {
    Torus { n: usize },
    Disc { n_r: usize, n_th: usize },
}

impl GridSpec {
    pub fn build(&self) -> Result<Grid> {
        match *self {
            GridSpec::Torus { n } => Grid::torus(n),
            GridSpec::Disc { n_r, n_th } => Grid::disc(n_r, n_th),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunSection {
    pub t_end: f64,
    pub cfl: f64,
    pub snapshot_every: f64,
    pub diag_every: f64,
    #[serde(default)]
    pub seed: u64,
    pub initial: InitialSpec,
}

impl RunSection {
    pub fn run_config(&self) -> RunConfig {
        RunConfig {
            t_end: self.t_end,
            cfl: self.cfl,
            snapshot_every: self.snapshot_every,
            diag_every: self.diag_every,
            seed: self.seed,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum InitialSpec {
    Preset {
        name: InitialPreset,
        amplitude: f64,
    },
    /// Density and velocity snapshots (paths without extension).
    Snapshot { rho: PathBuf, u: PathBuf },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum InitialPreset {
    /// `ρ = 1 + a·cos(2πx)`, fluid at rest.
    Acoustic,
    /// `ρ = 1`, rigid rotation `u = a(−y, x)` (disc).
    Rotation,
    /// `ρ = 1 + a·sin(πx)cos(πy/2)`, rigid rotation `u = a(−y, x)` (disc).
    PerturbedRotation,
    /// Seeded band-limited perturbation of density and velocity (torus).
    Random,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputSection {
    pub dir: PathBuf,
    pub csv: bool,
    pub snapshots: bool,
    pub plots: bool,
}

impl Default for OutputSection {
    fn default() -> Self {
        Self {
            dir: PathBuf::from("out"),
            csv: true,
            snapshots: true,
            plots: false,
        }
    }
}

/// Sampling controls for the `oracle` command.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct OracleSection {
    pub samples: usize,
    /// Exponent; the inequality's own default when absent.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub p: Option<f64>,
    pub nu: f64,
}

impl Default for OracleSection {
    fn default() -> Self {
        Self {
            samples: 200,
            p: None,
            nu: 0.5,
        }
    }
}

/// Everything a run needs, built from a validated config.
#[derive(Debug, Clone)]
pub struct Scenario {
    pub params: FluidParams,
    pub initial: State,
    pub run: RunConfig,
}

impl Config {
    pub fn from_json(text: &str) -> Result<Self> {
        let value: serde_json::Value =
            serde_json::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        Self::from_value(value)
    }

    /// Accepts a config document or a run manifest, whose `config` entry is
    /// used.
    pub fn from_value(mut value: serde_json::Value) -> Result<Self> {
        if value.get("params").is_none() {
            if let Some(inner) = value.get_mut("config") {
                value = inner.take();
            }
        }
        let config: Config =
            serde_json::from_value(value).map_err(|e| Error::Config(e.to_string()))?;
        config.validate()?;
        Ok(config)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
        Self::from_json(&text)
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    /// Physical and numerical constraints that can be checked without
    /// building any field.
    pub fn validate(&self) -> Result<()> {
        let p = &self.params;
        let bad = |m: String| Err(Error::Config(m));
        if !(p.mu.is_finite() && p.mu > 0.0) {
            return bad(format!("params.mu must be > 0, got {}", p.mu));
        }
        if !(p.gamma.is_finite() && p.gamma > 1.0) {
            return bad(format!("params.gamma must be > 1, got {}", p.gamma));
        }
        if !(p.beta.is_finite() && p.beta > 0.0) {
            return bad(format!("params.beta must be > 0, got {}", p.beta));
        }
        if p.beta <= THEORY_BETA_MIN && !p.allow_outside_theory {
            return bad(format!(
                "params.beta = {} is outside the covered range beta > 4/3; \
                 set params.allow_outside_theory to run anyway",
                p.beta
            ));
        }
        if let ForceSpec::Preset { amplitude, .. } = p.force {
            if !amplitude.is_finite() {
                return bad("params.force.amplitude must be finite".into());
            }
        }
        match (&self.grid, &p.k) {
            (GridSpec::Torus { .. }, Some(_)) => {
                return bad("params.K only applies to the disc".into())
            }
            (GridSpec::Disc { .. }, None) => return bad("missing field `K` for a disc grid".into()),
            (GridSpec::Disc { n_th, .. }, Some(FrictionSpec::Profile(v))) if v.len() != *n_th => {
                return bad(format!("params.K profile needs {n_th} values, got {}", v.len()))
            }
            _ => {}
        }
        let ks: &[f64] = match &p.k {
            Some(FrictionSpec::Constant(k)) => std::slice::from_ref(k),
            Some(FrictionSpec::Profile(v)) => v,
            None => &[],
        };
        if ks.iter().any(|k| !(k.is_finite() && *k >= 0.0)) {
            return bad("params.K must be finite and >= 0".into());
        }
        self.grid.build().map_err(|e| Error::Config(format!("grid: {e}")))?;
        self.run
            .run_config()
            .validate()
            .map_err(|e| Error::Config(format!("run: {e}")))?;
        if let InitialSpec::Preset { name, amplitude } = self.run.initial {
            if !amplitude.is_finite() {
                return bad("run.initial.amplitude must be finite".into());
            }
            let torus = matches!(self.grid, GridSpec::Torus { .. });
            match name {
                InitialPreset::Rotation | InitialPreset::PerturbedRotation if torus => {
                    return bad("rotating initial data needs a disc grid".into())
                }
                InitialPreset::Random if !torus => {
                    return bad("random initial data needs a torus grid".into())
                }
                _ => {}
            }
        }
        if self.oracle.samples == 0 {
            return bad("oracle.samples must be positive".into());
        }
        Ok(())
    }

    pub fn grid(&self) -> Result<Grid> {
        self.grid.build()
    }

    pub fn fluid_params(&self) -> Result<FluidParams> {
        let grid = self.grid()?;
        let p = &self.params;
        let force = match &p.force {
            ForceSpec::Preset { name, amplitude } => force_preset(grid, *name, *amplitude)?,
            ForceSpec::File { path } => {
                let (_, f) = read_scalar(path)?;
                if *f.grid() != grid {
                    return Err(Error::Config(format!(
                        "force file {} does not match the configured grid",
                        path.display()
                    )));
                }
                f
            }
        };
        let params = FluidParams::new(p.mu, p.beta, p.gamma, force)?;
        match &p.k {
            Some(FrictionSpec::Constant(k)) => params.with_uniform_friction(*k),
            Some(FrictionSpec::Profile(v)) => params.with_friction(v.clone()),
            None => Ok(params),
        }
    }

    pub fn initial_state(&self) -> Result<State> {
        let grid = self.grid()?;
        match &self.run.initial {
            InitialSpec::Preset { name, amplitude } => {
                initial_preset(grid, *name, *amplitude, self.run.seed)
            }
            InitialSpec::Snapshot { rho, u } => {
                let (h, rho) = read_scalar(rho)?;
                let (_, u) = read_vector(u)?;
                if *rho.grid() != grid || *u.grid() != grid {
                    return Err(Error::Config(
                        "initial snapshots do not match the configured grid".into(),
                    ));
                }
                State::new(rho, u, h.time)
            }
        }
    }

    pub fn scenario(&self) -> Result<Scenario> {
        Ok(Scenario {
            params: self.fluid_params()?,
            initial: self.initial_state()?,
            run: self.run.run_config(),
        })
    }
}

pub fn force_preset(grid: Grid, name: ForcePreset, a: f64) -> Result<ScalarField> {
    match name {
        ForcePreset::Zero => Ok(ScalarField::zeros(grid)),
        ForcePreset::Cosine => {
            ScalarField::from_fn(grid, |x, y| a * (2.0 * PI * x).cos() * (2.0 * PI * y).cos())
        }
        ForcePreset::TiltedBowl => {
            ScalarField::from_fn(grid, |x, y| a * (0.2 * (x * x + y * y) + 0.1 * x))
        }
    }
}

/// Largest wavenumber of the random initial perturbation.
const RANDOM_MODES: i32 = 3;

pub fn initial_preset(grid: Grid, name: InitialPreset, a: f64, seed: u64) -> Result<State> {
    let rotation = |x: f64, y: f64| (-a * y, a * x);
    match name {
        InitialPreset::Acoustic => State::new(
            ScalarField::from_fn(grid, |x, _| 1.0 + a * (2.0 * PI * x).cos())?,
            VectorField::zeros(grid),
            0.0,
        ),
        InitialPreset::Rotation => State::new(
            ScalarField::constant(grid, 1.0),
            VectorField::from_fn(grid, rotation)?,
            0.0,
        ),
        InitialPreset::PerturbedRotation => State::new(
            ScalarField::from_fn(grid, |x, y| 1.0 + a * (PI * x).sin() * (0.5 * PI * y).cos())?,
            VectorField::from_fn(grid, rotation)?,
            0.0,
        ),
        InitialPreset::Random => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mut modes = Vec::new();
            for ky in -RANDOM_MODES..=RANDOM_MODES {
                for kx in -RANDOM_MODES..=RANDOM_MODES {
                    if (kx, ky) != (0, 0) {
                        let c: [f64; 3] = [rng.gen_range(-1.0..1.0), rng.gen(), rng.gen()];
                        let phase: [f64; 3] = [0, 1, 2].map(|_| rng.gen_range(0.0..2.0 * PI));
                        modes.push((kx as f64, ky as f64, c, phase));
                    }
                }
            }
            // each component is bounded by `a`
            let scale: [f64; 3] = [0, 1, 2].map(|i| {
                let s: f64 = modes.iter().map(|m| m.2[i].abs()).sum();
                a / s.max(f64::MIN_POSITIVE)
            });
            let wave = |i: usize, x: f64, y: f64| -> f64 {
                scale[i]
                    * modes
                        .iter()
                        .map(|(kx, ky, c, ph)| c[i] * (2.0 * PI * (kx * x + ky * y) + ph[i]).cos())
                        .sum::<f64>()
            };
            State::new(
                ScalarField::from_fn(grid, |x, y| 1.0 + wave(0, x, y))?,
                VectorField::from_fn(grid, |x, y| (wave(1, x, y), wave(2, x, y)))?,
                0.0,
            )
        }
    }
}
