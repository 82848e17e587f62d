//! Compiled-in scenario configs.

use std::path::PathBuf;

use super::config::{
    Config, ForcePreset, ForceSpec, FrictionSpec, GridSpec, InitialPreset, InitialSpec,
    OracleSection, OutputSection, ParamsSection, RunSection,
};
use crate::{Error, Result};

pub const PRESET_NAMES: [&str; 4] = ["acoustic", "spin-down", "forced-disc", "vk-periodic"];

struct PresetDef {
    beta: f64,
    gamma: f64,
    force: (ForcePreset, f64),
    k: Option<f64>,
    grid: GridSpec,
    initial: (InitialPreset, f64),
    t_end: f64,
    cfl: f64,
    snapshot_every: f64,
    diag_every: f64,
}

fn definition(name: &str) -> Option<PresetDef> {
    Some(match name {
        "acoustic" => PresetDef {
            beta: 2.0,
            gamma: 2.0,
            force: (ForcePreset::Zero, 0.0),
            k: None,
            grid: GridSpec::Torus { n: 64 },
            initial: (InitialPreset::Acoustic, 0.1),
            t_end: 10.0,
            cfl: 0.9,
            snapshot_every: 1.0,
            diag_every: 0.1,
        },
        "spin-down" => PresetDef {
            beta: 2.0,
            gamma: 2.0,
            force: (ForcePreset::Zero, 0.0),
            k: Some(1.0),
            grid: GridSpec::Disc { n_r: 48, n_th: 96 },
            initial: (InitialPreset::Rotation, 0.1),
            t_end: 1.0,
            cfl: 0.5,
            snapshot_every: 0.25,
            diag_every: 0.02,
        },
        "forced-disc" => PresetDef {
            beta: 2.0,
            gamma: 2.0,
            force: (ForcePreset::TiltedBowl, 1.0),
            k: Some(1.0),
            grid: GridSpec::Disc { n_r: 32, n_th: 64 },
            initial: (InitialPreset::PerturbedRotation, 0.1),
            t_end: 8.0,
            cfl: 0.5,
            snapshot_every: 1.0,
            diag_every: 0.05,
        },
        "vk-periodic" => PresetDef {
            beta: 3.0,
            gamma: 1.4,
            force: (ForcePreset::Zero, 0.0),
            k: None,
            grid: GridSpec::Torus { n: 32 },
            initial: (InitialPreset::Random, 0.2),
            t_end: 2.0,
            cfl: 0.9,
            snapshot_every: 0.5,
            diag_every: 0.05,
        },
        _ => return None,
    })
}

pub fn preset(name: &str) -> Result<Config> {
    let s = definition(name).ok_or_else(|| {
        Error::Config(format!(
            "unknown preset `{name}` (expected one of {})",
            PRESET_NAMES.join(", ")
        ))
    })?;
    Ok(Config {
        params: ParamsSection {
            mu: 1.0,
            beta: s.beta,
            gamma: s.gamma,
            force: ForceSpec::Preset {
                name: s.force.0,
                amplitude: s.force.1,
            },
            k: s.k.map(FrictionSpec::Constant),
            allow_outside_theory: false,
        },
        grid: s.grid,
        run: RunSection {
            t_end: s.t_end,
            cfl: s.cfl,
            snapshot_every: s.snapshot_every,
            diag_every: s.diag_every,
            seed: 0,
            initial: InitialSpec::Preset {
                name: s.initial.0,
                amplitude: s.initial.1,
            },
        },
        output: OutputSection {
            dir: PathBuf::from("out").join(name),
            ..OutputSection::default()
        },
        oracle: OracleSection::default(),
    })
}
