//! Command entry points. Each returns the process exit code on success;
//! errors map to codes through [`exit_code`].

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use serde_json::json;

use super::config::{force_preset, Config, ForceSpec, FrictionSpec, GridSpec};
use super::green::{green_study, observed_orders, STUDY_LEVELS};
use super::plot::plot_decay;
use crate::diagnostics::{decay_fit, read_series, write_csv};
use crate::elliptic::ConformalMap;
use crate::field::snapshot::{write_scalar, write_vector};
use crate::field::Grid;
use crate::integrate::run_with;
use crate::oracles::{
    check_divcurl_on, check_divcurl_weighted_on, check_poincare_sobolev_on, zlotnik_analytic_cases,
};
use crate::physics::{FluidParams, State};
use crate::steady::{solve_steady, steady_residual, DEFAULT_TOL};
use crate::{Error, Result};

pub const EXIT_OK: i32 = 0;
/// Invalid configuration or input.
pub const EXIT_INVALID: i32 = 2;
/// Numerical failure, or a check that ran and did not pass.
pub const EXIT_NUMERICAL: i32 = 3;

pub const ORACLE_NAMES: [&str; 4] = ["poincare-sobolev", "div-curl", "div-curl-weighted", "zlotnik"];

pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::NumericalAbort { .. }
        | Error::NonFinite { .. }
        | Error::Bracket(_)
        | Error::Singular(_)
        | Error::Inconclusive(_)
        | Error::Compatibility { .. } => EXIT_NUMERICAL,
        _ => EXIT_INVALID,
    }
}

/// Everything needed to repeat a run, written next to its outputs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Manifest {
    pub version: String,
    pub seed: u64,
    pub steps: usize,
    pub t_final: f64,
    pub files: Vec<String>,
    pub config: Config,
}

pub const DIAG_FILE: &str = "diag.csv";
pub const MANIFEST_FILE: &str = "manifest.json";
pub const PLOT_FILE: &str = "decay.png";

fn write_state(dir: &Path, stem: &str, s: &State) -> Result<PathBuf> {
    let rho = write_scalar(&dir.join(format!("{stem}_rho")), s.rho(), s.t(), "rho")?;
    write_vector(&dir.join(format!("{stem}_u")), s.u(), s.t(), "u")?;
    Ok(rho)
}

fn file_name(p: &Path) -> String {
    p.file_name().map(|n| n.to_string_lossy().into_owned()).unwrap_or_default()
}

pub fn cmd_run(config: &Config, out: &mut dyn Write) -> Result<i32> {
    let sc = config.scenario()?;
    let dir = &config.output.dir;
    fs::create_dir_all(dir)?;
    let mut files = Vec::new();
    let mut k = 0;
    let result = run_with(&sc.run, &sc.params, sc.initial, |s| {
        if config.output.snapshots {
            let stem = format!("snap_{k:04}");
            write_state(dir, &stem, s)?;
            files.push(format!("{stem}_rho.bin"));
            files.push(format!("{stem}_u.bin"));
        }
        k += 1;
        Ok(())
    });
    let output = match result {
        Err(Error::NumericalAbort { t, reason, last_good }) => {
            let path = write_state(dir, "last_good", &last_good)?;
            return Err(Error::NumericalAbort {
                t,
                reason: format!(
                    "{reason}; last good state (t = {}) written to {}",
                    last_good.t(),
                    path.display()
                ),
                last_good,
            });
        }
        r => r?,
    };
    if config.output.csv {
        let path = dir.join(DIAG_FILE);
        write_csv(&output.records, fs::File::create(&path)?)?;
        files.push(file_name(&path));
    }
    if config.output.plots {
        let path = dir.join(PLOT_FILE);
        plot_decay(&output.records, &path)?;
        files.push(file_name(&path));
    }
    let manifest = Manifest {
        version: env!("CARGO_PKG_VERSION").to_string(),
        seed: config.run.seed,
        steps: output.steps,
        t_final: output.final_state.t(),
        files,
        config: config.clone(),
    };
    fs::write(dir.join(MANIFEST_FILE), serde_json::to_string_pretty(&manifest)?)?;
    let summary = json!({
        "dir": dir,
        "steps": output.steps,
        "t_final": manifest.t_final,
        "rows": output.records.len(),
    });
    writeln!(out, "{summary}")?;
    Ok(EXIT_OK)
}

pub fn cmd_steady(config: &Config, out: &mut dyn Write) -> Result<i32> {
    let params = config.fluid_params()?;
    let initial = config.initial_state()?;
    let (f, gamma) = (params.force(), params.gamma());
    let ss = solve_steady(f, initial.rho().integral(), gamma, DEFAULT_TOL)?;
    let residual = steady_residual(&ss, f, gamma)?;
    if config.output.snapshots {
        fs::create_dir_all(&config.output.dir)?;
        write_scalar(&config.output.dir.join("steady_rho"), ss.rho_s(), 0.0, "rho_s")?;
    }
    let report = json!({
        "c0": ss.c0(),
        "total_mass": ss.total_mass(),
        "residual": residual,
        "rho_min": ss.rho_s().min(),
        "rho_max": ss.rho_s().max(),
    });
    writeln!(out, "{report}")?;
    Ok(EXIT_OK)
}

/// Möbius map used alongside the identity in the green check.
pub fn green_check_map() -> ConformalMap {
    ConformalMap::mobius([0.2, -0.1], 0.3).expect("point inside the disc")
}

/// Resamples the configured physical parameters on another disc grid.
fn params_builder(config: &Config) -> Result<impl Fn(Grid) -> Result<FluidParams> + '_> {
    let p = &config.params;
    let ForceSpec::Preset { name, amplitude } = p.force else {
        return Err(Error::Config("green-check needs a preset force".into()));
    };
    let k = match p.k {
        Some(FrictionSpec::Constant(k)) => k,
        None => 0.0,
        Some(FrictionSpec::Profile(_)) => {
            return Err(Error::Config("green-check needs a constant K".into()))
        }
    };
    Ok(move |grid: Grid| {
        FluidParams::new(p.mu, p.beta, p.gamma, force_preset(grid, name, amplitude)?)?
            .with_uniform_friction(k)
    })
}

pub fn cmd_green_check(config: &Config, out: &mut dyn Write) -> Result<i32> {
    let build = params_builder(config)?;
    let mut monotone = true;
    let mut maps = Vec::new();
    for (label, map) in [("identity", ConformalMap::Identity), ("mobius", green_check_map())] {
        let levels = green_study(&STUDY_LEVELS, &build, &map)?;
        monotone &= levels.windows(2).all(|w| w[1].max_error < w[0].max_error);
        let max_error = levels.last().map_or(0.0, |l| l.max_error);
        maps.push(json!({
            "map": label,
            "max_error": max_error,
            "levels": levels,
            "orders": observed_orders(&levels),
        }));
    }
    writeln!(out, "{}", serde_json::to_string_pretty(&json!({ "maps": maps, "monotone": monotone }))?)?;
    Ok(if monotone { EXIT_OK } else { EXIT_NUMERICAL })
}

pub fn cmd_oracle(name: &str, config: &Config, out: &mut dyn Write) -> Result<i32> {
    let o = &config.oracle;
    let seed = config.run.seed;
    let grid = config.grid()?;
    let report = match (name, config.grid) {
        ("poincare-sobolev", GridSpec::Torus { n }) => {
            check_poincare_sobolev_on(n, o.samples, o.p.unwrap_or(4.0), seed)?
        }
        ("div-curl", GridSpec::Disc { .. }) => check_divcurl_on(grid, o.samples, o.p.unwrap_or(2.0), seed)?,
        ("div-curl-weighted", GridSpec::Disc { .. }) => {
            check_divcurl_weighted_on(grid, o.samples, o.nu, seed)?
        }
        ("zlotnik", _) => {
            let cases = zlotnik_analytic_cases()?;
            let pass = cases.iter().all(|(_, c)| c.holds);
            let cases: Vec<_> = cases
                .into_iter()
                .map(|(case, c)| json!({ "case": case, "outcome": c }))
                .collect();
            writeln!(out, "{}", serde_json::to_string_pretty(&json!({ "name": name, "cases": cases, "pass": pass }))?)?;
            return Ok(if pass { EXIT_OK } else { EXIT_NUMERICAL });
        }
        ("poincare-sobolev", _) => return Err(Error::Config("poincare-sobolev needs a torus grid".into())),
        ("div-curl" | "div-curl-weighted", _) => {
            return Err(Error::Config(format!("{name} needs a disc grid")))
        }
        _ => {
            return Err(Error::Config(format!(
                "unknown oracle `{name}` (expected one of {})",
                ORACLE_NAMES.join(", ")
            )))
        }
    };
    writeln!(out, "{}", serde_json::to_string_pretty(&report)?)?;
    Ok(if report.pass { EXIT_OK } else { EXIT_NUMERICAL })
}

/// Fits `column` of a diagnostics CSV over `window`; the window defaults to
/// `[1, last time]`.
pub fn cmd_fit(csv: &Path, column: &str, window: Option<(f64, f64)>, out: &mut dyn Write) -> Result<i32> {
    let file = fs::File::open(csv)
        .map_err(|e| Error::Config(format!("cannot read {}: {e}", csv.display())))?;
    let series = read_series(file, column)?;
    let window = window.unwrap_or((1.0, series.last().map_or(1.0, |p| p.0)));
    let fit = decay_fit(&series, window)?;
    writeln!(out, "{}", serde_json::to_string_pretty(&fit)?)?;
    Ok(EXIT_OK)
}

/// Applies the command-line overrides to a loaded config.
pub fn with_overrides(mut config: Config, out_dir: Option<PathBuf>, seed: Option<u64>) -> Config {
    if let Some(d) = out_dir {
        config.output.dir = d;
    }
    if let Some(s) = seed {
        config.run.seed = s;
    }
    config
}

