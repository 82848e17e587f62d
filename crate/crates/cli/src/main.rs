use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use vk_ns2d::cli::{
    cmd_fit, cmd_green_check, cmd_oracle, cmd_run, cmd_steady, exit_code, preset, with_overrides,
    Config, EXIT_INVALID,
};
use vk_ns2d::{Error, Result};

/// Compressible Navier-Stokes runs, equilibrium solves and numerical checks
/// on the periodic torus and the unit disc.
///
/// Exit codes: 0 success, 2 invalid configuration or input, 3 numerical
/// failure or a failed check. `VK_NS2D_THREADS` caps the worker threads.
#[derive(Parser)]
#[command(name = "vk-ns2d", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    source: Source,
}

#[derive(Args)]
struct Source {
    /// JSON config, or the manifest of an earlier run.
    #[arg(long, global = true, conflicts_with = "preset")]
    config: Option<PathBuf>,
    /// Compiled-in scenario: acoustic, spin-down, forced-disc, vk-periodic.
    #[arg(long, global = true)]
    preset: Option<String>,
    /// Output directory, overriding the config.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Random seed, overriding the config.
    #[arg(long, global = true)]
    seed: Option<u64>,
}

#[derive(Subcommand)]
enum Command {
    /// Integrate a scenario and write diag.csv, snapshots and a manifest.
    Run,
    /// Solve for the equilibrium density of the configured force and mass.
    Steady,
    /// Refinement study of the Green-function representation of G.
    GreenCheck,
    /// Run an inequality check: poincare-sobolev, div-curl,
    /// div-curl-weighted or zlotnik.
    Oracle { name: String },
    /// Log-linear decay fit of one column of a diagnostics CSV.
    Fit {
        csv: PathBuf,
        #[arg(long, default_value = "rho_dev_l2")]
        column: String,
        /// Fit window `lo,hi`; defaults to 1 up to the last sample.
        #[arg(long, value_parser = parse_window)]
        window: Option<(f64, f64)>,
    },
}

fn parse_window(s: &str) -> std::result::Result<(f64, f64), String> {
    let (a, b) = s.split_once(',').ok_or("expected lo,hi")?;
    let p = |v: &str| v.trim().parse::<f64>().map_err(|e| format!("{v}: {e}"));
    Ok((p(a)?, p(b)?))
}

impl Source {
    fn load(&self, fallback: Option<&str>) -> Result<Config> {
        let config = match (&self.config, self.preset.as_deref().or(fallback)) {
            (Some(path), _) => Config::load(path)?,
            (None, Some(name)) => preset(name)?,
            (None, None) => return Err(Error::Config("give --config <path> or --preset <name>".into())),
        };
        let config = with_overrides(config, self.out.clone(), self.seed);
        config.validate()?;
        Ok(config)
    }
}

fn default_preset(oracle: &str) -> &'static str {
    match oracle {
        "div-curl" | "div-curl-weighted" => "forced-disc",
        _ => "acoustic",
    }
}

fn dispatch(cli: &Cli, out: &mut dyn Write) -> Result<i32> {
    let src = &cli.source;
    match &cli.command {
        Command::Run => cmd_run(&src.load(None)?, out),
        Command::Steady => cmd_steady(&src.load(None)?, out),
        Command::GreenCheck => cmd_green_check(&src.load(Some("forced-disc"))?, out),
        Command::Oracle { name } => cmd_oracle(name, &src.load(Some(default_preset(name)))?, out),
        Command::Fit { csv, column, window } => cmd_fit(csv, column, *window, out),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let stdout = std::io::stdout();
    let code = match dispatch(&cli, &mut stdout.lock()) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    };
    ExitCode::from(u8::try_from(code).unwrap_or(EXIT_INVALID as u8))
}
