//! Configuration, scenario presets and the command entry points behind the
//! `vk-ns2d` binary.

mod commands;
mod config;
pub mod green;
mod plot;
mod presets;

pub use commands::{
    cmd_fit, cmd_green_check, cmd_oracle, cmd_run, cmd_steady, exit_code, green_check_map,
    with_overrides, Manifest, DIAG_FILE, EXIT_INVALID, EXIT_NUMERICAL, EXIT_OK, MANIFEST_FILE,
    ORACLE_NAMES, PLOT_FILE,
};
pub use config::{
    force_preset, initial_preset, Config, ForcePreset, ForceSpec, FrictionSpec, GridSpec,
    InitialPreset, InitialSpec, OracleSection, OutputSection, ParamsSection, RunSection, Scenario,
    THEORY_BETA_MIN,
};
pub use plot::plot_decay;
pub use presets::{preset, PRESET_NAMES};
