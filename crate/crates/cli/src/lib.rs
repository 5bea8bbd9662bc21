//! Experiment runner for the `stcm` binary: TOML configs in, CSV files out.

pub mod commands;
pub mod config;
pub mod error;
pub mod report;

pub use commands::{
    cmd_ber_sweep, cmd_coupling_matrix, cmd_optimize, cmd_selection_compare, search_spec, SweepAxis,
};
pub use config::{ExperimentConfig, Overrides};
pub use error::{CliError, Result};
