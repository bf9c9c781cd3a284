//! Experiment configuration, command dispatch and on-disk artifacts.

mod config;
mod run;

pub use config::{parse_rational, ExperimentConfig, GammaEntry, COMMANDS, KEYS, OUT_DIR_ENV};
pub use run::{exit_code, run, RunOutcome};
