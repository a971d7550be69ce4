//! Configuration, result files, and the experiment dispatcher used by the CLI.

pub mod config;
pub mod output;
pub mod run;

pub use config::{parse_config, Experiment, ExperimentConfig, FieldSpec};
pub use run::run_experiment;
