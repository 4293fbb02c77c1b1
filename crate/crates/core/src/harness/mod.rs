//! Experiment configs, the studies built on them, reports and the CLI.

pub mod cli;
pub mod config;
pub mod experiments;
pub mod report;

pub use cli::{run_cli, Cli, Command};
pub use config::{SuiteConfig, DEFAULT_CONFIG};
pub use experiments::{
    clipping_study, constants_table, impurity_experiment, refinement_study, verify_suite, volume_scaling_study,
    RunContext,
};
pub use report::{write_csv, Assertion, PValue, ReportRow, CSV_HEADER};
