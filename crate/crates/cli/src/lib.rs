//! Experiment driver: configuration, matrix files, commands and reports.

pub mod commands;
pub mod config;
pub mod matrix_io;
pub mod report;

pub use commands::{run, CliError};
pub use config::{Cli, Command};
pub use report::ExperimentReport;
