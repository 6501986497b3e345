//! Batch driver for the thermoplate experiments: flat key-value run
//! configurations, sweeps over dimensions, times and ε, and CSV reports.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod commands;
pub mod config;
pub mod error;
pub mod format;

pub use config::{Experiment, GridSpec, RunConfig};
pub use error::CliError;
