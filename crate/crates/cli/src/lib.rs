//! Experiment harness for `leaky-core`: configuration, runs and CSV output.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod config;
pub mod error;
pub mod experiment;
pub mod output;
pub mod selftest;

pub use config::{ExperimentConfig, ExperimentKind};
pub use error::CliError;
pub use experiment::{run, RunOutput};
