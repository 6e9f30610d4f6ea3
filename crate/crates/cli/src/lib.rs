//! Experiment harness and command implementations for the `tricolor` binary.

pub mod algo;
pub mod check;
pub mod config;
pub mod error;
pub mod experiment;

pub use algo::{run_algorithm, Algorithm, Init, SolveOptions};
pub use check::{check, CheckReport};
pub use config::{ExperimentSpec, InstanceSource};
pub use error::{HarnessError, Result};
pub use experiment::{run_experiment, ExperimentReport, RunRecord, SummaryRow};
