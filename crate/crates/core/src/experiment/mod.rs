//! Batch experiment harness: configuration, multi-seed execution,
//! aggregation with confidence intervals, fairness reporting, hyperparameter
//! search, and CSV output.

pub mod config;
pub mod output;
pub mod runner;
pub mod stats;
pub mod tuner;

pub use config::{ExperimentConfig, ResolvedConfig, ScenarioSource, SchedulerKind};
pub use runner::{run_experiment, run_one, RunTrace};
pub use stats::{aggregate, fairness_report, Aggregate, FairnessReport};
pub use tuner::{tune, SearchSpec, TuneEnv, TuneOutcome, TuneRange};

use crate::scenario::ScenarioError;
use crate::scheduler::SchedulerError;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ExperimentError {
    #[error(transparent)]
    Config(#[from] config::ConfigError),
    #[error(transparent)]
    Scenario(#[from] ScenarioError),
    #[error(transparent)]
    Scheduler(#[from] SchedulerError),
    #[error("aggregation error: {0}")]
    Aggregation(String),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
    #[error("parse error: {0}")]
    Parse(String),
}
