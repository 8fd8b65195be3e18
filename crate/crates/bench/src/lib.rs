//! Monte Carlo benchmark harness for the `nano-filter` estimators.
//!
//! [`montecarlo`] runs paired trials of several filters on shared simulated
//! trajectories, [`sweep`] repeats that over a model-mismatch grid, and
//! [`ablation`] compares the NANO variants. [`report`] writes the results as
//! CSV and plain text, and [`cli`] wires everything to the `nano-bench`
//! command.

pub mod ablation;
pub mod cli;
pub mod config;
pub mod error;
pub mod metrics;
pub mod montecarlo;
pub mod report;
pub mod sweep;

pub use error::{BenchError, Result};
pub use montecarlo::{run_monte_carlo, run_trial, BenchmarkReport, FilterReport, RunOptions, TrialResult};
