//! Paired Monte Carlo trials.
//!
//! Every trial simulates one trajectory from the scenario's truth model and
//! runs each requested filter on that same trajectory, so per-trial RMSEs of
//! different filters are paired samples.

use std::time::Duration;

use nalgebra::DVector;
use nano_filter::linalg::is_positive_definite;
use nano_filter::models::{simulate_trajectory, Scenario, ScenarioConfig, Trajectory};
use nano_filter::{Estimator, FilterKind, FilterSettings, GaussianBelief, SigmaPointRule};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{BenchError, Result};
use crate::metrics::{rmse, Summary};

/// Any estimate component beyond this magnitude counts as divergence.
pub const DIVERGENCE_BOUND: f64 = 1e6;
/// Caps the number of worker threads; `0` or unset means one per core.
pub const THREADS_ENV: &str = "NANO_BENCH_THREADS";
/// Name of the per-trial generator, recorded in summaries.
pub const RNG_NAME: &str = "ChaCha8Rng (rand_chacha 0.9), seed_from_u64(seed + trial)";

#[derive(Debug, Clone, PartialEq)]
pub struct TrialResult {
    pub trial: usize,
    /// `None` when the trial diverged.
    pub rmse: Option<f64>,
    pub diverged: bool,
    /// Measurement updates completed before the run ended.
    pub steps: usize,
    /// Mean wall-clock milliseconds per update, when timing was requested.
    pub update_ms: Option<f64>,
}

#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct RunOptions {
    pub settings: FilterSettings,
    /// Record update timings. Off by default so outputs are reproducible.
    pub timing: bool,
}

/// Why a filter run was abandoned.
#[derive(Debug, Clone, PartialEq)]
pub enum Divergence {
    /// The update lost positive definiteness.
    PdFailure,
    /// The update returned a covariance that fails the Cholesky test.
    NonPdPosterior,
    /// An estimate component was non-finite or beyond [`DIVERGENCE_BOUND`].
    BlowUp,
    /// Any other error raised by the filter.
    Error(String),
}

/// Raw outcome of one filter pass over a trajectory.
#[derive(Debug, Clone, PartialEq)]
pub struct FilterRun {
    /// Posterior means for `t = 1..=steps`.
    pub estimates: Vec<DVector<f64>>,
    pub divergence: Option<Divergence>,
    pub update_time: Duration,
}

impl FilterRun {
    pub fn steps(&self) -> usize {
        self.estimates.len()
    }

    pub fn diverged(&self) -> bool {
        self.divergence.is_some()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FilterReport {
    pub filter: FilterKind,
    pub trials: Vec<TrialResult>,
    /// Fingerprint of the trajectory each trial consumed.
    pub fingerprints: Vec<u64>,
}

impl FilterReport {
    /// RMSE statistics over the trials that did not diverge.
    pub fn rmse_summary(&self) -> Option<Summary> {
        let values: Vec<f64> = self.trials.iter().filter_map(|t| t.rmse).collect();
        Summary::of(&values)
    }

    pub fn divergences(&self) -> usize {
        self.trials.iter().filter(|t| t.diverged).count()
    }

    /// Mean update time over all recorded steps.
    pub fn mean_update_ms(&self) -> Option<f64> {
        let (mut total, mut steps) = (0.0, 0usize);
        for t in &self.trials {
            if let Some(ms) = t.update_ms {
                total += ms * t.steps as f64;
                steps += t.steps;
            }
        }
        (steps > 0).then(|| total / steps as f64)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BenchmarkReport {
    pub scenario: String,
    pub config: ScenarioConfig,
    pub rule: SigmaPointRule,
    pub filters: Vec<FilterReport>,
}

impl BenchmarkReport {
    pub fn filter(&self, kind: FilterKind) -> Option<&FilterReport> {
        self.filters.iter().find(|f| f.filter == kind)
    }
}

/// Draws the trajectory of trial `trial` from the truth model.
pub fn simulate_trial(scenario: &Scenario, trial: usize) -> Result<Trajectory> {
    let mut rng = ChaCha8Rng::seed_from_u64(scenario.config.seed.wrapping_add(trial as u64));
    Ok(simulate_trajectory(
        &scenario.truth,
        &scenario.process_noise,
        &scenario.measurement_noise,
        &scenario.initial_truth,
        scenario.config.horizon,
        &mut rng,
    )?)
}

/// Runs `est` over `traj` with the scenario's filter-side model, stopping at
/// the first sign of divergence.
pub fn run_filter(est: &Estimator, scenario: &Scenario, traj: &Trajectory) -> FilterRun {
    let model = &scenario.filter_view;
    let mut belief = GaussianBelief::from(scenario.initial_belief.clone());
    let mut run =
        FilterRun { estimates: Vec::with_capacity(traj.horizon()), divergence: None, update_time: Duration::ZERO };
    for t in 0..traj.horizon() {
        let (post, diag) = match est.step(&belief, &traj.inputs[t], t, &traj.measurements[t], model) {
            Ok(out) => out,
            Err(e) => {
                run.divergence = Some(Divergence::Error(e.to_string()));
                break;
            }
        };
        run.update_time += diag.update_time;
        if diag.pd_failure {
            run.divergence = Some(Divergence::PdFailure);
            break;
        }
        if post.mean.iter().any(|v| !v.is_finite() || v.abs() > DIVERGENCE_BOUND) {
            run.divergence = Some(Divergence::BlowUp);
            break;
        }
        if !is_positive_definite(&post.cov) {
            run.divergence = Some(Divergence::NonPdPosterior);
            break;
        }
        run.estimates.push(post.mean.clone());
        belief = post;
    }
    run
}

fn summarize(trial: usize, run: &FilterRun, traj: &Trajectory, timing: bool) -> Result<TrialResult> {
    let steps = run.steps();
    let rmse = if run.diverged() { None } else { Some(rmse(&traj.states[1..], &run.estimates)?) };
    let update_ms = (timing && steps > 0).then(|| run.update_time.as_secs_f64() * 1e3 / steps as f64);
    Ok(TrialResult { trial, rmse, diverged: run.diverged(), steps, update_ms })
}

fn estimators(scenario: &Scenario, kinds: &[FilterKind], settings: &FilterSettings) -> Result<Vec<Estimator>> {
    kinds
        .iter()
        .map(|&k| {
            let est = Estimator::new(k, settings);
            est.check_model(&scenario.filter_view)?;
            Ok(est)
        })
        .collect()
}

/// Runs one trial of one filter.
pub fn run_trial(scenario: &Scenario, kind: FilterKind, trial: usize, opts: &RunOptions) -> Result<TrialResult> {
    let est = estimators(scenario, &[kind], &opts.settings)?.remove(0);
    let traj = simulate_trial(scenario, trial)?;
    summarize(trial, &run_filter(&est, scenario, &traj), &traj, opts.timing)
}

/// Worker count requested through [`THREADS_ENV`]; `0` means automatic.
pub fn thread_limit() -> Result<usize> {
    match std::env::var(THREADS_ENV) {
        Ok(v) if !v.trim().is_empty() => v
            .trim()
            .parse()
            .map_err(|_| BenchError::Config(format!("{THREADS_ENV} must be a non-negative integer, got '{v}'"))),
        _ => Ok(0),
    }
}

/// Runs `config.trials` paired trials of every filter in `kinds`.
///
/// Trials execute in parallel; results are aggregated in trial order so the
/// report does not depend on scheduling.
pub fn run_monte_carlo(scenario: &Scenario, kinds: &[FilterKind], opts: &RunOptions) -> Result<BenchmarkReport> {
    let ests = estimators(scenario, kinds, &opts.settings)?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(thread_limit()?)
        .build()
        .map_err(|e| BenchError::Config(format!("cannot start worker pool: {e}")))?;
    let per_trial: Vec<(u64, Vec<TrialResult>)> = pool.install(|| {
        (0..scenario.config.trials)
            .into_par_iter()
            .map(|trial| {
                let traj = simulate_trial(scenario, trial)?;
                let results = ests
                    .iter()
                    .map(|est| summarize(trial, &run_filter(est, scenario, &traj), &traj, opts.timing))
                    .collect::<Result<Vec<_>>>()?;
                Ok((traj.fingerprint(), results))
            })
            .collect::<Result<Vec<_>>>()
    })?;

    let mut filters: Vec<FilterReport> = kinds
        .iter()
        .map(|&filter| FilterReport {
            filter,
            trials: Vec::with_capacity(per_trial.len()),
            fingerprints: Vec::with_capacity(per_trial.len()),
        })
        .collect();
    for (fingerprint, results) in per_trial {
        for (report, result) in filters.iter_mut().zip(results) {
            report.trials.push(result);
            report.fingerprints.push(fingerprint);
        }
    }
    Ok(BenchmarkReport {
        scenario: scenario.label(),
        config: scenario.config.clone(),
        rule: opts.settings.rule,
        filters,
    })
}
