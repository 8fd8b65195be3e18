//! Ablation of the NANO design choices across the three benchmarks.

use nano_filter::models::{scenario_models, ModelKind, ScenarioConfig};
use nano_filter::{FilterKind, FilterSettings};

use crate::error::Result;
use crate::montecarlo::{run_monte_carlo, BenchmarkReport, RunOptions};

/// Variants compared in the ablation, from least to most complete.
pub const ABLATION_FILTERS: [FilterKind; 3] = [FilterKind::NanoNopd, FilterKind::NanoEkf, FilterKind::Nano];

#[derive(Debug, Clone, PartialEq)]
pub struct AblationCell {
    pub model: ModelKind,
    pub filter: FilterKind,
    pub mean_rmse: Option<f64>,
    pub mean_update_ms: Option<f64>,
    pub divergences: usize,
    pub trials: usize,
}

impl AblationCell {
    /// More than half the trials diverged.
    pub fn is_diverged(&self) -> bool {
        2 * self.divergences > self.trials
    }

    /// RMSE as printed in the table: `diverge` or the mean, in scientific
    /// notation below 0.01.
    pub fn rmse_label(&self) -> String {
        match (self.is_diverged(), self.mean_rmse) {
            (true, _) | (false, None) => "diverge".to_string(),
            (false, Some(v)) if v.abs() < 1e-2 => format!("{v:.3e}"),
            (false, Some(v)) => format!("{v:.3}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct AblationTable {
    pub cells: Vec<AblationCell>,
    pub reports: Vec<BenchmarkReport>,
}

impl AblationTable {
    pub fn cell(&self, model: ModelKind, filter: FilterKind) -> Option<&AblationCell> {
        self.cells.iter().find(|c| c.model == model && c.filter == filter)
    }
}

/// Runs [`ABLATION_FILTERS`] on each model at nominal settings. `base`
/// supplies horizon, trials and seed; its model field is ignored. Update
/// timing is always recorded.
pub fn ablate(models: &[ModelKind], base: &ScenarioConfig, settings: &FilterSettings) -> Result<AblationTable> {
    let opts = RunOptions { settings: *settings, timing: true };
    let mut cells = Vec::new();
    let mut reports = Vec::new();
    for &model in models {
        let cfg = ScenarioConfig { model, ..base.clone() };
        let report = run_monte_carlo(&scenario_models(&cfg)?, &ABLATION_FILTERS, &opts)?;
        for f in &report.filters {
            cells.push(AblationCell {
                model,
                filter: f.filter,
                mean_rmse: f.rmse_summary().map(|s| s.mean),
                mean_update_ms: f.mean_update_ms(),
                divergences: f.divergences(),
                trials: f.trials.len(),
            });
        }
        reports.push(report);
    }
    Ok(AblationTable { cells, reports })
}
