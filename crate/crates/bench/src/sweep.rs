//! Model-mismatch sweeps over a scenario's declared level grid.

use nano_filter::models::{scenario_models, Mismatch, MismatchKind, ModelKind, ScenarioConfig};
use nano_filter::FilterKind;

use crate::error::{BenchError, Result};
use crate::montecarlo::{run_monte_carlo, BenchmarkReport, RunOptions};

#[derive(Debug, Clone, PartialEq)]
pub struct SweepCell {
    pub level: f64,
    pub filter: FilterKind,
    /// Mean over non-diverged trials; `None` if every trial diverged.
    pub mean_rmse: Option<f64>,
    pub divergences: usize,
    pub trials: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepTable {
    pub model: ModelKind,
    pub kind: MismatchKind,
    pub levels: Vec<f64>,
    pub filters: Vec<FilterKind>,
    /// Level-major: all filters of `levels[0]`, then `levels[1]`, ...
    pub cells: Vec<SweepCell>,
    pub reports: Vec<BenchmarkReport>,
}

impl SweepTable {
    pub fn cell(&self, level: f64, filter: FilterKind) -> Option<&SweepCell> {
        self.cells.iter().find(|c| c.filter == filter && (c.level - level).abs() < 1e-12)
    }
}

/// Checks every level against the model's grid for `kind`.
pub fn check_levels(model: ModelKind, kind: MismatchKind, levels: &[f64]) -> Result<()> {
    let grid = model.grid(kind);
    for &level in levels {
        if !grid.iter().any(|g| (g - level).abs() < 1e-9) {
            return Err(BenchError::UnknownLevel { level, grid: grid.to_vec() });
        }
    }
    Ok(())
}

/// One Monte Carlo run per level, all sharing `base.seed`, so a level of
/// zero reproduces the nominal scenario.
pub fn sweep_mismatch(
    base: &ScenarioConfig,
    kind: MismatchKind,
    levels: &[f64],
    filters: &[FilterKind],
    opts: &RunOptions,
) -> Result<SweepTable> {
    check_levels(base.model, kind, levels)?;
    let mut cells = Vec::with_capacity(levels.len() * filters.len());
    let mut reports = Vec::with_capacity(levels.len());
    for &level in levels {
        let cfg = base.clone().with_mismatch(Mismatch { kind, level });
        let report = run_monte_carlo(&scenario_models(&cfg)?, filters, opts)?;
        for f in &report.filters {
            cells.push(SweepCell {
                level,
                filter: f.filter,
                mean_rmse: f.rmse_summary().map(|s| s.mean),
                divergences: f.divergences(),
                trials: f.trials.len(),
            });
        }
        reports.push(report);
    }
    Ok(SweepTable { model: base.model, kind, levels: levels.to_vec(), filters: filters.to_vec(), cells, reports })
}
