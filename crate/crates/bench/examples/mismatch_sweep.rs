//! Mean RMSE of NANO and the UKF as the measurement outlier rate grows.

use nano_bench::sweep::sweep_mismatch;
use nano_bench::RunOptions;
use nano_filter::models::{MismatchKind, ModelKind, ScenarioConfig};
use nano_filter::FilterKind;

fn main() -> nano_bench::Result<()> {
    let model = ModelKind::Duffing;
    let base = ScenarioConfig::new(model).with_trials(20).with_horizon(100);
    let filters = [FilterKind::Nano, FilterKind::Ukf];
    let table =
        sweep_mismatch(&base, MismatchKind::Outlier, model.outlier_grid(), &filters, &RunOptions::default())?;
    println!("{:>6} {:>10} {:>10}", "k", "nano", "ukf");
    for &level in &table.levels {
        let cell = |f| {
            table.cell(level, f).and_then(|c| c.mean_rmse).map_or("-".to_string(), |v| format!("{v:.4}"))
        };
        println!("{level:>6} {:>10} {:>10}", cell(FilterKind::Nano), cell(FilterKind::Ukf));
    }
    Ok(())
}
