//! Paired Monte Carlo comparison of NANO and the baselines on the Duffing
//! oscillator, printed in the same format as `summary.txt`.

use nano_bench::report::summary_text;
use nano_bench::{run_monte_carlo, RunOptions};
use nano_filter::models::{scenario_models, ModelKind, ScenarioConfig};
use nano_filter::FilterKind;

fn main() -> nano_bench::Result<()> {
    let cfg = ScenarioConfig::new(ModelKind::Duffing).with_trials(30).with_horizon(100).with_seed(0);
    let scenario = scenario_models(&cfg)?;
    let filters = [FilterKind::Nano, FilterKind::NanoChol, FilterKind::Ekf, FilterKind::Ukf, FilterKind::Plf];
    let report = run_monte_carlo(&scenario, &filters, &RunOptions { timing: true, ..RunOptions::default() })?;
    print!("{}", summary_text(&[report]));
    Ok(())
}
