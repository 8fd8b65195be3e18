//! NANO with and without its positive-definite Hessian and with an EKF
//! start, on all three benchmarks.

use nano_bench::ablation::{ablate, ABLATION_FILTERS};
use nano_filter::models::{ModelKind, ScenarioConfig};
use nano_filter::FilterSettings;

fn main() -> nano_bench::Result<()> {
    let base = ScenarioConfig::new(ModelKind::Duffing).with_trials(20).with_horizon(100);
    let table = ablate(&ModelKind::ALL, &base, &FilterSettings::default())?;
    print!("{:>10}", "");
    for f in ABLATION_FILTERS {
        print!(" {:>22}", f.to_string());
    }
    println!();
    for model in ModelKind::ALL {
        print!("{:>10}", model.to_string());
        for f in ABLATION_FILTERS {
            let c = table.cell(model, f).expect("every cell is present");
            let ms = c.mean_update_ms.map_or("-".to_string(), |v| format!("{v:.3}"));
            print!(" {:>22}", format!("{} / {ms} ms", c.rmse_label()));
        }
        println!();
    }
    Ok(())
}
