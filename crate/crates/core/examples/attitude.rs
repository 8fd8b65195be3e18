//! Estimates roll, pitch and yaw from gyro-driven kinematics and a
//! gravity and magnetic-field reading.

use nano_filter::models::{scenario_models, simulate_trajectory, ModelKind, ScenarioConfig};
use nano_filter::{Estimator, FilterKind, FilterSettings, GaussianBelief};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> nano_filter::Result<()> {
    let scenario = scenario_models(&ScenarioConfig::new(ModelKind::Attitude).with_horizon(200))?;
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let traj = simulate_trajectory(
        &scenario.truth,
        &scenario.process_noise,
        &scenario.measurement_noise,
        &scenario.initial_truth,
        scenario.config.horizon,
        &mut rng,
    )?;

    let est = Estimator::new(FilterKind::Nano, &FilterSettings::default());
    let mut belief = GaussianBelief::from(scenario.initial_belief.clone());
    for t in 0..traj.horizon() {
        belief = est.step(&belief, &traj.inputs[t], t, &traj.measurements[t], &scenario.filter_view)?.0;
        if (t + 1) % 50 == 0 {
            let err = (&belief.mean - &traj.states[t + 1]).map(f64::to_degrees);
            let sd = belief.cov.diagonal().map(|v| v.sqrt().to_degrees());
            println!(
                "t = {:>3}: error (deg) roll {:+.4} pitch {:+.4} yaw {:+.4}, 1-sigma {:.4} {:.4} {:.4}",
                t + 1,
                err[0],
                err[1],
                err[2],
                sd[0],
                sd[1],
                sd[2]
            );
        }
    }
    Ok(())
}
