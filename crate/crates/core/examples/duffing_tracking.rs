//! Tracks a forced Duffing oscillator from noisy position readings and
//! compares NANO with the EKF and UKF on the same trajectory.

use nano_filter::models::{scenario_models, simulate_trajectory, ModelKind, ScenarioConfig};
use nano_filter::{Estimator, FilterKind, FilterSettings, GaussianBelief, StateSpaceModel};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> nano_filter::Result<()> {
    let scenario = scenario_models(&ScenarioConfig::new(ModelKind::Duffing).with_horizon(200))?;
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let traj = simulate_trajectory(
        &scenario.truth,
        &scenario.process_noise,
        &scenario.measurement_noise,
        &scenario.initial_truth,
        scenario.config.horizon,
        &mut rng,
    )?;
    let model: &dyn StateSpaceModel = &scenario.filter_view;

    for kind in [FilterKind::Nano, FilterKind::Ekf, FilterKind::Ukf] {
        let est = Estimator::new(kind, &FilterSettings::default());
        let mut belief = GaussianBelief::from(scenario.initial_belief.clone());
        let mut sq = 0.0;
        let mut iterations = 0;
        for t in 0..traj.horizon() {
            let (post, diag) = est.step(&belief, &traj.inputs[t], t, &traj.measurements[t], model)?;
            sq += (&post.mean - &traj.states[t + 1]).norm_squared();
            iterations += diag.iterations;
            belief = post;
        }
        let rmse = (sq / traj.horizon() as f64).sqrt();
        println!(
            "{kind:>5}: rmse {rmse:.4}, {:.1} update iterations per step",
            iterations as f64 / traj.horizon() as f64
        );
    }
    Ok(())
}
