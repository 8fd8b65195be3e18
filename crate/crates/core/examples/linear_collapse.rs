//! On a linear-Gaussian system every filter in the crate reproduces the
//! Kalman filter. Runs a constant-velocity tracker and reports the largest
//! deviation of each filter from the closed-form Kalman recursion.

use nalgebra::{dmatrix, DVector};
use nano_filter::filters::kf_step;
use nano_filter::models::LinearGaussianModel;
use nano_filter::{Estimator, FilterKind, FilterSettings, GaussianBelief, StateSpaceModel};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};

fn main() -> nano_filter::Result<()> {
    let dt = 0.1;
    let model = LinearGaussianModel::new(
        dmatrix![1.0, dt; 0.0, 1.0],
        dmatrix![1.0, 0.0],
        dmatrix![1e-4, 0.0; 0.0, 1e-2],
        dmatrix![0.25],
    );
    let form = model.linear_form().expect("linear model");

    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let noise = Normal::new(0.0, 0.5).expect("valid deviation");
    let ys: Vec<DVector<f64>> =
        (0..50).map(|t| DVector::from_element(1, 0.3 * t as f64 * dt + noise.sample(&mut rng))).collect();
    let start = GaussianBelief::new(DVector::zeros(2), dmatrix![1.0, 0.0; 0.0, 1.0]);
    let u = DVector::zeros(0);

    for kind in [FilterKind::Ekf, FilterKind::Iekf, FilterKind::Ukf, FilterKind::Plf, FilterKind::Nano, FilterKind::NanoChol] {
        let est = Estimator::new(kind, &FilterSettings::default());
        let (mut kf, mut other) = (start.clone(), start.clone());
        let mut worst = 0.0f64;
        for (t, y) in ys.iter().enumerate() {
            kf = kf_step(&kf, &u, Some(y), &form, &model.q, &model.r)?;
            other = est.step(&other, &u, t, y, &model)?.0;
            worst = worst.max((&other.mean - &kf.mean).amax()).max((&other.cov - &kf.cov).amax());
        }
        println!("{kind:>9}: max deviation from the Kalman filter {worst:.2e}");
    }
    println!("final velocity estimate {:.3} (true 0.3)", {
        let mut b = start;
        for y in &ys {
            b = kf_step(&b, &u, Some(y), &form, &model.q, &model.r)?;
        }
        b.mean[1]
    });
    Ok(())
}
