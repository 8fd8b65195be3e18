//! Propagates a Gaussian through the polar-to-Cartesian map with each
//! sigma-point rule and compares against a large Monte Carlo sample.

use nalgebra::{dmatrix, dvector, DMatrix, DVector};
use nano_filter::models::GaussianDistribution;
use nano_filter::moments::generate_points;
use nano_filter::SigmaPointRule;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn polar(x: &DVector<f64>) -> DVector<f64> {
    dvector![x[0] * x[1].cos(), x[0] * x[1].sin()]
}

fn main() -> nano_filter::Result<()> {
    let mean = dvector![10.0, 0.6];
    let cov = dmatrix![0.25, 0.0; 0.0, 0.04];

    let dist = GaussianDistribution::new(mean.clone(), cov.clone());
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let samples: Vec<DVector<f64>> = (0..200_000).map(|_| dist.sample(&mut rng).map(|x| polar(&x))).collect::<Result<_, _>>()?;
    let mc_mean = samples.iter().fold(DVector::zeros(2), |acc, s| acc + s) / samples.len() as f64;
    let mc_cov = samples.iter().fold(DMatrix::zeros(2, 2), |acc, s| acc + (s - &mc_mean) * (s - &mc_mean).transpose())
        / (samples.len() - 1) as f64;
    println!("monte carlo  mean ({:.4}, {:.4})", mc_mean[0], mc_mean[1]);

    let rules = [
        SigmaPointRule::Cubature,
        SigmaPointRule::unscented(),
        SigmaPointRule::gauss_hermite(3)?,
        SigmaPointRule::gauss_hermite(7)?,
    ];
    for rule in rules {
        let set = generate_points(&rule, &mean, &cov)?;
        let (m, c) = set.propagate(|x| Ok(polar(x)))?;
        println!(
            "{:>12}: {:>2} points, mean ({:.4}, {:.4}), mean error {:.2e}, covariance error {:.2e}",
            rule.to_string(),
            set.len(),
            m[0],
            m[1],
            (&m - &mc_mean).norm(),
            (&c - &mc_cov).norm()
        );
    }
    Ok(())
}
