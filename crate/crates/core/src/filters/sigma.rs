//! Sigma-point filters: UKF-style moment matching and the posterior
//! linearization filter (iterated statistical linear regression).

use nalgebra::{DMatrix, DVector};

use super::kalman::{checked, linear_update};
use super::GaussianBelief;
use crate::error::Result;
use crate::linalg::{spd_solve, symmetrize};
use crate::moments::{generate_points, SigmaPointRule};
use crate::models::StateSpaceModel;

/// Moment-matched prediction `{x̂⁻, W} = MM(x̂, P; f(·, u))`, `P⁻ = W + Q`.
pub fn ukf_predict(
    belief: &GaussianBelief,
    u: &DVector<f64>,
    t: usize,
    model: &dyn StateSpaceModel,
    rule: &SigmaPointRule,
) -> Result<GaussianBelief> {
    let set = generate_points(rule, &belief.mean, &belief.cov)?;
    let (mean, w) = set.propagate(|x| model.transition(x, u, t))?;
    let cov = symmetrize(&(w + model.process_cov()));
    Ok(GaussianBelief { mean, cov })
}

pub fn ukf_update(
    prior: &GaussianBelief,
    y: &DVector<f64>,
    model: &dyn StateSpaceModel,
    rule: &SigmaPointRule,
) -> Result<GaussianBelief> {
    let set = generate_points(rule, &prior.mean, &prior.cov)?;
    let p = set.propagate_with_cross(|x| model.measurement(x))?;
    let s = symmetrize(&(p.cov + model.measurement_cov()));
    // K = C·S⁻¹ computed as (S⁻¹·Cᵀ)ᵀ
    let gain = spd_solve(&s, &p.cross.transpose())?.transpose();
    let mean = &prior.mean + &gain * (y - &p.mean);
    let cov = symmetrize(&(&prior.cov - &gain * s * gain.transpose()));
    checked(GaussianBelief { mean, cov })
}

/// Statistical linearization of `g` over `N(x̂, P)`: `g(x) ≈ A·x + b` with
/// residual covariance `Ω`.
pub(crate) struct Slr {
    pub a: DMatrix<f64>,
    pub b: DVector<f64>,
    pub omega: DMatrix<f64>,
}

pub(crate) fn statistical_linearization(
    belief: &GaussianBelief,
    model: &dyn StateSpaceModel,
    rule: &SigmaPointRule,
) -> Result<Slr> {
    let set = generate_points(rule, &belief.mean, &belief.cov)?;
    let p = set.propagate_with_cross(|x| model.measurement(x))?;
    // A = Ψᵀ·P⁻¹ = (P⁻¹·Ψ)ᵀ
    let a = spd_solve(&belief.cov, &p.cross)?.transpose();
    let b = &p.mean - &a * &belief.mean;
    let omega = symmetrize(&(p.cov - &a * &belief.cov * a.transpose()));
    Ok(Slr { a, b, omega })
}

/// Posterior linearization update. Each iteration relinearizes `g` over the
/// current posterior and redoes a linear update of the prior with effective
/// noise `R + Ω`; iteration 1 (linearizing over the prior) is the UKF update.
pub fn plf_update(
    prior: &GaussianBelief,
    y: &DVector<f64>,
    model: &dyn StateSpaceModel,
    rule: &SigmaPointRule,
    gamma: f64,
    max_iters: usize,
) -> Result<(GaussianBelief, usize)> {
    let mut current = prior.clone();
    let mut iterations = 0;
    for _ in 0..max_iters.max(1) {
        let slr = statistical_linearization(&current, model, rule)?;
        let r_eff = symmetrize(&(model.measurement_cov() + &slr.omega));
        let innovation = y - (&slr.a * &prior.mean + &slr.b);
        let next = linear_update(prior, &slr.a, &r_eff, &innovation)?;
        iterations += 1;
        let delta = (&next.mean - &current.mean).norm();
        current = next;
        if delta < gamma {
            break;
        }
    }
    Ok((current, iterations))
}
