//! Linear Kalman filter and the Taylor-linearized EKF / iterated EKF.

use nalgebra::{DMatrix, DVector};

use super::GaussianBelief;
use crate::error::{Error, Result};
use crate::linalg::{cholesky_factor, spd_solve, symmetrize};
use crate::models::{LinearForm, StateSpaceModel};

/// Measurement update for a linearized measurement `y ≈ H·x + c` with
/// `innovation = y − (H·x̂ + c)` and noise covariance `r`. Joseph form.
pub(crate) fn linear_update(
    prior: &GaussianBelief,
    h: &DMatrix<f64>,
    r: &DMatrix<f64>,
    innovation: &DVector<f64>,
) -> Result<GaussianBelief> {
    let p = &prior.cov;
    let hp = h * p;
    let s = symmetrize(&(&hp * h.transpose() + r));
    let gain = spd_solve(&s, &hp)?.transpose();
    let mean = &prior.mean + &gain * innovation;
    let n = p.nrows();
    let i_kh = DMatrix::identity(n, n) - &gain * h;
    let cov = symmetrize(&(&i_kh * p * i_kh.transpose() + &gain * r * gain.transpose()));
    checked(GaussianBelief { mean, cov })
}

/// Verifies the covariance is still positive definite.
pub(crate) fn checked(belief: GaussianBelief) -> Result<GaussianBelief> {
    if !belief.mean.iter().all(|v| v.is_finite()) {
        return Err(Error::NonFiniteIterate { iteration: 0 });
    }
    cholesky_factor(&belief.cov)?;
    Ok(belief)
}

pub fn kf_predict(
    belief: &GaussianBelief,
    u: &DVector<f64>,
    form: &LinearForm,
    q: &DMatrix<f64>,
) -> Result<GaussianBelief> {
    let mut mean = &form.a * &belief.mean;
    if form.b.ncols() > 0 {
        mean += &form.b * u;
    }
    let cov = symmetrize(&(&form.a * &belief.cov * form.a.transpose() + q));
    Ok(GaussianBelief { mean, cov })
}

pub fn kf_update(
    prior: &GaussianBelief,
    y: &DVector<f64>,
    form: &LinearForm,
    r: &DMatrix<f64>,
) -> Result<GaussianBelief> {
    let innovation = y - &form.h * &prior.mean;
    linear_update(prior, &form.h, r, &innovation)
}

/// Predict with `(A, B, Q)` then, if a measurement is given, update with `(H, R)`.
pub fn kf_step(
    belief: &GaussianBelief,
    u: &DVector<f64>,
    y: Option<&DVector<f64>>,
    form: &LinearForm,
    q: &DMatrix<f64>,
    r: &DMatrix<f64>,
) -> Result<GaussianBelief> {
    let prior = kf_predict(belief, u, form, q)?;
    match y {
        Some(y) => kf_update(&prior, y, form, r),
        None => Ok(prior),
    }
}

pub fn ekf_predict(
    belief: &GaussianBelief,
    u: &DVector<f64>,
    t: usize,
    model: &dyn StateSpaceModel,
) -> Result<GaussianBelief> {
    let mean = model.transition(&belief.mean, u, t)?;
    let f = model.transition_jacobian(&belief.mean, u, t)?;
    let cov = symmetrize(&(&f * &belief.cov * f.transpose() + model.process_cov()));
    Ok(GaussianBelief { mean, cov })
}

pub fn ekf_update(prior: &GaussianBelief, y: &DVector<f64>, model: &dyn StateSpaceModel) -> Result<GaussianBelief> {
    let g = model.measurement_jacobian(&prior.mean)?;
    let innovation = y - model.measurement(&prior.mean)?;
    linear_update(prior, &g, model.measurement_cov(), &innovation)
}

/// Gauss–Newton MAP iterations relinearizing `g` at the current estimate.
///
/// Stops when the mean moves less than `gamma` or after `max_iters`
/// relinearizations; the covariance uses the last linearization.
pub fn iekf_update(
    prior: &GaussianBelief,
    y: &DVector<f64>,
    model: &dyn StateSpaceModel,
    gamma: f64,
    max_iters: usize,
) -> Result<(GaussianBelief, usize)> {
    let mut point = prior.mean.clone();
    let mut post = prior.clone();
    let mut iterations = 0;
    for _ in 0..max_iters.max(1) {
        let g = model.measurement_jacobian(&point)?;
        let innovation = y - model.measurement(&point)? - &g * (&prior.mean - &point);
        post = linear_update(prior, &g, model.measurement_cov(), &innovation)?;
        iterations += 1;
        let delta = (&post.mean - &point).norm();
        point = post.mean.clone();
        if delta < gamma {
            break;
        }
    }
    Ok((post, iterations))
}
