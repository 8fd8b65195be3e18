//! Negative Gaussian measurement log-likelihood and its derivatives.
//!
//! `ℓ(x) = ½ (y − g(x))ᵀ R⁻¹ (y − g(x))`. The exact Hessian is
//! `GᵀR⁻¹G − Σ_j [R⁻¹(y − g(x))]_j ∇²g_j`; the second term carries the sign of
//! the residual and can make the sum indefinite. The Gauss–Newton form keeps
//! only `GᵀR⁻¹G`, which is positive semi-definite for every `x`.

use nalgebra::{DMatrix, DVector};

use crate::error::Result;
use crate::linalg::{spd_inverse, symmetrize};
use crate::models::StateSpaceModel;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum HessianMode {
    Exact,
    #[default]
    GaussNewton,
}

/// `ℓ(·, y)` for a fixed measurement, with `R⁻¹` cached.
pub struct Likelihood<'a> {
    model: &'a dyn StateSpaceModel,
    y: &'a DVector<f64>,
    r_inv: DMatrix<f64>,
}

impl<'a> Likelihood<'a> {
    pub fn new(model: &'a dyn StateSpaceModel, y: &'a DVector<f64>) -> Result<Self> {
        Ok(Self { model, y, r_inv: spd_inverse(model.measurement_cov())? })
    }

    pub fn value(&self, x: &DVector<f64>) -> Result<f64> {
        let r = self.y - self.model.measurement(x)?;
        Ok(0.5 * r.dot(&(&self.r_inv * &r)))
    }

    /// `Gᵀ R⁻¹ (g(x) − y)`.
    pub fn gradient(&self, x: &DVector<f64>) -> Result<DVector<f64>> {
        let g = self.model.measurement_jacobian(x)?;
        let r = self.model.measurement(x)? - self.y;
        Ok(g.transpose() * (&self.r_inv * r))
    }

    pub fn hessian_gauss_newton(&self, x: &DVector<f64>) -> Result<DMatrix<f64>> {
        let g = self.model.measurement_jacobian(x)?;
        Ok(symmetrize(&(g.transpose() * &self.r_inv * g)))
    }

    pub fn hessian_exact(&self, x: &DVector<f64>) -> Result<DMatrix<f64>> {
        Ok(self.derivatives(x, HessianMode::Exact)?.1)
    }

    /// Gradient and Hessian sharing one evaluation of `g` and `G`.
    pub fn derivatives(&self, x: &DVector<f64>, mode: HessianMode) -> Result<(DVector<f64>, DMatrix<f64>)> {
        let g = self.model.measurement_jacobian(x)?;
        let weighted = &self.r_inv * (self.y - self.model.measurement(x)?);
        let gt = g.transpose();
        let grad = -(&gt * &weighted);
        let mut hess = &gt * &self.r_inv * &g;
        if mode == HessianMode::Exact {
            for (w, h) in weighted.iter().zip(self.model.measurement_hessian(x)?) {
                hess -= h * *w;
            }
        }
        Ok((grad, symmetrize(&hess)))
    }
}

pub fn loglik(x: &DVector<f64>, y: &DVector<f64>, model: &dyn StateSpaceModel) -> Result<f64> {
    Likelihood::new(model, y)?.value(x)
}

pub fn grad_loglik(x: &DVector<f64>, y: &DVector<f64>, model: &dyn StateSpaceModel) -> Result<DVector<f64>> {
    Likelihood::new(model, y)?.gradient(x)
}

pub fn hess_loglik_exact(x: &DVector<f64>, y: &DVector<f64>, model: &dyn StateSpaceModel) -> Result<DMatrix<f64>> {
    Likelihood::new(model, y)?.hessian_exact(x)
}

/// `G(x)ᵀ R⁻¹ G(x)`; independent of the measurement.
pub fn hess_loglik_gn(x: &DVector<f64>, model: &dyn StateSpaceModel) -> Result<DMatrix<f64>> {
    let g = model.measurement_jacobian(x)?;
    let r_inv = spd_inverse(model.measurement_cov())?;
    Ok(symmetrize(&(g.transpose() * r_inv * g)))
}
