//! Natural-gradient Gaussian approximation (NANO) filter.
//!
//! Prediction is plain moment matching. The update runs natural-gradient
//! iterations on the Gaussian posterior parameters:
//!
//! ```text
//! V_x  = E[∇ℓ],  V_xx = E[∇²ℓ]            over N(x̂⁽ᵏ⁾, P⁽ᵏ⁾)
//! (P⁻¹)⁽ᵏ⁺¹⁾ = P⁻⁻¹ + V_xx
//! x̂⁽ᵏ⁺¹⁾    = x̂⁽ᵏ⁾ − P⁽ᵏ⁺¹⁾ [V_x + P⁻⁻¹ (x̂⁽ᵏ⁾ − x̂⁻)]
//! ```
//!
//! until `‖P⁽ᵏ⁺¹⁾ − P⁽ᵏ⁾‖_F < γ`. With the exact Hessian the information
//! matrix can become indefinite. Two variants keep it positive definite:
//! replacing `∇²ℓ` by its Gauss–Newton form, or propagating a Cholesky
//! factor of `P⁻¹` through an exponential update and rebuilding
//! `P⁻¹ = ΛΛᵀ + εI`.

use std::fmt;
use std::str::FromStr;

use nalgebra::{DMatrix, DVector};

use super::kalman::ekf_update;
use super::likelihood::{HessianMode, Likelihood};
use super::sigma::ukf_predict;
use super::{GaussianBelief, UpdateDiagnostics};
use crate::error::{Error, Result};
use crate::linalg::{
    cholesky_factor, frobenius_norm, matrix_exp_truncated, spd_inverse, symmetrize, LowerTriangular,
};
use crate::moments::{generate_points, SigmaPointRule};
use crate::models::StateSpaceModel;

/// Smallest admissible diagonal entry of the propagated factor.
pub const SINGULAR_FACTOR_TOLERANCE: f64 = 1e-14;

/// Argument of the matrix exponential in the factor update.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ExponentMode {
    /// `½ Λ⁻¹ (V_xx + P⁻⁻¹) Λ⁻ᵀ`.
    Literal,
    /// `½ Λ⁻¹ (V_xx + P⁻⁻¹ − ΛΛᵀ) Λ⁻ᵀ`; zero exactly when `ΛΛᵀ` hits the
    /// direct-update target.
    #[default]
    Residual,
}

impl FromStr for ExponentMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "literal" => Ok(ExponentMode::Literal),
            "residual" => Ok(ExponentMode::Residual),
            other => Err(Error::InvalidConfig(format!("unknown exponent mode '{other}'"))),
        }
    }
}

impl fmt::Display for ExponentMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ExponentMode::Literal => "literal",
            ExponentMode::Residual => "residual",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CholeskyParams {
    pub epsilon: f64,
    pub exponent_mode: ExponentMode,
    pub exp_order: usize,
}

impl Default for CholeskyParams {
    fn default() -> Self {
        Self { epsilon: 1e-9, exponent_mode: ExponentMode::Residual, exp_order: 1 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub enum CovUpdate {
    /// Invert `P⁻⁻¹ + V_xx` directly.
    #[default]
    Direct,
    CholeskyFactor(CholeskyParams),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum InitMode {
    /// Start from the prior.
    #[default]
    Prior,
    /// Start from the EKF update of the prior.
    Ekf,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NanoConfig {
    /// Stopping threshold on the Frobenius norm of the covariance change.
    pub gamma: f64,
    /// Iteration cap. Zero returns the initial iterate unchanged.
    pub max_iters: usize,
    pub hessian_mode: HessianMode,
    pub cov_update: CovUpdate,
    pub init_mode: InitMode,
    /// Damping of the mean step, in `(0, 1]`.
    pub step_size: f64,
}

impl Default for NanoConfig {
    fn default() -> Self {
        Self {
            gamma: 1e-6,
            max_iters: 10,
            hessian_mode: HessianMode::GaussNewton,
            cov_update: CovUpdate::Direct,
            init_mode: InitMode::Prior,
            step_size: 1.0,
        }
    }
}

impl NanoConfig {
    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::InvalidConfig(m));
        if !(self.gamma > 0.0) {
            return bad(format!("gamma must be positive, got {}", self.gamma));
        }
        if !(self.step_size > 0.0 && self.step_size <= 1.0) {
            return bad(format!("step_size must be in (0, 1], got {}", self.step_size));
        }
        if let CovUpdate::CholeskyFactor(p) = self.cov_update {
            if !(p.epsilon > 0.0) {
                return bad(format!("epsilon must be positive, got {}", p.epsilon));
            }
            if p.exp_order == 0 {
                return bad("exp_order must be at least 1".into());
            }
        }
        Ok(())
    }
}

/// Iterate of the update loop.
#[derive(Debug, Clone, PartialEq)]
pub struct NanoIterState {
    pub k: usize,
    pub mean: DVector<f64>,
    pub cov: DMatrix<f64>,
    /// Factor of `P⁻¹` for the Cholesky-factor update; after the first step,
    /// `factor·factorᵀ + εI = P⁻¹`.
    pub factor: Option<LowerTriangular>,
}

/// Maps a loss of positive definiteness into the filter-level failure.
fn as_pd_failure(e: Error, iteration: usize) -> Error {
    match e {
        Error::NotPositiveDefinite { .. } | Error::NotSymmetric { .. } => Error::PdFailure { iteration },
        other => other,
    }
}

pub fn nano_predict(
    posterior: &GaussianBelief,
    u: &DVector<f64>,
    t: usize,
    model: &dyn StateSpaceModel,
    rule: &SigmaPointRule,
) -> Result<GaussianBelief> {
    let prior = ukf_predict(posterior, u, t, model, rule)?;
    cholesky_factor(&prior.cov)?;
    Ok(prior)
}

/// Lower-triangular `L` with `L·Lᵀ = M·Mᵀ`, from a QR decomposition of `Mᵀ`.
fn retriangularize(m: DMatrix<f64>) -> Result<LowerTriangular> {
    let r = m.transpose().qr().r();
    let mut l = r.transpose();
    for j in 0..l.ncols() {
        if l[(j, j)] < 0.0 {
            l.column_mut(j).neg_mut();
        }
    }
    let l = LowerTriangular::from_lower(l);
    let d = l.min_diagonal();
    if !(d >= SINGULAR_FACTOR_TOLERANCE) {
        return Err(Error::SingularFactor { value: d });
    }
    Ok(l)
}

/// Exponential update of the Cholesky factor of `P⁻¹`.
///
/// `Λ' = Λ·exp_m(S)` with `S` chosen by `params.exponent_mode` and the
/// exponential truncated at `params.exp_order`. `Λ'` is brought back to
/// lower-triangular form without changing `Λ'Λ'ᵀ`, and the new covariance is
/// the inverse of `Λ'Λ'ᵀ + εI`, which is positive definite for any `Λ'`.
pub fn chol_cov_step(
    state: &NanoIterState,
    v_xx: &DMatrix<f64>,
    prior_inv: &DMatrix<f64>,
    params: &CholeskyParams,
) -> Result<NanoIterState> {
    let factor = match &state.factor {
        Some(f) => f.clone(),
        None => cholesky_factor(&spd_inverse(&state.cov)?)?,
    };
    let d = factor.min_diagonal();
    if !(d >= SINGULAR_FACTOR_TOLERANCE) {
        return Err(Error::SingularFactor { value: d });
    }
    let target = symmetrize(&(v_xx + prior_inv));
    let arg = match params.exponent_mode {
        ExponentMode::Literal => target,
        ExponentMode::Residual => target - factor.gram(),
    };
    // Λ⁻¹·M·Λ⁻ᵀ via two forward substitutions, using M = Mᵀ
    let left = factor.solve_lower(&arg);
    let exponent = symmetrize(&factor.solve_lower(&left.transpose())) * 0.5;
    let grown = factor.as_matrix() * matrix_exp_truncated(&exponent, params.exp_order);
    let next = retriangularize(grown)?;
    let n = next.dim();
    let information = next.gram() + DMatrix::identity(n, n) * params.epsilon;
    let cov = spd_inverse(&information).map_err(|e| as_pd_failure(e, state.k))?;
    Ok(NanoIterState { k: state.k + 1, mean: state.mean.clone(), cov, factor: Some(next) })
}

/// Natural-gradient measurement update.
///
/// Returns [`Error::PdFailure`] if the information matrix stops being
/// positive definite, which can only happen with [`HessianMode::Exact`] and
/// [`CovUpdate::Direct`].
pub fn nano_update(
    prior: &GaussianBelief,
    y: &DVector<f64>,
    model: &dyn StateSpaceModel,
    rule: &SigmaPointRule,
    cfg: &NanoConfig,
) -> Result<(GaussianBelief, UpdateDiagnostics)> {
    cfg.validate()?;
    if cfg.hessian_mode == HessianMode::Exact && !model.has_measurement_hessian() {
        return Err(Error::MissingHessian);
    }
    let n = prior.mean.len();
    let lik = Likelihood::new(model, y)?;
    let prior_inv = spd_inverse(&prior.cov)?;

    let start = match cfg.init_mode {
        InitMode::Prior => prior.clone(),
        InitMode::Ekf => ekf_update(prior, y, model).map_err(|e| as_pd_failure(e, 0))?,
    };
    let mut state = NanoIterState { k: 0, mean: start.mean, cov: start.cov, factor: None };
    if matches!(cfg.cov_update, CovUpdate::CholeskyFactor(_)) {
        let info = spd_inverse(&state.cov).map_err(|e| as_pd_failure(e, 0))?;
        state.factor = Some(cholesky_factor(&info).map_err(|e| as_pd_failure(e, 0))?);
    }

    let mut delta = f64::INFINITY;
    while state.k < cfg.max_iters {
        let k = state.k;
        let set = generate_points(rule, &state.mean, &state.cov).map_err(|e| as_pd_failure(e, k))?;
        // one pass over the points: column 0 holds ∇ℓ, columns 1..=n hold ∇²ℓ
        let stacked = set.expected_matrix(|x| {
            let (grad, hess) = lik.derivatives(x, cfg.hessian_mode)?;
            let mut m = DMatrix::zeros(n, n + 1);
            m.set_column(0, &grad);
            m.columns_mut(1, n).copy_from(&hess);
            Ok(m)
        })?;
        let v_x = stacked.column(0).into_owned();
        let v_xx = symmetrize(&stacked.columns(1, n).into_owned());

        let next = match cfg.cov_update {
            CovUpdate::Direct => {
                let information = symmetrize(&(&prior_inv + &v_xx));
                let cov = spd_inverse(&information).map_err(|e| as_pd_failure(e, k))?;
                NanoIterState { k: k + 1, mean: state.mean.clone(), cov, factor: None }
            }
            CovUpdate::CholeskyFactor(params) => chol_cov_step(&state, &v_xx, &prior_inv, &params)?,
        };

        let grad = v_x + &prior_inv * (&state.mean - &prior.mean);
        let mean = &state.mean - (&next.cov * grad) * cfg.step_size;
        if !mean.iter().chain(next.cov.iter()).all(|v| v.is_finite()) {
            return Err(Error::NonFiniteIterate { iteration: k });
        }
        delta = frobenius_norm(&(&next.cov - &state.cov));
        state = NanoIterState { mean, ..next };
        if delta < cfg.gamma {
            break;
        }
    }

    let diagnostics = UpdateDiagnostics {
        iterations: state.k,
        final_delta: delta,
        ..UpdateDiagnostics::default()
    };
    Ok((GaussianBelief { mean: state.mean, cov: state.cov }, diagnostics))
}
