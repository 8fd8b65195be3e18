//! Gaussian filters behind one predict/update contract.

mod kalman;
mod likelihood;
mod nano;
mod sigma;

pub use kalman::{ekf_predict, ekf_update, iekf_update, kf_predict, kf_step, kf_update};
pub use likelihood::{grad_loglik, hess_loglik_exact, hess_loglik_gn, loglik, HessianMode, Likelihood};
pub use nano::{
    chol_cov_step, nano_predict, nano_update, CholeskyParams, CovUpdate, ExponentMode, InitMode, NanoConfig,
    NanoIterState,
};
pub use sigma::{plf_update, ukf_predict, ukf_update};

use std::fmt;
use std::str::FromStr;
use std::time::{Duration, Instant};

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::models::{GaussianDistribution, StateSpaceModel};
use crate::moments::SigmaPointRule;

/// Gaussian state estimate `N(mean, cov)`.
#[derive(Debug, Clone, PartialEq)]
pub struct GaussianBelief {
    pub mean: DVector<f64>,
    pub cov: DMatrix<f64>,
}

impl GaussianBelief {
    pub fn new(mean: DVector<f64>, cov: DMatrix<f64>) -> Self {
        Self { mean, cov }
    }

    pub fn dim(&self) -> usize {
        self.mean.len()
    }
}

impl From<GaussianDistribution> for GaussianBelief {
    fn from(d: GaussianDistribution) -> Self {
        Self { mean: d.mean, cov: d.cov }
    }
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct UpdateDiagnostics {
    /// Iterations used by iterative updates (1 for single-shot filters).
    pub iterations: usize,
    /// Last convergence measure; `∞` if no iteration ran.
    pub final_delta: f64,
    /// The update lost positive definiteness and the step was abandoned.
    pub pd_failure: bool,
    /// Wall-clock time spent in the measurement update.
    pub update_time: Duration,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FilterKind {
    Kf,
    Ekf,
    Iekf,
    Ukf,
    Plf,
    /// Gauss–Newton Hessian, direct covariance update, prior initialization.
    Nano,
    /// Exact Hessian, direct update: can lose positive definiteness.
    NanoNopd,
    /// Exact Hessian, direct update, EKF initialization.
    NanoEkf,
    /// Gauss–Newton Hessian with the Cholesky-factor covariance update.
    NanoChol,
}

impl FilterKind {
    pub const ALL: [FilterKind; 9] = [
        FilterKind::Kf,
        FilterKind::Ekf,
        FilterKind::Iekf,
        FilterKind::Ukf,
        FilterKind::Plf,
        FilterKind::Nano,
        FilterKind::NanoNopd,
        FilterKind::NanoEkf,
        FilterKind::NanoChol,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            FilterKind::Kf => "kf",
            FilterKind::Ekf => "ekf",
            FilterKind::Iekf => "iekf",
            FilterKind::Ukf => "ukf",
            FilterKind::Plf => "plf",
            FilterKind::Nano => "nano",
            FilterKind::NanoNopd => "nano-nopd",
            FilterKind::NanoEkf => "nano-ekf",
            FilterKind::NanoChol => "nano-chol",
        }
    }

    pub fn is_nano(&self) -> bool {
        matches!(self, FilterKind::Nano | FilterKind::NanoNopd | FilterKind::NanoEkf | FilterKind::NanoChol)
    }

    /// Preset NANO configuration for this variant.
    pub fn nano_preset(&self) -> NanoConfig {
        let base = NanoConfig::default();
        match self {
            FilterKind::NanoNopd => NanoConfig { hessian_mode: HessianMode::Exact, ..base },
            FilterKind::NanoEkf => NanoConfig { hessian_mode: HessianMode::Exact, init_mode: InitMode::Ekf, ..base },
            FilterKind::NanoChol => NanoConfig { cov_update: CovUpdate::CholeskyFactor(CholeskyParams::default()), ..base },
            _ => base,
        }
    }
}

impl fmt::Display for FilterKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for FilterKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        FilterKind::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| Error::InvalidConfig(format!("unknown filter '{s}'")))
    }
}

/// Covariance-update choice as written in configuration files.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CovUpdateKind {
    Direct,
    CholeskyFactor,
}

impl FromStr for CovUpdateKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "direct" => Ok(CovUpdateKind::Direct),
            "cholesky" | "cholesky-factor" => Ok(CovUpdateKind::CholeskyFactor),
            other => Err(Error::InvalidConfig(format!("unknown covariance update '{other}'"))),
        }
    }
}

impl FromStr for HessianMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "exact" => Ok(HessianMode::Exact),
            "gauss-newton" | "gn" => Ok(HessianMode::GaussNewton),
            other => Err(Error::InvalidConfig(format!("unknown Hessian mode '{other}'"))),
        }
    }
}

/// User overrides applied on top of a variant's preset [`NanoConfig`].
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct NanoOverrides {
    pub gamma: Option<f64>,
    pub max_iters: Option<usize>,
    pub hessian_mode: Option<HessianMode>,
    pub cov_update: Option<CovUpdateKind>,
    pub epsilon: Option<f64>,
    pub exponent_mode: Option<ExponentMode>,
    pub exp_order: Option<usize>,
    pub step_size: Option<f64>,
}

impl NanoOverrides {
    pub fn apply(&self, mut cfg: NanoConfig) -> NanoConfig {
        if let Some(g) = self.gamma {
            cfg.gamma = g;
        }
        if let Some(m) = self.max_iters {
            cfg.max_iters = m;
        }
        if let Some(h) = self.hessian_mode {
            cfg.hessian_mode = h;
        }
        match self.cov_update {
            Some(CovUpdateKind::Direct) => cfg.cov_update = CovUpdate::Direct,
            Some(CovUpdateKind::CholeskyFactor) if cfg.cov_update == CovUpdate::Direct => {
                cfg.cov_update = CovUpdate::CholeskyFactor(CholeskyParams::default())
            }
            _ => {}
        }
        if let CovUpdate::CholeskyFactor(ref mut p) = cfg.cov_update {
            if let Some(e) = self.epsilon {
                p.epsilon = e;
            }
            if let Some(m) = self.exponent_mode {
                p.exponent_mode = m;
            }
            if let Some(o) = self.exp_order {
                p.exp_order = o;
            }
        }
        if let Some(s) = self.step_size {
            cfg.step_size = s;
        }
        cfg
    }
}

/// Settings shared by every filter of one run.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct FilterSettings {
    pub rule: SigmaPointRule,
    pub nano: NanoOverrides,
}

/// A configured filter. Holds no per-trial state.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Estimator {
    pub kind: FilterKind,
    pub rule: SigmaPointRule,
    /// NANO settings; `gamma` and `max_iters` also drive IEKF and PLF.
    pub nano: NanoConfig,
}

impl Estimator {
    pub fn new(kind: FilterKind, settings: &FilterSettings) -> Self {
        Self { kind, rule: settings.rule, nano: settings.nano.apply(kind.nano_preset()) }
    }

    /// Checks that `model` supplies what this filter needs.
    pub fn check_model(&self, model: &dyn StateSpaceModel) -> Result<()> {
        self.nano.validate()?;
        match self.kind {
            FilterKind::Kf if model.linear_form().is_none() => Err(Error::ModelNotLinear),
            k if k.is_nano() && self.nano.hessian_mode == HessianMode::Exact && !model.has_measurement_hessian() => {
                Err(Error::MissingHessian)
            }
            FilterKind::Ukf | FilterKind::Plf => self.rule.validate(model.state_dim()),
            k if k.is_nano() => self.rule.validate(model.state_dim()),
            _ => Ok(()),
        }
    }

    /// Propagates the posterior at `t` to the prior at `t + 1` using `u_t`.
    pub fn predict(
        &self,
        belief: &GaussianBelief,
        u: &DVector<f64>,
        t: usize,
        model: &dyn StateSpaceModel,
    ) -> Result<GaussianBelief> {
        match self.kind {
            FilterKind::Kf => {
                let form = model.linear_form().ok_or(Error::ModelNotLinear)?;
                kf_predict(belief, u, &form, model.process_cov())
            }
            FilterKind::Ekf | FilterKind::Iekf => ekf_predict(belief, u, t, model),
            FilterKind::Ukf | FilterKind::Plf => ukf_predict(belief, u, t, model, &self.rule),
            _ => nano_predict(belief, u, t, model, &self.rule),
        }
    }

    pub fn update(
        &self,
        prior: &GaussianBelief,
        y: &DVector<f64>,
        model: &dyn StateSpaceModel,
    ) -> Result<(GaussianBelief, UpdateDiagnostics)> {
        let single = |b: GaussianBelief| (b, UpdateDiagnostics { iterations: 1, ..UpdateDiagnostics::default() });
        let (gamma, max_iters) = (self.nano.gamma, self.nano.max_iters);
        let iterated = |(b, iterations): (GaussianBelief, usize)| {
            (b, UpdateDiagnostics { iterations, ..UpdateDiagnostics::default() })
        };
        match self.kind {
            FilterKind::Kf => {
                let form = model.linear_form().ok_or(Error::ModelNotLinear)?;
                kf_update(prior, y, &form, model.measurement_cov()).map(single)
            }
            FilterKind::Ekf => ekf_update(prior, y, model).map(single),
            FilterKind::Iekf => iekf_update(prior, y, model, gamma, max_iters).map(iterated),
            FilterKind::Ukf => ukf_update(prior, y, model, &self.rule).map(single),
            FilterKind::Plf => plf_update(prior, y, model, &self.rule, gamma, max_iters).map(iterated),
            _ => nano_update(prior, y, model, &self.rule, &self.nano),
        }
    }

    /// One predict/update cycle: `u` and `t` index the transition from the
    /// previous posterior, `y` is the new measurement.
    ///
    /// A loss of positive definiteness inside the update is reported through
    /// [`UpdateDiagnostics::pd_failure`] with the prior returned as the
    /// belief, so the caller decides whether to abandon the run.
    pub fn step(
        &self,
        belief: &GaussianBelief,
        u: &DVector<f64>,
        t: usize,
        y: &DVector<f64>,
        model: &dyn StateSpaceModel,
    ) -> Result<(GaussianBelief, UpdateDiagnostics)> {
        let prior = self.predict(belief, u, t, model)?;
        let started = Instant::now();
        let outcome = self.update(&prior, y, model);
        let elapsed = started.elapsed();
        match outcome {
            Ok((post, mut diag)) => {
                diag.update_time = elapsed;
                Ok((post, diag))
            }
            Err(Error::PdFailure { iteration }) => Ok((
                prior,
                UpdateDiagnostics { iterations: iteration, final_delta: f64::NAN, pd_failure: true, update_time: elapsed },
            )),
            Err(e) => Err(e),
        }
    }
}

/// Dispatches one predict/update cycle of filter `kind`.
pub fn filter_step(
    kind: FilterKind,
    settings: &FilterSettings,
    belief: &GaussianBelief,
    u: &DVector<f64>,
    t: usize,
    y: &DVector<f64>,
    model: &dyn StateSpaceModel,
) -> Result<(GaussianBelief, UpdateDiagnostics)> {
    let est = Estimator::new(kind, settings);
    est.check_model(model)?;
    est.step(belief, u, t, y, model)
}
