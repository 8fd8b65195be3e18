//! Benchmark scenarios: a truth model with its noise, and the filter's view of it.
//!
//! System-error mismatch perturbs one parameter of the *filter's* model while
//! the truth stays nominal, so every level of a sweep sees the same simulated
//! trajectories. Outlier mismatch swaps the truth's measurement noise for a
//! heavy-tailed mixture while the filter keeps its nominal `R`.

use std::fmt;
use std::str::FromStr;

use nalgebra::{DMatrix, DVector};

use super::{
    AttitudeModel, DuffingModel, DuffingParams, FmDemodulator, GaussianDistribution, LinearForm, LinearGaussianModel,
    MatrixMode,
    NoiseSpec, StateSpaceModel,
};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ModelKind {
    Fm,
    Attitude,
    Duffing,
}

impl ModelKind {
    pub const ALL: [ModelKind; 3] = [ModelKind::Fm, ModelKind::Attitude, ModelKind::Duffing];

    pub fn name(&self) -> &'static str {
        match self {
            ModelKind::Fm => "fm",
            ModelKind::Attitude => "attitude",
            ModelKind::Duffing => "duffing",
        }
    }

    /// Relative parameter perturbations `o` accepted for system-error mismatch.
    pub fn system_grid(&self) -> &'static [f64] {
        match self {
            ModelKind::Fm => &[-0.10, -0.05, -0.01, 0.0, 0.01, 0.05, 0.10],
            ModelKind::Attitude | ModelKind::Duffing => &[-0.30, -0.20, -0.10, 0.0, 0.10, 0.20, 0.30],
        }
    }

    /// Outlier probabilities `k` accepted for outlier mismatch.
    pub fn outlier_grid(&self) -> &'static [f64] {
        match self {
            ModelKind::Fm => &[0.0, 0.01, 0.04, 0.07, 0.10],
            ModelKind::Attitude => &[0.0, 0.01, 0.05, 0.10, 0.15],
            ModelKind::Duffing => &[0.0, 0.03, 0.05, 0.08, 0.10],
        }
    }

    pub fn grid(&self, kind: MismatchKind) -> &'static [f64] {
        match kind {
            MismatchKind::None => &[0.0],
            MismatchKind::System => self.system_grid(),
            MismatchKind::Outlier => self.outlier_grid(),
        }
    }
}

impl fmt::Display for ModelKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ModelKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "fm" => Ok(ModelKind::Fm),
            "attitude" => Ok(ModelKind::Attitude),
            "duffing" => Ok(ModelKind::Duffing),
            other => Err(Error::UnknownScenario(format!("unknown model '{other}'"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum MismatchKind {
    #[default]
    None,
    System,
    Outlier,
}

impl fmt::Display for MismatchKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            MismatchKind::None => "none",
            MismatchKind::System => "system",
            MismatchKind::Outlier => "outlier",
        })
    }
}

impl FromStr for MismatchKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "none" => Ok(MismatchKind::None),
            "system" => Ok(MismatchKind::System),
            "outlier" => Ok(MismatchKind::Outlier),
            other => Err(Error::UnknownScenario(format!("unknown mismatch kind '{other}'"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Mismatch {
    pub kind: MismatchKind,
    /// `o` for system error, `k` for outliers; ignored for `None`.
    pub level: f64,
}

impl Mismatch {
    pub fn none() -> Self {
        Self::default()
    }

    pub fn system(o: f64) -> Self {
        Self { kind: MismatchKind::System, level: o }
    }

    pub fn outlier(k: f64) -> Self {
        Self { kind: MismatchKind::Outlier, level: k }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScenarioConfig {
    pub model: ModelKind,
    pub mismatch: Mismatch,
    pub horizon: usize,
    pub trials: usize,
    pub seed: u64,
    pub fm_matrix_mode: MatrixMode,
    /// Overrides the model's default true initial-state distribution.
    pub initial_truth: Option<GaussianDistribution>,
    /// Overrides the model's default initial belief `(x̂₀|₀, P₀|₀)`.
    pub initial_belief: Option<GaussianDistribution>,
}

impl ScenarioConfig {
    pub const DEFAULT_HORIZON: usize = 200;
    pub const DEFAULT_TRIALS: usize = 100;

    pub fn new(model: ModelKind) -> Self {
        Self {
            model,
            mismatch: Mismatch::none(),
            horizon: Self::DEFAULT_HORIZON,
            trials: Self::DEFAULT_TRIALS,
            seed: 0,
            fm_matrix_mode: MatrixMode::Literal,
            initial_truth: None,
            initial_belief: None,
        }
    }

    pub fn with_mismatch(mut self, mismatch: Mismatch) -> Self {
        self.mismatch = mismatch;
        self
    }

    pub fn with_horizon(mut self, horizon: usize) -> Self {
        self.horizon = horizon;
        self
    }

    pub fn with_trials(mut self, trials: usize) -> Self {
        self.trials = trials;
        self
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }
}

/// One of the three benchmark systems.
#[derive(Debug, Clone, PartialEq)]
pub enum BenchmarkModel {
    Fm(FmDemodulator),
    Attitude(AttitudeModel),
    Duffing(DuffingModel),
    /// Custom linear-Gaussian system, used for oracle checks of the harness.
    Linear(LinearGaussianModel),
}

impl BenchmarkModel {
    fn inner(&self) -> &dyn StateSpaceModel {
        match self {
            BenchmarkModel::Fm(m) => m,
            BenchmarkModel::Attitude(m) => m,
            BenchmarkModel::Duffing(m) => m,
            BenchmarkModel::Linear(m) => m,
        }
    }
}

impl StateSpaceModel for BenchmarkModel {
    fn state_dim(&self) -> usize {
        self.inner().state_dim()
    }
    fn measurement_dim(&self) -> usize {
        self.inner().measurement_dim()
    }
    fn input_dim(&self) -> usize {
        self.inner().input_dim()
    }
    fn transition(&self, x: &DVector<f64>, u: &DVector<f64>, t: usize) -> Result<DVector<f64>> {
        self.inner().transition(x, u, t)
    }
    fn transition_jacobian(&self, x: &DVector<f64>, u: &DVector<f64>, t: usize) -> Result<DMatrix<f64>> {
        self.inner().transition_jacobian(x, u, t)
    }
    fn measurement(&self, x: &DVector<f64>) -> Result<DVector<f64>> {
        self.inner().measurement(x)
    }
    fn measurement_jacobian(&self, x: &DVector<f64>) -> Result<DMatrix<f64>> {
        self.inner().measurement_jacobian(x)
    }
    fn has_measurement_hessian(&self) -> bool {
        self.inner().has_measurement_hessian()
    }
    fn measurement_hessian(&self, x: &DVector<f64>) -> Result<Vec<DMatrix<f64>>> {
        self.inner().measurement_hessian(x)
    }
    fn process_cov(&self) -> &DMatrix<f64> {
        self.inner().process_cov()
    }
    fn measurement_cov(&self) -> &DMatrix<f64> {
        self.inner().measurement_cov()
    }
    fn control_input(&self, t: usize) -> DVector<f64> {
        self.inner().control_input(t)
    }
    fn linear_form(&self) -> Option<LinearForm> {
        self.inner().linear_form()
    }
}

/// Fully resolved scenario.
#[derive(Debug, Clone, PartialEq)]
pub struct Scenario {
    pub config: ScenarioConfig,
    pub truth: BenchmarkModel,
    pub filter_view: BenchmarkModel,
    pub process_noise: NoiseSpec,
    pub measurement_noise: NoiseSpec,
    pub initial_truth: GaussianDistribution,
    pub initial_belief: GaussianDistribution,
}

impl Scenario {
    /// Short identifier, e.g. `duffing/outlier=0.05`.
    pub fn label(&self) -> String {
        let m = &self.config.mismatch;
        match m.kind {
            MismatchKind::None => self.config.model.to_string(),
            kind => format!("{}/{}={}", self.config.model, kind, m.level),
        }
    }
}

fn on_grid(level: f64, grid: &[f64]) -> bool {
    grid.iter().any(|g| (g - level).abs() < 1e-9)
}

fn build(kind: ModelKind, perturbation: f64, fm_mode: MatrixMode) -> BenchmarkModel {
    let scale = 1.0 + perturbation;
    match kind {
        ModelKind::Fm => BenchmarkModel::Fm(FmDemodulator::new(FmDemodulator::DEFAULT_BETA * scale, fm_mode)),
        ModelKind::Attitude => BenchmarkModel::Attitude(AttitudeModel::new(AttitudeModel::DEFAULT_DT * scale)),
        ModelKind::Duffing => {
            let mut p = DuffingParams::default();
            p.natural_freq *= scale;
            BenchmarkModel::Duffing(DuffingModel::new(p))
        }
    }
}

/// Resolves `cfg` into truth and filter-side models plus noise specifications.
pub fn scenario_models(cfg: &ScenarioConfig) -> Result<Scenario> {
    if cfg.horizon == 0 || cfg.trials == 0 {
        return Err(Error::InvalidConfig("horizon and trials must be at least 1".into()));
    }
    let kind = cfg.model;
    let Mismatch { kind: mkind, level } = cfg.mismatch;
    if mkind != MismatchKind::None && !on_grid(level, kind.grid(mkind)) {
        return Err(Error::UnknownScenario(format!(
            "{mkind} level {level} is not on the {kind} grid {:?}",
            kind.grid(mkind)
        )));
    }

    let truth = build(kind, 0.0, cfg.fm_matrix_mode);
    let filter_view = match mkind {
        MismatchKind::System => build(kind, level, cfg.fm_matrix_mode),
        _ => truth.clone(),
    };

    let process_noise = match kind {
        ModelKind::Attitude => NoiseSpec::Laplace { scale: DVector::from_element(3, AttitudeModel::LAPLACE_SCALE) },
        _ => NoiseSpec::Gaussian { cov: truth.process_cov().clone() },
    };

    let nominal_r = truth.measurement_cov().clone();
    let k = level;
    let measurement_noise = if mkind == MismatchKind::Outlier && k > 0.0 {
        let m = nominal_r.nrows();
        match kind {
            ModelKind::Fm => NoiseSpec::GaussianMixture {
                k,
                nominal: nominal_r,
                outlier: DMatrix::identity(m, m) * 100.0,
            },
            ModelKind::Attitude => NoiseSpec::BetaOutlier { k, a: 1.2, b: 1.5, nominal: nominal_r },
            ModelKind::Duffing => NoiseSpec::GaussianMixture {
                k,
                nominal: nominal_r,
                outlier: DMatrix::identity(m, m),
            },
        }
    } else {
        NoiseSpec::Gaussian { cov: nominal_r }
    };

    let n = truth.state_dim();
    let default_belief = match kind {
        ModelKind::Attitude => GaussianDistribution::new(DVector::zeros(n), DMatrix::identity(n, n) * 1e-3),
        _ => GaussianDistribution::new(DVector::zeros(n), DMatrix::identity(n, n)),
    };
    let initial_belief = cfg.initial_belief.clone().unwrap_or(default_belief);
    let initial_truth = cfg.initial_truth.clone().unwrap_or_else(|| initial_belief.clone());

    Ok(Scenario {
        config: cfg.clone(),
        truth,
        filter_view,
        process_noise,
        measurement_noise,
        initial_truth,
        initial_belief,
    })
}
