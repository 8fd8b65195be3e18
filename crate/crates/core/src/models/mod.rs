//! State-space models `x_{t+1} = f(x_t, u_t, t) + ξ_t`, `y_t = g(x_t) + ζ_t`.

mod attitude;
mod duffing;
mod fm;
mod linear;
mod noise;
mod scenario;
mod simulate;

pub use attitude::{euler_rate_matrix, rotation_matrix, AttitudeModel};
pub use duffing::{DuffingModel, DuffingParams};
pub use fm::{FmDemodulator, MatrixMode};
pub use linear::LinearGaussianModel;
pub use noise::{sample_noise, GaussianDistribution, NoiseSpec};
pub use scenario::{
    scenario_models, BenchmarkModel, Mismatch, MismatchKind, ModelKind, Scenario, ScenarioConfig,
};
pub use simulate::{simulate_trajectory, Trajectory};

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};

/// Matrices of a linear-Gaussian model: `x' = A·x + B·u`, `y = H·x`.
#[derive(Debug, Clone, PartialEq)]
pub struct LinearForm {
    pub a: DMatrix<f64>,
    pub b: DMatrix<f64>,
    pub h: DMatrix<f64>,
}

/// Discrete-time nonlinear state-space model with additive Gaussian noise.
///
/// Implementations are immutable after construction and shared between
/// worker threads.
pub trait StateSpaceModel: Send + Sync {
    fn state_dim(&self) -> usize;
    fn measurement_dim(&self) -> usize;
    fn input_dim(&self) -> usize {
        0
    }

    /// `f(x, u, t)`.
    fn transition(&self, x: &DVector<f64>, u: &DVector<f64>, t: usize) -> Result<DVector<f64>>;
    /// `∂f/∂x`, `n × n`.
    fn transition_jacobian(&self, x: &DVector<f64>, u: &DVector<f64>, t: usize) -> Result<DMatrix<f64>>;
    /// `g(x)`.
    fn measurement(&self, x: &DVector<f64>) -> Result<DVector<f64>>;
    /// `G = ∂g/∂x`, `m × n`.
    fn measurement_jacobian(&self, x: &DVector<f64>) -> Result<DMatrix<f64>>;

    fn has_measurement_hessian(&self) -> bool {
        false
    }

    /// Hessians `∂²g_j/∂x²`, one `n × n` matrix per measurement component.
    fn measurement_hessian(&self, _x: &DVector<f64>) -> Result<Vec<DMatrix<f64>>> {
        Err(Error::MissingHessian)
    }

    fn process_cov(&self) -> &DMatrix<f64>;
    fn measurement_cov(&self) -> &DMatrix<f64>;

    /// Known control input `u_t`; zero-length for autonomous models.
    fn control_input(&self, _t: usize) -> DVector<f64> {
        DVector::zeros(self.input_dim())
    }

    /// `Some` only when both `f` and `g` are linear.
    fn linear_form(&self) -> Option<LinearForm> {
        None
    }
}
