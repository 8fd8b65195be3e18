use thiserror::Error;

/// Errors raised by the linear algebra kernels, quadrature rules, models and filters.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("matrix is not positive definite (pivot {pivot:e} at index {index})")]
    NotPositiveDefinite { index: usize, pivot: f64 },

    #[error("matrix is not symmetric (relative asymmetry {asymmetry:e})")]
    NotSymmetric { asymmetry: f64 },

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("non-finite function value at collocation point {point}")]
    NonFiniteFunctionValue { point: usize },

    #[error("invalid sigma-point rule: {0}")]
    InvalidRule(String),

    #[error("model does not provide a measurement Hessian")]
    MissingHessian,

    #[error("model is not linear; the Kalman filter requires linear dynamics and measurements")]
    ModelNotLinear,

    #[error("gimbal lock: |cos(pitch)| = {cos_pitch:e}")]
    GimbalLock { cos_pitch: f64 },

    #[error("dynamics produced a non-finite state at step {step}")]
    NonFiniteState { step: usize },

    #[error("information matrix lost positive definiteness at iteration {iteration}")]
    PdFailure { iteration: usize },

    #[error("non-finite iterate at iteration {iteration}")]
    NonFiniteIterate { iteration: usize },

    #[error("Cholesky factor is singular (diagonal entry {value:e})")]
    SingularFactor { value: f64 },

    #[error("unknown scenario: {0}")]
    UnknownScenario(String),

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
}

pub type Result<T> = std::result::Result<T, Error>;
