use std::f64::consts::{PI, SQRT_2};
use std::str::FromStr;

use nalgebra::{dmatrix, DMatrix, DVector};

use super::StateSpaceModel;
use crate::error::{Error, Result};

/// Reading of the (2,1) entry of the FM demodulator transition matrix.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum MatrixMode {
    /// `−β·exp(−T/β) − 1`.
    #[default]
    Literal,
    /// `β·(1 − exp(−T/β))`.
    Grouped,
}

impl FromStr for MatrixMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "literal" => Ok(MatrixMode::Literal),
            "grouped" => Ok(MatrixMode::Grouped),
            other => Err(Error::InvalidConfig(format!("unknown FM matrix mode '{other}'"))),
        }
    }
}

/// FM demodulator with state `[λ, θ]` and measurement `√2·[sin θ, cos θ]`.
#[derive(Debug, Clone, PartialEq)]
pub struct FmDemodulator {
    pub beta: f64,
    pub period: f64,
    pub matrix_mode: MatrixMode,
    transition: DMatrix<f64>,
    q: DMatrix<f64>,
    r: DMatrix<f64>,
}

impl FmDemodulator {
    pub const DEFAULT_BETA: f64 = 100.0;
    pub const PERIOD: f64 = 2.0 * PI / 16.0;

    pub fn new(beta: f64, matrix_mode: MatrixMode) -> Self {
        assert!(beta > 0.0, "FM demodulator needs beta > 0");
        let period = Self::PERIOD;
        let decay = (-period / beta).exp();
        let coupling = match matrix_mode {
            MatrixMode::Literal => -beta * decay - 1.0,
            MatrixMode::Grouped => beta * (1.0 - decay),
        };
        Self {
            beta,
            period,
            matrix_mode,
            transition: dmatrix![decay, 0.0; coupling, 0.1],
            q: dmatrix![0.01, 0.0; 0.0, 1.0],
            r: DMatrix::identity(2, 2),
        }
    }

    pub fn transition_matrix(&self) -> &DMatrix<f64> {
        &self.transition
    }

    pub fn with_measurement_cov(mut self, r: DMatrix<f64>) -> Self {
        self.r = r;
        self
    }
}

impl Default for FmDemodulator {
    fn default() -> Self {
        Self::new(Self::DEFAULT_BETA, MatrixMode::Literal)
    }
}

impl StateSpaceModel for FmDemodulator {
    fn state_dim(&self) -> usize {
        2
    }

    fn measurement_dim(&self) -> usize {
        2
    }

    fn transition(&self, x: &DVector<f64>, _u: &DVector<f64>, _t: usize) -> Result<DVector<f64>> {
        Ok(&self.transition * x)
    }

    fn transition_jacobian(&self, _x: &DVector<f64>, _u: &DVector<f64>, _t: usize) -> Result<DMatrix<f64>> {
        Ok(self.transition.clone())
    }

    fn measurement(&self, x: &DVector<f64>) -> Result<DVector<f64>> {
        let (s, c) = x[1].sin_cos();
        Ok(DVector::from_vec(vec![SQRT_2 * s, SQRT_2 * c]))
    }

    fn measurement_jacobian(&self, x: &DVector<f64>) -> Result<DMatrix<f64>> {
        let (s, c) = x[1].sin_cos();
        Ok(dmatrix![0.0, SQRT_2 * c; 0.0, -SQRT_2 * s])
    }

    fn has_measurement_hessian(&self) -> bool {
        true
    }

    fn measurement_hessian(&self, x: &DVector<f64>) -> Result<Vec<DMatrix<f64>>> {
        let (s, c) = x[1].sin_cos();
        Ok(vec![
            dmatrix![0.0, 0.0; 0.0, -SQRT_2 * s],
            dmatrix![0.0, 0.0; 0.0, -SQRT_2 * c],
        ])
    }

    fn process_cov(&self) -> &DMatrix<f64> {
        &self.q
    }

    fn measurement_cov(&self) -> &DMatrix<f64> {
        &self.r
    }
}
