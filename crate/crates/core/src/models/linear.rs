use nalgebra::{DMatrix, DVector};

use super::{LinearForm, StateSpaceModel};
use crate::error::Result;

/// `x' = A·x + B·u + ξ`, `y = H·x + ζ`. Used as the Kalman-filter oracle system.
#[derive(Debug, Clone, PartialEq)]
pub struct LinearGaussianModel {
    pub a: DMatrix<f64>,
    pub b: DMatrix<f64>,
    pub h: DMatrix<f64>,
    pub q: DMatrix<f64>,
    pub r: DMatrix<f64>,
}

impl LinearGaussianModel {
    /// Autonomous model (`l = 0`).
    pub fn new(a: DMatrix<f64>, h: DMatrix<f64>, q: DMatrix<f64>, r: DMatrix<f64>) -> Self {
        let n = a.nrows();
        Self { a, b: DMatrix::zeros(n, 0), h, q, r }
    }

    pub fn with_input(mut self, b: DMatrix<f64>) -> Self {
        self.b = b;
        self
    }
}

impl StateSpaceModel for LinearGaussianModel {
    fn state_dim(&self) -> usize {
        self.a.nrows()
    }

    fn measurement_dim(&self) -> usize {
        self.h.nrows()
    }

    fn input_dim(&self) -> usize {
        self.b.ncols()
    }

    fn transition(&self, x: &DVector<f64>, u: &DVector<f64>, _t: usize) -> Result<DVector<f64>> {
        Ok(&self.a * x + &self.b * u)
    }

    fn transition_jacobian(&self, _x: &DVector<f64>, _u: &DVector<f64>, _t: usize) -> Result<DMatrix<f64>> {
        Ok(self.a.clone())
    }

    fn measurement(&self, x: &DVector<f64>) -> Result<DVector<f64>> {
        Ok(&self.h * x)
    }

    fn measurement_jacobian(&self, _x: &DVector<f64>) -> Result<DMatrix<f64>> {
        Ok(self.h.clone())
    }

    fn has_measurement_hessian(&self) -> bool {
        true
    }

    fn measurement_hessian(&self, _x: &DVector<f64>) -> Result<Vec<DMatrix<f64>>> {
        let n = self.state_dim();
        Ok(vec![DMatrix::zeros(n, n); self.measurement_dim()])
    }

    fn process_cov(&self) -> &DMatrix<f64> {
        &self.q
    }

    fn measurement_cov(&self) -> &DMatrix<f64> {
        &self.r
    }

    fn linear_form(&self) -> Option<LinearForm> {
        Some(LinearForm { a: self.a.clone(), b: self.b.clone(), h: self.h.clone() })
    }
}
