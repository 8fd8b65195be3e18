use nalgebra::{dmatrix, DMatrix, DVector};

use super::StateSpaceModel;
use crate::error::Result;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DuffingParams {
    pub damping: f64,
    pub natural_freq: f64,
    pub stiffness: f64,
    pub forcing_amplitude: f64,
    pub forcing_freq: f64,
    pub dt: f64,
}

impl Default for DuffingParams {
    fn default() -> Self {
        Self {
            damping: 0.05,
            natural_freq: 1.0,
            stiffness: 1.0,
            forcing_amplitude: 0.2,
            forcing_freq: 1.2,
            dt: 0.01,
        }
    }
}

/// Forced Duffing oscillator, explicit-Euler discretized, observed through `x³`.
#[derive(Debug, Clone, PartialEq)]
pub struct DuffingModel {
    pub params: DuffingParams,
    q: DMatrix<f64>,
    r: DMatrix<f64>,
}

impl DuffingModel {
    pub fn new(params: DuffingParams) -> Self {
        Self {
            params,
            q: DMatrix::identity(2, 2) * 1e-3,
            r: dmatrix![1e-2],
        }
    }

    /// Continuous-time vector field `[ẋ, ẍ]` at time `time`.
    pub fn vector_field(&self, x: &DVector<f64>, time: f64) -> DVector<f64> {
        let p = &self.params;
        let (pos, vel) = (x[0], x[1]);
        let acc = -2.0 * p.damping * p.natural_freq * vel - p.natural_freq.powi(2) * pos
            - p.stiffness * pos.powi(3)
            + p.forcing_amplitude * (p.forcing_freq * time).cos();
        DVector::from_vec(vec![vel, acc])
    }
}

impl Default for DuffingModel {
    fn default() -> Self {
        Self::new(DuffingParams::default())
    }
}

impl StateSpaceModel for DuffingModel {
    fn state_dim(&self) -> usize {
        2
    }

    fn measurement_dim(&self) -> usize {
        1
    }

    fn transition(&self, x: &DVector<f64>, _u: &DVector<f64>, t: usize) -> Result<DVector<f64>> {
        let time = t as f64 * self.params.dt;
        Ok(x + self.vector_field(x, time) * self.params.dt)
    }

    fn transition_jacobian(&self, x: &DVector<f64>, _u: &DVector<f64>, _t: usize) -> Result<DMatrix<f64>> {
        let p = &self.params;
        Ok(dmatrix![
            1.0, p.dt;
            (-p.natural_freq.powi(2) - 3.0 * p.stiffness * x[0] * x[0]) * p.dt,
            1.0 - 2.0 * p.damping * p.natural_freq * p.dt
        ])
    }

    fn measurement(&self, x: &DVector<f64>) -> Result<DVector<f64>> {
        Ok(DVector::from_element(1, x[0].powi(3)))
    }

    fn measurement_jacobian(&self, x: &DVector<f64>) -> Result<DMatrix<f64>> {
        Ok(dmatrix![3.0 * x[0] * x[0], 0.0])
    }

    fn has_measurement_hessian(&self) -> bool {
        true
    }

    fn measurement_hessian(&self, x: &DVector<f64>) -> Result<Vec<DMatrix<f64>>> {
        Ok(vec![dmatrix![6.0 * x[0], 0.0; 0.0, 0.0]])
    }

    fn process_cov(&self) -> &DMatrix<f64> {
        &self.q
    }

    fn measurement_cov(&self) -> &DMatrix<f64> {
        &self.r
    }
}
