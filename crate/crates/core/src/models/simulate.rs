use std::hash::{DefaultHasher, Hash, Hasher};

use nalgebra::DVector;
use rand::Rng;

use super::noise::{sample_noise, GaussianDistribution, NoiseSpec};
use super::StateSpaceModel;
use crate::error::{Error, Result};

/// One simulated run: `states[0..=M]`, `measurements[t-1] = y_t` for `t = 1..=M`,
/// and `inputs[t] = u_t` for `t = 0..M`.
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    pub states: Vec<DVector<f64>>,
    pub measurements: Vec<DVector<f64>>,
    pub inputs: Vec<DVector<f64>>,
}

impl Trajectory {
    pub fn horizon(&self) -> usize {
        self.measurements.len()
    }

    /// Hash of every stored value's bit pattern; equal trajectories hash equal.
    pub fn fingerprint(&self) -> u64 {
        let mut h = DefaultHasher::new();
        for v in self.states.iter().chain(&self.measurements).chain(&self.inputs) {
            v.len().hash(&mut h);
            for x in v.iter() {
                x.to_bits().hash(&mut h);
            }
        }
        h.finish()
    }
}

/// Simulates `steps` transitions of `model`.
///
/// RNG consumption order: the initial state, then for each step the process
/// noise followed by the measurement noise.
pub fn simulate_trajectory<R: Rng + ?Sized>(
    model: &dyn StateSpaceModel,
    process: &NoiseSpec,
    measurement: &NoiseSpec,
    init: &GaussianDistribution,
    steps: usize,
    rng: &mut R,
) -> Result<Trajectory> {
    let n = model.state_dim();
    if init.mean.len() != n || process.dim() != n {
        return Err(Error::DimensionMismatch { expected: n, got: process.dim() });
    }
    if measurement.dim() != model.measurement_dim() {
        return Err(Error::DimensionMismatch { expected: model.measurement_dim(), got: measurement.dim() });
    }
    let mut states = Vec::with_capacity(steps + 1);
    let mut measurements = Vec::with_capacity(steps);
    let mut inputs = Vec::with_capacity(steps);
    states.push(init.sample(rng)?);
    for t in 1..=steps {
        let u = model.control_input(t - 1);
        let prev = &states[t - 1];
        let x = model.transition(prev, &u, t - 1)? + sample_noise(process, rng)?;
        if !x.iter().all(|v| v.is_finite()) {
            return Err(Error::NonFiniteState { step: t });
        }
        let y = model.measurement(&x)? + sample_noise(measurement, rng)?;
        states.push(x);
        measurements.push(y);
        inputs.push(u);
    }
    Ok(Trajectory { states, measurements, inputs })
}
