//! Euler-angle attitude kinematics with accelerometer/magnetometer measurements.
//!
//! State order is `[pitch, roll, yaw]`. The body-to-world rotation is composed
//! yaw–pitch–roll, `C(θ) = R_z(yaw)·R_y(pitch)·R_x(roll)`, and the measurement
//! stacks `C(θ)ᵀ·g` and `C(θ)ᵀ·b`.

use std::f64::consts::{FRAC_PI_2, PI};

use nalgebra::{DMatrix, DVector, Matrix3, Vector3};

use super::StateSpaceModel;
use crate::error::{Error, Result};

const PITCH: usize = 0;
const ROLL: usize = 1;
const YAW: usize = 2;

/// Below this `|cos(pitch)|` the rate matrix is treated as singular.
pub const GIMBAL_LOCK_COS: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Axis {
    X,
    Y,
    Z,
}

/// `k`-th derivative of the elementary rotation about `axis` at `angle`.
fn elementary(axis: Axis, angle: f64, k: usize) -> Matrix3<f64> {
    let (s, c) = (angle + k as f64 * FRAC_PI_2).sin_cos();
    let one = if k == 0 { 1.0 } else { 0.0 };
    match axis {
        Axis::X => Matrix3::new(one, 0.0, 0.0, 0.0, c, -s, 0.0, s, c),
        Axis::Y => Matrix3::new(c, 0.0, s, 0.0, one, 0.0, -s, 0.0, c),
        Axis::Z => Matrix3::new(c, -s, 0.0, s, c, 0.0, 0.0, 0.0, one),
    }
}

/// Mixed partial derivative of `C(θ)` with derivative orders `[pitch, roll, yaw]`.
fn rotation_derivative(theta: &[f64], orders: [usize; 3]) -> Matrix3<f64> {
    elementary(Axis::Z, theta[YAW], orders[YAW])
        * elementary(Axis::Y, theta[PITCH], orders[PITCH])
        * elementary(Axis::X, theta[ROLL], orders[ROLL])
}

/// Body-to-world rotation `C(θ)` for `θ = [pitch, roll, yaw]`.
pub fn rotation_matrix(theta: &DVector<f64>) -> Matrix3<f64> {
    rotation_derivative(theta.as_slice(), [0, 0, 0])
}

/// Euler-rate matrix `Ω(θ)` mapping body rates to `[pitch, roll, yaw]` rates.
pub fn euler_rate_matrix(theta: &DVector<f64>) -> Result<Matrix3<f64>> {
    let (sp, cp) = theta[PITCH].sin_cos();
    let (sr, cr) = theta[ROLL].sin_cos();
    if cp.abs() < GIMBAL_LOCK_COS {
        return Err(Error::GimbalLock { cos_pitch: cp });
    }
    let tp = sp / cp;
    Ok(Matrix3::new(
        0.0, cr, -sr, //
        1.0, sr * tp, cr * tp, //
        0.0, sr / cp, cr / cp,
    ))
}

#[derive(Debug, Clone, PartialEq)]
pub struct AttitudeModel {
    pub dt: f64,
    pub gravity: Vector3<f64>,
    pub magnetic: Vector3<f64>,
    q: DMatrix<f64>,
    r: DMatrix<f64>,
}

impl AttitudeModel {
    pub const DEFAULT_DT: f64 = 0.01;
    /// Per-axis Laplace scale of the process noise.
    pub const LAPLACE_SCALE: f64 = 1e-5;
    pub const MEASUREMENT_VARIANCE: f64 = 1e-4;

    /// Filter-side `Q` is the Laplace covariance `2b²·I`.
    pub fn new(dt: f64) -> Self {
        assert!(dt > 0.0, "attitude model needs dt > 0");
        let b = Self::LAPLACE_SCALE;
        Self {
            dt,
            gravity: Vector3::new(0.0, 0.0, -9.81),
            magnetic: Vector3::new(27.75, -3.65, 47.21),
            q: DMatrix::identity(3, 3) * (2.0 * b * b),
            r: DMatrix::identity(6, 6) * Self::MEASUREMENT_VARIANCE,
        }
    }

    fn measure_with(&self, c: &Matrix3<f64>) -> [f64; 6] {
        let a = c.transpose() * self.gravity;
        let m = c.transpose() * self.magnetic;
        [a[0], a[1], a[2], m[0], m[1], m[2]]
    }
}

impl Default for AttitudeModel {
    fn default() -> Self {
        Self::new(Self::DEFAULT_DT)
    }
}

impl StateSpaceModel for AttitudeModel {
    fn state_dim(&self) -> usize {
        3
    }

    fn measurement_dim(&self) -> usize {
        6
    }

    fn input_dim(&self) -> usize {
        3
    }

    fn transition(&self, x: &DVector<f64>, u: &DVector<f64>, _t: usize) -> Result<DVector<f64>> {
        let omega = Vector3::new(u[0], u[1], u[2]);
        let rate = euler_rate_matrix(x)? * omega * self.dt;
        Ok(DVector::from_fn(3, |i, _| x[i] + rate[i]))
    }

    fn transition_jacobian(&self, x: &DVector<f64>, u: &DVector<f64>, _t: usize) -> Result<DMatrix<f64>> {
        let (sp, cp) = x[PITCH].sin_cos();
        let (sr, cr) = x[ROLL].sin_cos();
        if cp.abs() < GIMBAL_LOCK_COS {
            return Err(Error::GimbalLock { cos_pitch: cp });
        }
        let (w2, w3) = (u[1], u[2]);
        // a = sin r·w2 + cos r·w3, b = cos r·w2 − sin r·w3 = ∂a/∂r
        let a = sr * w2 + cr * w3;
        let b = cr * w2 - sr * w3;
        let mut d = DMatrix::zeros(3, 3);
        d[(PITCH, ROLL)] = -a;
        d[(ROLL, PITCH)] = a / (cp * cp);
        d[(ROLL, ROLL)] = b * sp / cp;
        d[(YAW, PITCH)] = a * sp / (cp * cp);
        d[(YAW, ROLL)] = b / cp;
        Ok(DMatrix::identity(3, 3) + d * self.dt)
    }

    fn measurement(&self, x: &DVector<f64>) -> Result<DVector<f64>> {
        Ok(DVector::from_row_slice(&self.measure_with(&rotation_matrix(x))))
    }

    fn measurement_jacobian(&self, x: &DVector<f64>) -> Result<DMatrix<f64>> {
        let mut jac = DMatrix::zeros(6, 3);
        for j in 0..3 {
            let mut orders = [0; 3];
            orders[j] = 1;
            let col = self.measure_with(&rotation_derivative(x.as_slice(), orders));
            for (i, v) in col.iter().enumerate() {
                jac[(i, j)] = *v;
            }
        }
        Ok(jac)
    }

    fn has_measurement_hessian(&self) -> bool {
        true
    }

    fn measurement_hessian(&self, x: &DVector<f64>) -> Result<Vec<DMatrix<f64>>> {
        let mut hess = vec![DMatrix::zeros(3, 3); 6];
        for j in 0..3 {
            for k in j..3 {
                let mut orders = [0; 3];
                orders[j] += 1;
                orders[k] += 1;
                let vals = self.measure_with(&rotation_derivative(x.as_slice(), orders));
                for (h, v) in hess.iter_mut().zip(vals) {
                    h[(j, k)] = v;
                    h[(k, j)] = v;
                }
            }
        }
        Ok(hess)
    }

    fn process_cov(&self) -> &DMatrix<f64> {
        &self.q
    }

    fn measurement_cov(&self) -> &DMatrix<f64> {
        &self.r
    }

    /// `ω_t = (π/18)·sin(2π·Δt·t)·1₃`.
    fn control_input(&self, t: usize) -> DVector<f64> {
        let w = PI / 18.0 * (2.0 * PI * self.dt * t as f64).sin();
        DVector::from_element(3, w)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models::fd;
    use nalgebra::dvector;

    #[test]
    fn zero_angles_measure_reference_vectors() {
        let m = AttitudeModel::default();
        assert_eq!(rotation_matrix(&dvector![0.0, 0.0, 0.0]), Matrix3::identity());
        let y = m.measurement(&dvector![0.0, 0.0, 0.0]).unwrap();
        assert_eq!(y, dvector![0.0, 0.0, -9.81, 27.75, -3.65, 47.21]);
    }

    #[test]
    fn rate_matrix_at_zero_swaps_first_two_rates() {
        let omega = euler_rate_matrix(&dvector![0.0, 0.0, 0.0]).unwrap();
        let v = omega * Vector3::new(1.0, 2.0, 3.0);
        assert_eq!(v, Vector3::new(2.0, 1.0, 3.0));
    }

    #[test]
    fn rotation_is_orthogonal() {
        let theta = dvector![0.3, -1.1, 2.0];
        let c = rotation_matrix(&theta);
        assert!((c.transpose() * c - Matrix3::identity()).norm() < 1e-12);
        assert!((c.determinant() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn gimbal_lock_is_an_error() {
        let m = AttitudeModel::default();
        let x = dvector![PI / 2.0, 0.0, 0.0];
        let u = dvector![0.1, 0.1, 0.1];
        assert!(matches!(m.transition(&x, &u, 0), Err(Error::GimbalLock { .. })));
        assert!(matches!(m.transition_jacobian(&x, &u, 0), Err(Error::GimbalLock { .. })));
    }

    #[test]
    fn control_input_schedule() {
        let m = AttitudeModel::default();
        assert_eq!(m.control_input(0), dvector![0.0, 0.0, 0.0]);
        let w = m.control_input(25)[0];
        assert!((w - PI / 18.0 * (PI / 2.0).sin()).abs() < 1e-15);
    }

    #[test]
    fn jacobians_match_finite_differences() {
        let m = AttitudeModel::default();
        let x = dvector![0.2, -0.4, 0.9];
        let u = dvector![0.15, -0.05, 0.1];
        let fd_f = fd::jacobian(|x| m.transition(x, &u, 0).unwrap(), &x, 1e-5);
        assert!(fd::rel_err(&m.transition_jacobian(&x, &u, 0).unwrap(), &fd_f) < 1e-8);
        let fd_g = fd::jacobian(|x| m.measurement(x).unwrap(), &x, 1e-5);
        assert!(fd::rel_err(&m.measurement_jacobian(&x).unwrap(), &fd_g) < 1e-8);
    }
}
