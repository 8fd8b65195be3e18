#![allow(dead_code)]

use nalgebra::{DMatrix, DVector};
use nano_filter::models::{AttitudeModel, DuffingModel, FmDemodulator, LinearGaussianModel, MatrixMode};
use nano_filter::StateSpaceModel;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn uniform_vec(rng: &mut impl Rng, n: usize, lo: f64, hi: f64) -> DVector<f64> {
    DVector::from_fn(n, |_, _| rng.random_range(lo..hi))
}

pub fn uniform_mat(rng: &mut impl Rng, r: usize, c: usize, lo: f64, hi: f64) -> DMatrix<f64> {
    DMatrix::from_fn(r, c, |_, _| rng.random_range(lo..hi))
}

/// `MᵀM + δI` with entries of `M` in `[-1, 1)`.
pub fn random_spd(rng: &mut impl Rng, n: usize, delta: f64) -> DMatrix<f64> {
    let m = uniform_mat(rng, n, n, -1.0, 1.0);
    let a = m.transpose() * m + DMatrix::identity(n, n) * delta;
    (&a + a.transpose()) * 0.5
}

/// Random stable linear-Gaussian model with `n` states and `m` outputs.
pub fn random_linear(rng: &mut impl Rng, n: usize, m: usize) -> LinearGaussianModel {
    let a = uniform_mat(rng, n, n, -1.0, 1.0);
    let radius = a.clone().complex_eigenvalues().iter().map(|z| z.norm()).fold(0.0, f64::max);
    let a = if radius > 0.95 { a * (0.95 / radius) } else { a };
    let h = uniform_mat(rng, m, n, -1.0, 1.0);
    let q = random_spd(rng, n, 0.05) * 0.2;
    let r = random_spd(rng, m, 0.1) * 0.5;
    LinearGaussianModel::new(a, h, q, r)
}

/// The three benchmark models with a sampler for states in their working range.
pub struct Bench {
    pub name: &'static str,
    pub model: Box<dyn StateSpaceModel>,
    pub sample: fn(&mut ChaCha8Rng) -> DVector<f64>,
}

pub fn benchmarks() -> Vec<Bench> {
    vec![
        Bench {
            name: "fm",
            model: Box::new(FmDemodulator::new(100.0, MatrixMode::Literal)),
            sample: |r| uniform_vec(r, 2, -3.0, 3.0),
        },
        Bench {
            name: "fm-grouped",
            model: Box::new(FmDemodulator::new(100.0, MatrixMode::Grouped)),
            sample: |r| uniform_vec(r, 2, -3.0, 3.0),
        },
        Bench {
            name: "attitude",
            model: Box::new(AttitudeModel::default()),
            sample: |r| {
                let mut x = uniform_vec(r, 3, -3.0, 3.0);
                x[0] = r.random_range(-1.2..1.2);
                x
            },
        },
        Bench { name: "duffing", model: Box::new(DuffingModel::default()), sample: |r| uniform_vec(r, 2, -2.0, 2.0) },
    ]
}

/// Central-difference Jacobian of `f` at `x`.
pub fn fd_jacobian(f: impl Fn(&DVector<f64>) -> DVector<f64>, x: &DVector<f64>) -> DMatrix<f64> {
    let n = x.len();
    let m = f(x).len();
    let mut j = DMatrix::zeros(m, n);
    for k in 0..n {
        let h = 1e-6 * x[k].abs().max(1.0);
        let mut xp = x.clone();
        let mut xm = x.clone();
        xp[k] += h;
        xm[k] -= h;
        j.set_column(k, &((f(&xp) - f(&xm)) / (2.0 * h)));
    }
    j
}

/// Central-difference gradient of a scalar function.
pub fn fd_gradient(f: impl Fn(&DVector<f64>) -> f64, x: &DVector<f64>) -> DVector<f64> {
    let j = fd_jacobian(|z| DVector::from_element(1, f(z)), x);
    j.row(0).transpose()
}

/// `‖a − b‖ / max(‖b‖, 1)`.
pub fn rel_err(a: &DMatrix<f64>, b: &DMatrix<f64>) -> f64 {
    (a - b).norm() / b.norm().max(1.0)
}
