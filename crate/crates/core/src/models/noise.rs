use nalgebra::{DMatrix, DVector};
use rand::Rng;
use rand_distr::{Beta, Distribution, Exp1, StandardNormal};

use crate::error::{Error, Result};
use crate::linalg::cholesky_semidefinite;

/// Additive noise distribution used when simulating the true system.
#[derive(Debug, Clone, PartialEq)]
pub enum NoiseSpec {
    /// `N(0, cov)`; `cov` may be singular.
    Gaussian { cov: DMatrix<f64> },
    /// Independent zero-mean Laplace components with per-axis scale `b`.
    Laplace { scale: DVector<f64> },
    /// `(1 − k)·N(0, nominal) + k·N(0, outlier)`.
    GaussianMixture { k: f64, nominal: DMatrix<f64>, outlier: DMatrix<f64> },
    /// With probability `k` a single `Beta(a, b)` draw replicated on every
    /// component replaces the nominal Gaussian draw.
    BetaOutlier { k: f64, a: f64, b: f64, nominal: DMatrix<f64> },
}

impl NoiseSpec {
    pub fn dim(&self) -> usize {
        match self {
            NoiseSpec::Gaussian { cov } => cov.nrows(),
            NoiseSpec::Laplace { scale } => scale.len(),
            NoiseSpec::GaussianMixture { nominal, .. } => nominal.nrows(),
            NoiseSpec::BetaOutlier { nominal, .. } => nominal.nrows(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        let prob_ok = |k: f64| (0.0..=1.0).contains(&k);
        match self {
            NoiseSpec::Gaussian { cov } => cholesky_semidefinite(cov).map(|_| ()),
            NoiseSpec::Laplace { scale } => {
                if scale.iter().all(|b| *b > 0.0 && b.is_finite()) {
                    Ok(())
                } else {
                    Err(Error::InvalidConfig("Laplace scales must be positive".into()))
                }
            }
            NoiseSpec::GaussianMixture { k, nominal, outlier } => {
                if !prob_ok(*k) {
                    return Err(Error::InvalidConfig(format!("outlier probability {k} outside [0, 1]")));
                }
                cholesky_semidefinite(nominal)?;
                cholesky_semidefinite(outlier).map(|_| ())
            }
            NoiseSpec::BetaOutlier { k, a, b, nominal } => {
                if !prob_ok(*k) || !(*a > 0.0 && *b > 0.0) {
                    return Err(Error::InvalidConfig("invalid Beta outlier parameters".into()));
                }
                cholesky_semidefinite(nominal).map(|_| ())
            }
        }
    }
}

/// Multivariate normal, used for initial-state draws.
#[derive(Debug, Clone, PartialEq)]
pub struct GaussianDistribution {
    pub mean: DVector<f64>,
    pub cov: DMatrix<f64>,
}

impl GaussianDistribution {
    pub fn new(mean: DVector<f64>, cov: DMatrix<f64>) -> Self {
        Self { mean, cov }
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> Result<DVector<f64>> {
        Ok(&self.mean + gaussian(&self.cov, rng)?)
    }
}

fn gaussian<R: Rng + ?Sized>(cov: &DMatrix<f64>, rng: &mut R) -> Result<DVector<f64>> {
    let l = cholesky_semidefinite(cov)?;
    let z = DVector::from_fn(cov.nrows(), |_, _| StandardNormal.sample(rng));
    Ok(l * z)
}

/// Draws one noise vector. Mixture components are selected by a uniform draw
/// made before the component sample itself.
pub fn sample_noise<R: Rng + ?Sized>(spec: &NoiseSpec, rng: &mut R) -> Result<DVector<f64>> {
    match spec {
        NoiseSpec::Gaussian { cov } => gaussian(cov, rng),
        NoiseSpec::Laplace { scale } => Ok(DVector::from_fn(scale.len(), |i, _| {
            let e: f64 = Exp1.sample(rng);
            if rng.random::<bool>() {
                scale[i] * e
            } else {
                -scale[i] * e
            }
        })),
        NoiseSpec::GaussianMixture { k, nominal, outlier } => {
            if rng.random::<f64>() < *k {
                gaussian(outlier, rng)
            } else {
                gaussian(nominal, rng)
            }
        }
        NoiseSpec::BetaOutlier { k, a, b, nominal } => {
            if rng.random::<f64>() < *k {
                let beta = Beta::new(*a, *b)
                    .map_err(|e| Error::InvalidConfig(format!("Beta({a}, {b}): {e}")))?;
                let v: f64 = beta.sample(rng);
                Ok(DVector::from_element(nominal.nrows(), v))
            } else {
                gaussian(nominal, rng)
            }
        }
    }
}
