//! Sigma-point moment matching.
//!
//! A [`SigmaPointRule`] turns a Gaussian `N(μ, Σ)` into a weighted
//! [`CollocationSet`]; the set then approximates Gaussian expectations of
//! arbitrary functions by weighted sums over its points. Points are always
//! `μ + L·z` with `L` the lower Cholesky factor of `Σ` and `z` the rule's unit
//! nodes.

use std::fmt;
use std::str::FromStr;

use nalgebra::{DMatrix, DVector, SymmetricEigen};

use crate::error::{Error, Result};
use crate::linalg::{cholesky_factor, symmetrize};

/// Largest supported Gauss–Hermite order per axis.
pub const MAX_HERMITE_ORDER: usize = 10;

/// Upper bound on the size of a tensor-product Gauss–Hermite grid.
pub const MAX_HERMITE_POINTS: usize = 100_000;

/// Unit nodes with their mean and covariance weights.
type UnitNodes = (Vec<DVector<f64>>, Vec<f64>, Vec<f64>);

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub enum SigmaPointRule {
    /// Scaled unscented transform. `kappa = None` selects `3 − n`.
    Unscented { alpha: f64, beta: f64, kappa: Option<f64> },
    /// Third-degree spherical–radial cubature, `2n` points at `±√n·eᵢ`.
    #[default]
    Cubature,
    /// Tensor-product Gauss–Hermite rule with `order` nodes per axis.
    GaussHermite { order: usize },
}

impl SigmaPointRule {
    pub fn unscented() -> Self {
        SigmaPointRule::Unscented { alpha: 1.0, beta: 2.0, kappa: None }
    }

    pub fn gauss_hermite(order: usize) -> Result<Self> {
        let rule = SigmaPointRule::GaussHermite { order };
        rule.validate(1)?;
        Ok(rule)
    }

    /// Number of points the rule produces in dimension `n`.
    pub fn num_points(&self, n: usize) -> usize {
        match *self {
            SigmaPointRule::Unscented { .. } => 2 * n + 1,
            SigmaPointRule::Cubature => 2 * n,
            SigmaPointRule::GaussHermite { order } => order.pow(n as u32),
        }
    }

    /// Checks the rule can be applied in dimension `n`.
    pub fn validate(&self, n: usize) -> Result<()> {
        match *self {
            SigmaPointRule::Unscented { alpha, .. } => {
                let lambda = self.unscented_lambda(n);
                if !(alpha > 0.0) || !(n as f64 + lambda > 0.0) {
                    return Err(Error::InvalidRule(format!(
                        "unscented rule needs n + λ > 0 (n = {n}, λ = {lambda})"
                    )));
                }
            }
            SigmaPointRule::Cubature => {}
            SigmaPointRule::GaussHermite { order } => {
                if !(2..=MAX_HERMITE_ORDER).contains(&order) {
                    return Err(Error::InvalidRule(format!(
                        "Gauss-Hermite order must be in 2..={MAX_HERMITE_ORDER}, got {order}"
                    )));
                }
                if (n as f64) * (order as f64).ln() > (MAX_HERMITE_POINTS as f64).ln() {
                    return Err(Error::InvalidRule(format!(
                        "Gauss-Hermite grid {order}^{n} exceeds {MAX_HERMITE_POINTS} points"
                    )));
                }
            }
        }
        Ok(())
    }

    fn unscented_lambda(&self, n: usize) -> f64 {
        match *self {
            SigmaPointRule::Unscented { alpha, kappa, .. } => {
                let n = n as f64;
                let kappa = kappa.unwrap_or(3.0 - n);
                alpha * alpha * (n + kappa) - n
            }
            _ => 0.0,
        }
    }

    /// Unit nodes `z_i` for `N(0, I_n)` with mean and covariance weights.
    fn unit_nodes(&self, n: usize) -> Result<UnitNodes> {
        self.validate(n)?;
        match *self {
            SigmaPointRule::Unscented { alpha, beta, .. } => {
                let lambda = self.unscented_lambda(n);
                let c = n as f64 + lambda;
                let scale = c.sqrt();
                let mut nodes = vec![DVector::zeros(n)];
                let w0 = lambda / c;
                let wi = 1.0 / (2.0 * c);
                let mut wm = vec![w0];
                let mut wc = vec![w0 + 1.0 - alpha * alpha + beta];
                for sign in [1.0, -1.0] {
                    for i in 0..n {
                        let mut z = DVector::zeros(n);
                        z[i] = sign * scale;
                        nodes.push(z);
                        wm.push(wi);
                        wc.push(wi);
                    }
                }
                Ok((nodes, wm, wc))
            }
            SigmaPointRule::Cubature => {
                let scale = (n as f64).sqrt();
                let w = 1.0 / (2 * n) as f64;
                let mut nodes = Vec::with_capacity(2 * n);
                for sign in [1.0, -1.0] {
                    for i in 0..n {
                        let mut z = DVector::zeros(n);
                        z[i] = sign * scale;
                        nodes.push(z);
                    }
                }
                Ok((nodes, vec![w; 2 * n], vec![w; 2 * n]))
            }
            SigmaPointRule::GaussHermite { order } => {
                let (x1, w1) = hermite_nodes(order);
                let total = order.pow(n as u32);
                let mut nodes = Vec::with_capacity(total);
                let mut weights = Vec::with_capacity(total);
                let mut idx = vec![0usize; n];
                for _ in 0..total {
                    let z = DVector::from_iterator(n, idx.iter().map(|&k| x1[k]));
                    let w: f64 = idx.iter().map(|&k| w1[k]).product();
                    nodes.push(z);
                    weights.push(w);
                    // odometer increment, last axis fastest
                    for d in (0..n).rev() {
                        idx[d] += 1;
                        if idx[d] < order {
                            break;
                        }
                        idx[d] = 0;
                    }
                }
                Ok((nodes, weights.clone(), weights))
            }
        }
    }
}

impl fmt::Display for SigmaPointRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SigmaPointRule::Unscented { .. } => f.write_str("unscented"),
            SigmaPointRule::Cubature => f.write_str("cubature"),
            SigmaPointRule::GaussHermite { order } => write!(f, "gh:{order}"),
        }
    }
}

impl FromStr for SigmaPointRule {
    type Err = Error;

    /// Parses `cubature`, `unscented` or `gh:<p>`.
    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "cubature" => Ok(SigmaPointRule::Cubature),
            "unscented" => Ok(SigmaPointRule::unscented()),
            other => {
                let order = other
                    .strip_prefix("gh:")
                    .and_then(|p| p.parse::<usize>().ok())
                    .ok_or_else(|| Error::InvalidRule(format!("unknown rule '{other}'")))?;
                SigmaPointRule::gauss_hermite(order)
            }
        }
    }
}

/// One-dimensional Gauss–Hermite nodes and weights for the standard normal
/// density, from the eigen-decomposition of the symmetric tridiagonal Jacobi
/// matrix (Golub–Welsch). Nodes are returned in ascending order.
pub fn hermite_nodes(order: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(order >= 1);
    let mut jacobi = DMatrix::<f64>::zeros(order, order);
    for k in 1..order {
        let b = (k as f64).sqrt();
        jacobi[(k - 1, k)] = b;
        jacobi[(k, k - 1)] = b;
    }
    let eig = SymmetricEigen::new(jacobi);
    let mut pairs: Vec<(f64, f64)> = (0..order)
        .map(|i| {
            let v0 = eig.eigenvectors[(0, i)];
            (eig.eigenvalues[i], v0 * v0)
        })
        .collect();
    pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
    // exact zero for the central node of odd orders
    for p in pairs.iter_mut() {
        if p.0.abs() < 1e-14 {
            p.0 = 0.0;
        }
    }
    let total: f64 = pairs.iter().map(|p| p.1).sum();
    pairs.into_iter().map(|(x, w)| (x, w / total)).unzip()
}

/// Realized collocation points `χ_i` with their weights.
#[derive(Debug, Clone)]
pub struct CollocationSet {
    pub points: Vec<DVector<f64>>,
    pub mean_weights: Vec<f64>,
    pub cov_weights: Vec<f64>,
    pub center: DVector<f64>,
    pub spread: DMatrix<f64>,
}

/// Output of [`CollocationSet::propagate_with_cross`].
#[derive(Debug, Clone)]
pub struct Propagated {
    pub mean: DVector<f64>,
    pub cov: DMatrix<f64>,
    /// `Σ w_i^c (χ_i − μ)(h(χ_i) − μ′)ᵀ`.
    pub cross: DMatrix<f64>,
}

/// Collocation points of `rule` for `N(mean, cov)`.
pub fn generate_points(
    rule: &SigmaPointRule,
    mean: &DVector<f64>,
    cov: &DMatrix<f64>,
) -> Result<CollocationSet> {
    let n = mean.len();
    if cov.nrows() != n || cov.ncols() != n {
        return Err(Error::DimensionMismatch { expected: n, got: cov.nrows() });
    }
    let sqrt = cholesky_factor(cov)?;
    let (nodes, mean_weights, cov_weights) = rule.unit_nodes(n)?;
    let points = nodes
        .iter()
        .map(|z| mean + sqrt.as_matrix() * z)
        .collect();
    Ok(CollocationSet {
        points,
        mean_weights,
        cov_weights,
        center: mean.clone(),
        spread: cov.clone(),
    })
}

fn eval_all<F>(points: &[DVector<f64>], mut h: F) -> Result<Vec<DVector<f64>>>
where
    F: FnMut(&DVector<f64>) -> Result<DVector<f64>>,
{
    points
        .iter()
        .enumerate()
        .map(|(i, p)| {
            let v = h(p)?;
            if v.iter().all(|x| x.is_finite()) {
                Ok(v)
            } else {
                Err(Error::NonFiniteFunctionValue { point: i })
            }
        })
        .collect()
}

impl CollocationSet {
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Matched mean and covariance of `h(x)`, `x ~ N(center, spread)`.
    pub fn propagate<F>(&self, h: F) -> Result<(DVector<f64>, DMatrix<f64>)>
    where
        F: FnMut(&DVector<f64>) -> Result<DVector<f64>>,
    {
        let values = eval_all(&self.points, h)?;
        let mean = self.weighted_mean(&values);
        let cov = self.weighted_cov(&values, &mean);
        Ok((mean, cov))
    }

    /// As [`propagate`](Self::propagate), plus the input–output cross-covariance.
    pub fn propagate_with_cross<F>(&self, h: F) -> Result<Propagated>
    where
        F: FnMut(&DVector<f64>) -> Result<DVector<f64>>,
    {
        let values = eval_all(&self.points, h)?;
        let mean = self.weighted_mean(&values);
        let cov = self.weighted_cov(&values, &mean);
        let n = self.center.len();
        let mut cross = DMatrix::zeros(n, mean.len());
        for ((p, v), w) in self.points.iter().zip(&values).zip(&self.cov_weights) {
            cross += (p - &self.center) * (v - &mean).transpose() * *w;
        }
        Ok(Propagated { mean, cov, cross })
    }

    /// `Σ w_i h(χ_i)` for a matrix-valued `h`.
    pub fn expected_matrix<F>(&self, mut h: F) -> Result<DMatrix<f64>>
    where
        F: FnMut(&DVector<f64>) -> Result<DMatrix<f64>>,
    {
        let mut acc: Option<DMatrix<f64>> = None;
        for (i, (p, w)) in self.points.iter().zip(&self.mean_weights).enumerate() {
            let v = h(p)?;
            if !v.iter().all(|x| x.is_finite()) {
                return Err(Error::NonFiniteFunctionValue { point: i });
            }
            match acc.as_mut() {
                Some(a) => *a += v * *w,
                None => acc = Some(v * *w),
            }
        }
        Ok(acc.unwrap_or_else(|| DMatrix::zeros(0, 0)))
    }

    fn weighted_mean(&self, values: &[DVector<f64>]) -> DVector<f64> {
        let m = values.first().map_or(0, |v| v.len());
        let mut mean = DVector::zeros(m);
        for (v, w) in values.iter().zip(&self.mean_weights) {
            mean += v * *w;
        }
        mean
    }

    fn weighted_cov(&self, values: &[DVector<f64>], mean: &DVector<f64>) -> DMatrix<f64> {
        let m = mean.len();
        let mut cov = DMatrix::zeros(m, m);
        for (v, w) in values.iter().zip(&self.cov_weights) {
            let d = v - mean;
            cov += &d * d.transpose() * *w;
        }
        symmetrize(&cov)
    }
}
