//! Where the exact-Hessian update breaks and the positive-definite
//! variants do not.
//!
//! Near the origin the Duffing measurement `x₁³` has large negative
//! curvature in the log-likelihood once the reading is far from the
//! prediction, so `P⁻⁻¹ + E[∇²ℓ]` is indefinite.

use nalgebra::{dmatrix, dvector};
use nano_filter::filters::{hess_loglik_exact, hess_loglik_gn};
use nano_filter::models::DuffingModel;
use nano_filter::{Estimator, FilterKind, FilterSettings, GaussianBelief};

fn main() -> nano_filter::Result<()> {
    let model = DuffingModel::default();
    let x = dvector![0.1, 0.0];
    let y = dvector![5.0];

    let exact = hess_loglik_exact(&x, &y, &model)?;
    let gn = hess_loglik_gn(&x, &model)?;
    let eig = |m: nalgebra::DMatrix<f64>| {
        let e = m.symmetric_eigenvalues();
        format!("{:.3e}, {:.3e}", e.min(), e.max())
    };
    println!("exact Hessian eigenvalues at x = (0.1, 0): {}", eig(exact));
    println!("Gauss-Newton eigenvalues:                  {}", eig(gn));

    let prior = GaussianBelief::new(x, dmatrix![0.05, 0.0; 0.0, 0.05]);
    for kind in [FilterKind::NanoNopd, FilterKind::Nano, FilterKind::NanoChol] {
        let est = Estimator::new(kind, &FilterSettings::default());
        match est.update(&prior, &y, &model) {
            Ok((post, diag)) => println!(
                "{kind:>9}: mean ({:.4}, {:.4}), {} iterations, min covariance eigenvalue {:.3e}",
                post.mean[0],
                post.mean[1],
                diag.iterations,
                post.cov.symmetric_eigenvalues().min()
            ),
            Err(e) => println!("{kind:>9}: {e}"),
        }
    }
    Ok(())
}
