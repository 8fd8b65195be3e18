//! Drives the Cholesky-factor covariance step towards a fixed information
//! target and prints how fast each exponent mode gets there.

use nalgebra::{dmatrix, DMatrix};
use nano_filter::filters::{chol_cov_step, CholeskyParams, ExponentMode, NanoIterState};
use nano_filter::linalg::{frobenius_norm, spd_inverse};

fn main() -> nano_filter::Result<()> {
    let prior_cov = dmatrix![1.0, 0.3; 0.3, 0.5];
    let prior_inv = spd_inverse(&prior_cov)?;
    // Expected Hessian of a moderately informative measurement.
    let v_xx = dmatrix![2.0, 0.4; 0.4, 0.8];
    let target_cov = spd_inverse(&(&v_xx + &prior_inv))?;

    for mode in [ExponentMode::Residual, ExponentMode::Literal] {
        for order in [1, 4] {
            let params = CholeskyParams { exponent_mode: mode, exp_order: order, ..CholeskyParams::default() };
            let mut state = NanoIterState { k: 0, mean: nalgebra::dvector![0.0, 0.0], cov: prior_cov.clone(), factor: None };
            print!("{mode:>8}, order {order}:");
            for _ in 0..6 {
                state = chol_cov_step(&state, &v_xx, &prior_inv, &params)?;
                print!(" {:.2e}", distance(&state.cov, &target_cov));
            }
            println!();
        }
    }
    println!("(distance to the direct-update covariance after each step)");
    Ok(())
}

fn distance(a: &DMatrix<f64>, b: &DMatrix<f64>) -> f64 {
    frobenius_norm(&(a - b))
}
