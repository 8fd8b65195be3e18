//! Natural-gradient Gaussian filtering with positive-definite covariance updates.
//!
//! The crate is organized bottom-up:
//!
//! - [`linalg`]: Cholesky-based kernels for small SPD matrices.
//! - [`moments`]: sigma-point rules (unscented, cubature, Gauss–Hermite) and
//!   moment matching over their collocation points.
//! - [`models`]: the state-space model contract, noise generators and the
//!   FM demodulator, satellite attitude and Duffing oscillator benchmarks.
//! - [`filters`]: KF, EKF, IEKF, UKF, PLF and the NANO update with its
//!   Gauss–Newton and Cholesky-factor variants.
//!
//! See the `examples/` directory of this crate for one runnable program per
//! capability.

// `!(x > 0.0)` style checks are kept so that NaN is rejected too.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod filters;
pub mod linalg;
pub mod models;
pub mod moments;

pub use error::{Error, Result};
pub use filters::{Estimator, FilterKind, FilterSettings, GaussianBelief, NanoConfig, UpdateDiagnostics};
pub use models::StateSpaceModel;
pub use moments::SigmaPointRule;
