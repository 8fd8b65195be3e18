//! Dense kernels for small symmetric positive-definite matrices.
//!
//! Every SPD computation in the crate (inversion, solves, square roots for
//! sigma points) goes through [`cholesky_factor`], so a loss of positive
//! definiteness surfaces in exactly one place as
//! [`Error::NotPositiveDefinite`].

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};

/// Relative pivot threshold, scaled by the largest diagonal entry.
pub const PIVOT_TOLERANCE: f64 = 1e-12;

/// Relative asymmetry accepted by [`cholesky_factor`].
pub const SYMMETRY_TOLERANCE: f64 = 1e-10;

/// Lower-triangular matrix with exactly-zero strict upper part.
#[derive(Debug, Clone, PartialEq)]
pub struct LowerTriangular(DMatrix<f64>);

impl LowerTriangular {
    /// Wraps `m`, zeroing anything above the diagonal.
    pub fn from_lower(mut m: DMatrix<f64>) -> Self {
        assert!(m.is_square(), "LowerTriangular requires a square matrix");
        let n = m.nrows();
        for j in 1..n {
            for i in 0..j {
                m[(i, j)] = 0.0;
            }
        }
        Self(m)
    }

    pub fn dim(&self) -> usize {
        self.0.nrows()
    }

    pub fn as_matrix(&self) -> &DMatrix<f64> {
        &self.0
    }

    pub fn into_matrix(self) -> DMatrix<f64> {
        self.0
    }

    pub fn min_diagonal(&self) -> f64 {
        self.0.diagonal().iter().copied().fold(f64::INFINITY, f64::min)
    }

    /// `L·Lᵀ`.
    pub fn gram(&self) -> DMatrix<f64> {
        symmetrize(&(&self.0 * self.0.transpose()))
    }

    /// Solves `L·X = B` by forward substitution.
    pub fn solve_lower(&self, b: &DMatrix<f64>) -> DMatrix<f64> {
        let n = self.dim();
        assert_eq!(b.nrows(), n);
        let mut x = b.clone();
        for c in 0..x.ncols() {
            for i in 0..n {
                let mut s = x[(i, c)];
                for k in 0..i {
                    s -= self.0[(i, k)] * x[(k, c)];
                }
                x[(i, c)] = s / self.0[(i, i)];
            }
        }
        x
    }

    /// Solves `Lᵀ·X = B` by back substitution.
    pub fn solve_upper_transpose(&self, b: &DMatrix<f64>) -> DMatrix<f64> {
        let n = self.dim();
        assert_eq!(b.nrows(), n);
        let mut x = b.clone();
        for c in 0..x.ncols() {
            for i in (0..n).rev() {
                let mut s = x[(i, c)];
                for k in i + 1..n {
                    s -= self.0[(k, i)] * x[(k, c)];
                }
                x[(i, c)] = s / self.0[(i, i)];
            }
        }
        x
    }

    /// `L⁻¹` computed by forward substitution against the identity.
    pub fn inverse(&self) -> DMatrix<f64> {
        self.solve_lower(&DMatrix::identity(self.dim(), self.dim()))
    }
}

fn max_abs(a: &DMatrix<f64>) -> f64 {
    a.iter().fold(0.0_f64, |m, v| m.max(v.abs()))
}

fn check_symmetric(a: &DMatrix<f64>) -> Result<()> {
    if !a.is_square() {
        return Err(Error::DimensionMismatch { expected: a.nrows(), got: a.ncols() });
    }
    let scale = max_abs(a).max(f64::MIN_POSITIVE);
    let n = a.nrows();
    let mut worst = 0.0_f64;
    for i in 0..n {
        for j in i + 1..n {
            worst = worst.max((a[(i, j)] - a[(j, i)]).abs());
        }
    }
    let asymmetry = worst / scale;
    if asymmetry > SYMMETRY_TOLERANCE || asymmetry.is_nan() {
        return Err(Error::NotSymmetric { asymmetry });
    }
    Ok(())
}

/// Lower Cholesky factor `L` with `L·Lᵀ = A`.
///
/// Only the lower triangle of `A` is read after the symmetry check. A pivot at
/// or below `1e-12 · max(diag A)` is reported as [`Error::NotPositiveDefinite`].
pub fn cholesky_factor(a: &DMatrix<f64>) -> Result<LowerTriangular> {
    check_symmetric(a)?;
    let n = a.nrows();
    let max_diag = a.diagonal().iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if n > 0 && !(max_diag > 0.0 && max_diag.is_finite()) {
        return Err(Error::NotPositiveDefinite { index: 0, pivot: max_diag });
    }
    let threshold = PIVOT_TOLERANCE * max_diag;
    let mut l = DMatrix::<f64>::zeros(n, n);
    for j in 0..n {
        let mut pivot = a[(j, j)];
        for k in 0..j {
            pivot -= l[(j, k)] * l[(j, k)];
        }
        if !(pivot > threshold) {
            return Err(Error::NotPositiveDefinite { index: j, pivot });
        }
        let d = pivot.sqrt();
        l[(j, j)] = d;
        for i in j + 1..n {
            let mut s = a[(i, j)];
            for k in 0..j {
                s -= l[(i, k)] * l[(j, k)];
            }
            l[(i, j)] = s / d;
        }
    }
    Ok(LowerTriangular(l))
}

/// Square-root factor of a positive *semi*-definite matrix.
///
/// Columns whose pivot falls under the relative tolerance are zeroed instead of
/// failing, so a zero covariance yields a zero factor. Used for noise sampling,
/// where degenerate covariances are legitimate.
pub fn cholesky_semidefinite(a: &DMatrix<f64>) -> Result<DMatrix<f64>> {
    check_symmetric(a)?;
    let n = a.nrows();
    let max_diag = a.diagonal().iter().copied().fold(0.0_f64, f64::max);
    let threshold = PIVOT_TOLERANCE * max_diag;
    let mut l = DMatrix::<f64>::zeros(n, n);
    for j in 0..n {
        let mut pivot = a[(j, j)];
        for k in 0..j {
            pivot -= l[(j, k)] * l[(j, k)];
        }
        if pivot < -1e-8 * max_diag {
            return Err(Error::NotPositiveDefinite { index: j, pivot });
        }
        if pivot <= threshold {
            continue;
        }
        let d = pivot.sqrt();
        l[(j, j)] = d;
        for i in j + 1..n {
            let mut s = a[(i, j)];
            for k in 0..j {
                s -= l[(i, k)] * l[(j, k)];
            }
            l[(i, j)] = s / d;
        }
    }
    Ok(l)
}

/// `true` when [`cholesky_factor`] succeeds.
pub fn is_positive_definite(a: &DMatrix<f64>) -> bool {
    cholesky_factor(a).is_ok()
}

/// Solves `A·X = B` for symmetric positive-definite `A` via its Cholesky factor.
pub fn spd_solve(a: &DMatrix<f64>, b: &DMatrix<f64>) -> Result<DMatrix<f64>> {
    if b.nrows() != a.nrows() {
        return Err(Error::DimensionMismatch { expected: a.nrows(), got: b.nrows() });
    }
    let l = cholesky_factor(a)?;
    Ok(l.solve_upper_transpose(&l.solve_lower(b)))
}

pub fn spd_solve_vec(a: &DMatrix<f64>, b: &DVector<f64>) -> Result<DVector<f64>> {
    let x = spd_solve(a, &DMatrix::from_column_slice(b.len(), 1, b.as_slice()))?;
    Ok(DVector::from_column_slice(x.as_slice()))
}

/// `A⁻¹` for SPD `A`, symmetrized.
pub fn spd_inverse(a: &DMatrix<f64>) -> Result<DMatrix<f64>> {
    let n = a.nrows();
    Ok(symmetrize(&spd_solve(a, &DMatrix::identity(n, n))?))
}

/// `(A + Aᵀ) / 2`.
pub fn symmetrize(a: &DMatrix<f64>) -> DMatrix<f64> {
    (a + a.transpose()) * 0.5
}

pub fn frobenius_norm(a: &DMatrix<f64>) -> f64 {
    a.iter().map(|v| v * v).sum::<f64>().sqrt()
}

/// Truncated exponential series `Σ_{j=0}^{order} Aʲ / j!`.
pub fn matrix_exp_truncated(a: &DMatrix<f64>, order: usize) -> DMatrix<f64> {
    assert!(a.is_square(), "matrix exponential requires a square matrix");
    let n = a.nrows();
    let mut sum = DMatrix::<f64>::identity(n, n);
    let mut term = DMatrix::<f64>::identity(n, n);
    for j in 1..=order {
        term = (&term * a) / j as f64;
        sum += &term;
    }
    sum
}
