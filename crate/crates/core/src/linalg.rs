//! Cholesky factorization and inverse for small symmetric matrices.
//!
//! `nalgebra` ships a Cholesky, but it gives no control over the pivot
//! tolerance; here a factorization is rejected as soon as any pivot drops
//! below `PIVOT_RTOL` times the largest diagonal entry, which is how the
//! rest of the crate detects unobservable geometries deterministically.

use nalgebra::Matrix6;

use crate::error::{Error, Result};

/// Relative pivot threshold below which a matrix is declared singular.
pub const PIVOT_RTOL: f64 = 1e-12;

/// Lower-triangular Cholesky factor of a symmetric matrix.
///
/// Fails with [`Error::SingularFim`] if any pivot is `<= PIVOT_RTOL * max_diag`.
pub fn cholesky(a: &Matrix6<f64>) -> Result<Matrix6<f64>> {
    let max_diag = (0..6).map(|i| a[(i, i)]).fold(0.0_f64, f64::max);
    if !max_diag.is_finite() || max_diag <= 0.0 {
        return Err(Error::SingularFim);
    }
    let threshold = PIVOT_RTOL * max_diag;

    let mut l = Matrix6::zeros();
    for j in 0..6 {
        let mut pivot = a[(j, j)];
        for k in 0..j {
            pivot -= l[(j, k)] * l[(j, k)];
        }
        if !(pivot > threshold) {
            return Err(Error::SingularFim);
        }
        let ljj = libm::sqrt(pivot);
        l[(j, j)] = ljj;
        for i in (j + 1)..6 {
            let mut s = a[(i, j)];
            for k in 0..j {
                s -= l[(i, k)] * l[(j, k)];
            }
            l[(i, j)] = s / ljj;
        }
    }
    Ok(l)
}

/// Inverse of a symmetric positive definite matrix via its Cholesky factor.
///
/// The result is symmetrized to remove round-off drift.
pub fn spd_inverse(a: &Matrix6<f64>) -> Result<Matrix6<f64>> {
    let l = cholesky(a)?;

    // Invert L by forward substitution on columns of the identity.
    let mut linv = Matrix6::zeros();
    for col in 0..6 {
        for i in col..6 {
            let mut s = if i == col { 1.0 } else { 0.0 };
            for k in col..i {
                s -= l[(i, k)] * linv[(k, col)];
            }
            linv[(i, col)] = s / l[(i, i)];
        }
    }

    // A^-1 = L^-T L^-1
    let inv = linv.transpose() * linv;
    Ok(symmetrize(&inv))
}

/// `(A + A^T) / 2`.
pub fn symmetrize(a: &Matrix6<f64>) -> Matrix6<f64> {
    (a + a.transpose()) * 0.5
}
