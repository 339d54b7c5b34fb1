//! Cholesky factorization of real symmetric positive-definite matrices,
//! used for the regularized normal equations inside the recovery solver.

use crate::error::{Error, Result};
use crate::scalar::Real;

/// Lower-triangular Cholesky factor, stored row-major and densely.
pub struct Cholesky<T: Real> {
    n: usize,
    l: Vec<T>,
}

impl<T: Real> Cholesky<T> {
    /// Factors a symmetric positive-definite matrix given as a row-major
    /// dense buffer of size n×n. Only the lower triangle is read.
    pub fn factor(mut a: Vec<T>, n: usize) -> Result<Self> {
        assert_eq!(a.len(), n * n);
        for j in 0..n {
            for k in 0..j {
                // a[j][k] = (a[j][k] − Σ_{l<k} L[j][l] L[k][l]) / L[k][k]
                let mut sum = a[j * n + k];
                for l in 0..k {
                    sum = sum - a[j * n + l] * a[k * n + l];
                }
                a[j * n + k] = sum / a[k * n + k];
            }
            let mut sum = a[j * n + j];
            for l in 0..j {
                sum = sum - a[j * n + l] * a[j * n + l];
            }
            if sum <= T::zero() {
                return Err(Error::invalid(format!(
                    "matrix not positive definite at pivot {j}"
                )));
            }
            a[j * n + j] = sum.sqrt();
        }
        Ok(Self { n, l: a })
    }

    /// Solves A x = b via the two triangular solves.
    pub fn solve(&self, b: &[T]) -> Vec<T> {
        let n = self.n;
        assert_eq!(b.len(), n);
        let mut x = b.to_vec();
        // Forward: L y = b
        for j in 0..n {
            let mut sum = x[j];
            let row = &self.l[j * n..j * n + j];
            for (l, &ljl) in row.iter().enumerate() {
                sum = sum - ljl * x[l];
            }
            x[j] = sum / self.l[j * n + j];
        }
        // Backward: Lᵀ x = y
        for j in (0..n).rev() {
            let mut sum = x[j];
            for l in j + 1..n {
                sum = sum - self.l[l * n + j] * x[l];
            }
            x[j] = sum / self.l[j * n + j];
        }
        x
    }
}
