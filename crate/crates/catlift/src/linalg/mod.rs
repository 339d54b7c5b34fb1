//! Complex dense linear algebra kernel: Kronecker products, Hermitian
//! eigendecomposition, cone/simplex projections, norms and inner products.

pub mod cholesky;
pub mod eig;
pub mod matrix;
pub mod simplex;

pub use cholesky::Cholesky;
pub use eig::{herm_eig, EigenDecomposition};
pub use matrix::{sigma_x, sigma_y, sigma_z, ComplexMatrix, DensityMatrix, StateVector};
pub use simplex::project_simplex;

use crate::error::{Error, Result};
use crate::scalar::{lit, Real};

/// Frobenius-nearest matrix in {ρ = ρ*, Tr ρ = 1, ρ ⪰ 0}: eigendecompose,
/// project the spectrum onto the probability simplex, recompose.
pub fn project_density_cone<T: Real>(h: &ComplexMatrix<T>) -> Result<DensityMatrix<T>> {
    let decomp = herm_eig(h)?;
    let clipped = project_simplex(decomp.eigenvalues());
    let projected = decomp.recompose_with(&clipped).symmetrize();
    Ok(DensityMatrix::trusted(projected))
}

/// Re Tr(A·B) for Hermitian operators of equal dimension. The imaginary part
/// is checked to be negligible and discarded.
pub fn trace_inner<T: Real>(a: &ComplexMatrix<T>, b: &ComplexMatrix<T>) -> Result<T> {
    if a.dim() != b.dim() {
        return Err(Error::DimensionMismatch {
            context: "trace_inner",
            left: a.dim(),
            right: b.dim(),
        });
    }
    let d = a.dim();
    let mut re = T::zero();
    let mut im = T::zero();
    for j in 0..d {
        for k in 0..d {
            let z = a[(j, k)] * b[(k, j)];
            re += z.re;
            im += z.im;
        }
    }
    let scale = T::max(T::one(), re.abs());
    debug_assert!(
        im.abs() <= lit::<T>(1e-10) * scale,
        "imaginary trace residue for a Hermitian pair"
    );
    Ok(re)
}

/// ‖A − B‖_F.
pub fn frobenius_distance<T: Real>(a: &ComplexMatrix<T>, b: &ComplexMatrix<T>) -> Result<T> {
    if a.rows() != b.rows() || a.cols() != b.cols() {
        return Err(Error::DimensionMismatch {
            context: "frobenius_distance",
            left: a.rows(),
            right: b.rows(),
        });
    }
    Ok(a.sub(b).frobenius_norm())
}
