//! Dense complex matrices and unit vectors, row-major storage.

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::scalar::{lit, Real};

/// Dense complex matrix, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexMatrix<T: Real> {
    rows: usize,
    cols: usize,
    data: Vec<Complex<T>>,
}

impl<T: Real> ComplexMatrix<T> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![Complex::new(T::zero(), T::zero()); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for j in 0..n {
            m[(j, j)] = Complex::new(T::one(), T::zero());
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Complex<T>>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::invalid("ragged rows in matrix literal"));
        }
        Ok(Self {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        })
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Complex<T>) -> Self {
        let mut m = Self::zeros(rows, cols);
        for j in 0..rows {
            for k in 0..cols {
                m[(j, k)] = f(j, k);
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn dim(&self) -> usize {
        debug_assert_eq!(self.rows, self.cols);
        self.rows
    }

    pub fn data(&self) -> &[Complex<T>] {
        &self.data
    }

    pub fn row(&self, j: usize) -> &[Complex<T>] {
        &self.data[j * self.cols..(j + 1) * self.cols]
    }

    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|z| z.re.is_finite() && z.im.is_finite())
    }

    pub fn conj_transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |j, k| self[(k, j)].conj())
    }

    pub fn trace(&self) -> Complex<T> {
        (0..self.dim()).map(|j| self[(j, j)]).fold(
            Complex::new(T::zero(), T::zero()),
            |acc, z| acc + z,
        )
    }

    pub fn scale(&self, s: Complex<T>) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|z| z * s).collect(),
        }
    }

    pub fn scale_re(&self, s: T) -> Self {
        self.scale(Complex::new(s, T::zero()))
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }

    /// In-place `self += w * other`.
    pub fn add_scaled(&mut self, w: T, other: &Self) {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let w = Complex::new(w, T::zero());
        for (a, b) in self.data.iter_mut().zip(&other.data) {
            *a += b * w;
        }
    }

    pub fn matmul(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows);
        let mut out = Self::zeros(self.rows, other.cols);
        for j in 0..self.rows {
            for l in 0..self.cols {
                let a = self[(j, l)];
                if a.re.is_zero() && a.im.is_zero() {
                    continue;
                }
                let src = other.row(l);
                let dst = &mut out.data[j * other.cols..(j + 1) * other.cols];
                for (d, s) in dst.iter_mut().zip(src) {
                    *d += a * s;
                }
            }
        }
        out
    }

    /// Matrix-vector product.
    pub fn matvec(&self, v: &[Complex<T>]) -> Vec<Complex<T>> {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|j| {
                self.row(j)
                    .iter()
                    .zip(v)
                    .fold(Complex::new(T::zero(), T::zero()), |acc, (a, x)| acc + a * x)
            })
            .collect()
    }

    /// Kronecker product: block (j,k) of the output is `self[j][k] * other`.
    pub fn kron(&self, other: &Self) -> Self {
        let mut out = Self::zeros(self.rows * other.rows, self.cols * other.cols);
        for j in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(j, k)];
                for p in 0..other.rows {
                    for q in 0..other.cols {
                        out[(j * other.rows + p, k * other.cols + q)] = a * other[(p, q)];
                    }
                }
            }
        }
        out
    }

    pub fn frobenius_norm(&self) -> T {
        self.data
            .iter()
            .fold(T::zero(), |acc, z| acc + z.norm_sqr())
            .sqrt()
    }

    /// Largest elementwise deviation from Hermitian symmetry.
    pub fn hermitian_asymmetry(&self) -> T {
        let n = self.dim();
        let mut worst = T::zero();
        for j in 0..n {
            for k in j..n {
                let gap = (self[(j, k)] - self[(k, j)].conj()).norm();
                if gap > worst {
                    worst = gap;
                }
            }
        }
        worst
    }

    /// `(H + H*)/2`; removes entry-level asymmetry before spectral work.
    pub fn symmetrize(&self) -> Self {
        let half = Complex::new(lit::<T>(0.5), T::zero());
        let adj = self.conj_transpose();
        self.add(&adj).scale(half)
    }

    /// Errors if the asymmetry exceeds `tol` (corrupted input guard).
    pub fn check_hermitian(&self, tol: T) -> Result<()> {
        if self.rows != self.cols {
            return Err(Error::DimensionMismatch {
                context: "hermitian check on non-square matrix",
                left: self.rows,
                right: self.cols,
            });
        }
        let asym = self.hermitian_asymmetry();
        if asym > tol {
            return Err(Error::NotHermitian {
                asymmetry: asym.to_f64().unwrap_or(f64::NAN),
                tolerance: tol.to_f64().unwrap_or(f64::NAN),
            });
        }
        Ok(())
    }
}

impl<T: Real> std::ops::Index<(usize, usize)> for ComplexMatrix<T> {
    type Output = Complex<T>;
    #[inline]
    fn index(&self, (j, k): (usize, usize)) -> &Complex<T> {
        &self.data[j * self.cols + k]
    }
}

impl<T: Real> std::ops::IndexMut<(usize, usize)> for ComplexMatrix<T> {
    #[inline]
    fn index_mut(&mut self, (j, k): (usize, usize)) -> &mut Complex<T> {
        &mut self.data[j * self.cols + k]
    }
}

/// Unit-norm complex vector.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector<T: Real> {
    amplitudes: Vec<Complex<T>>,
}

impl<T: Real> StateVector<T> {
    /// Builds a state vector, checking unit norm to 1e-10.
    pub fn new(amplitudes: Vec<Complex<T>>) -> Result<Self> {
        let norm = amplitudes
            .iter()
            .fold(T::zero(), |acc, z| acc + z.norm_sqr())
            .sqrt();
        if (norm - T::one()).abs() > lit(1e-10) {
            return Err(Error::invalid(format!(
                "state vector norm {} differs from 1",
                norm
            )));
        }
        Ok(Self { amplitudes })
    }

    /// Normalizes and wraps; errors on the zero vector.
    pub fn normalized(mut amplitudes: Vec<Complex<T>>) -> Result<Self> {
        let norm = amplitudes
            .iter()
            .fold(T::zero(), |acc, z| acc + z.norm_sqr())
            .sqrt();
        if norm <= T::zero() {
            return Err(Error::invalid("cannot normalize the zero vector"));
        }
        let inv = Complex::new(T::one() / norm, T::zero());
        for z in &mut amplitudes {
            *z = *z * inv;
        }
        Ok(Self { amplitudes })
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitudes(&self) -> &[Complex<T>] {
        &self.amplitudes
    }

    /// ⟨self, other⟩ with the left argument conjugated.
    pub fn inner(&self, other: &Self) -> Complex<T> {
        self.amplitudes
            .iter()
            .zip(&other.amplitudes)
            .fold(Complex::new(T::zero(), T::zero()), |acc, (a, b)| {
                acc + a.conj() * b
            })
    }

    /// Rank-1 projector |v⟩⟨v|.
    pub fn outer(&self) -> ComplexMatrix<T> {
        let d = self.dim();
        ComplexMatrix::from_fn(d, d, |j, k| self.amplitudes[j] * self.amplitudes[k].conj())
    }

    /// Tensor product, `self` on the most-significant qubits.
    pub fn kron(&self, other: &Self) -> Self {
        let mut amplitudes = Vec::with_capacity(self.dim() * other.dim());
        for a in &self.amplitudes {
            for b in &other.amplitudes {
                amplitudes.push(a * b);
            }
        }
        Self { amplitudes }
    }
}

/// Hermitian, trace-1, positive-semidefinite matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix<T: Real> {
    matrix: ComplexMatrix<T>,
}

impl<T: Real> DensityMatrix<T> {
    /// Validates the density-matrix invariants: hermiticity to 1e-12,
    /// trace 1 to 1e-9, minimum eigenvalue ≥ −1e-9.
    pub fn new(matrix: ComplexMatrix<T>) -> Result<Self> {
        matrix.check_hermitian(lit(1e-12)).map_err(|e| {
            Error::InvalidDensityMatrix(e.to_string())
        })?;
        let tr = matrix.trace();
        if (tr.re - T::one()).abs() > lit(1e-9) || tr.im.abs() > lit(1e-9) {
            return Err(Error::InvalidDensityMatrix(format!(
                "trace {} + {}i differs from 1",
                tr.re, tr.im
            )));
        }
        let eig = super::eig::herm_eig(&matrix)?;
        let min = eig.eigenvalues().last().copied().unwrap_or(T::zero());
        if min < lit(-1e-9) {
            return Err(Error::InvalidDensityMatrix(format!(
                "minimum eigenvalue {} is negative",
                min
            )));
        }
        Ok(Self { matrix })
    }

    /// Wraps without re-validating; for matrices produced by routines that
    /// guarantee the invariants by construction (cone projection).
    pub(crate) fn trusted(matrix: ComplexMatrix<T>) -> Self {
        Self { matrix }
    }

    pub fn matrix(&self) -> &ComplexMatrix<T> {
        &self.matrix
    }

    pub fn dim(&self) -> usize {
        self.matrix.dim()
    }

    pub fn into_matrix(self) -> ComplexMatrix<T> {
        self.matrix
    }
}

/// σx Pauli matrix.
pub fn sigma_x<T: Real>() -> ComplexMatrix<T> {
    let mut m = ComplexMatrix::zeros(2, 2);
    m[(0, 1)] = Complex::new(T::one(), T::zero());
    m[(1, 0)] = Complex::new(T::one(), T::zero());
    m
}

/// σy Pauli matrix.
pub fn sigma_y<T: Real>() -> ComplexMatrix<T> {
    let mut m = ComplexMatrix::zeros(2, 2);
    m[(0, 1)] = Complex::new(T::zero(), -T::one());
    m[(1, 0)] = Complex::new(T::zero(), T::one());
    m
}

/// σz Pauli matrix.
pub fn sigma_z<T: Real>() -> ComplexMatrix<T> {
    let mut m = ComplexMatrix::zeros(2, 2);
    m[(0, 0)] = Complex::new(T::one(), T::zero());
    m[(1, 1)] = Complex::new(-T::one(), T::zero());
    m
}
