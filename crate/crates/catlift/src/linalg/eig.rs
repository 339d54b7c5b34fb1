//! Hermitian eigendecomposition: Householder reduction to real symmetric
//! tridiagonal form followed by implicit-shift QL iteration, with the
//! eigenvector transform accumulated along the way. Deterministic for
//! identical input.

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::scalar::{lit, Real};

use super::matrix::ComplexMatrix;

/// Spectral factorization A = V Λ V* with eigenvalues sorted descending and
/// orthonormal eigenvector columns.
#[derive(Debug, Clone)]
pub struct EigenDecomposition<T: Real> {
    eigenvalues: Vec<T>,
    eigenvectors: ComplexMatrix<T>,
}

impl<T: Real> EigenDecomposition<T> {
    pub fn eigenvalues(&self) -> &[T] {
        &self.eigenvalues
    }

    /// Eigenvectors as columns, ordered to match the eigenvalues.
    pub fn eigenvectors(&self) -> &ComplexMatrix<T> {
        &self.eigenvectors
    }

    /// V Λ V*.
    pub fn recompose(&self) -> ComplexMatrix<T> {
        self.recompose_with(&self.eigenvalues)
    }

    /// V diag(values) V* for a replacement spectrum.
    pub fn recompose_with(&self, values: &[T]) -> ComplexMatrix<T> {
        let d = self.eigenvectors.rows();
        assert_eq!(values.len(), d);
        let v = &self.eigenvectors;
        ComplexMatrix::from_fn(d, d, |j, k| {
            let mut acc = Complex::new(T::zero(), T::zero());
            for (l, lam) in values.iter().enumerate() {
                if !lam.is_zero() {
                    acc += v[(j, l)] * v[(k, l)].conj() * Complex::new(*lam, T::zero());
                }
            }
            acc
        })
    }
}

/// Eigendecomposition of a Hermitian matrix.
///
/// The input is symmetrized as (H + H*)/2 first; asymmetry above 1e-6
/// is treated as corrupted input and rejected.
pub fn herm_eig<T: Real>(h: &ComplexMatrix<T>) -> Result<EigenDecomposition<T>> {
    h.check_hermitian(lit(1e-6))?;
    let a = h.symmetrize();
    let d = a.dim();
    if d == 0 {
        return Err(Error::invalid("empty matrix"));
    }
    if d == 1 {
        return Ok(EigenDecomposition {
            eigenvalues: vec![a[(0, 0)].re],
            eigenvectors: ComplexMatrix::identity(1),
        });
    }

    let (mut diag, mut sub, mut q) = tridiagonalize(a);
    ql_implicit_shift(&mut diag, &mut sub, &mut q)?;

    // Sort descending; stable so degenerate eigenvalues keep a fixed order.
    let mut order: Vec<usize> = (0..d).collect();
    order.sort_by(|&i, &j| diag[j].partial_cmp(&diag[i]).unwrap());
    let eigenvalues: Vec<T> = order.iter().map(|&i| diag[i]).collect();
    let eigenvectors = ComplexMatrix::from_fn(d, d, |j, k| q[(j, order[k])]);

    Ok(EigenDecomposition {
        eigenvalues,
        eigenvectors,
    })
}

/// z/|z| computed without underflow: z.norm_sqr() of a subnormal-squared
/// entry flushes to zero and naive complex division then yields NaN, so the
/// entry is rescaled by its largest component first.
fn unit_phase<T: Real>(z: Complex<T>) -> Complex<T> {
    let m = z.re.abs().max(z.im.abs());
    if m <= T::zero() {
        return Complex::new(T::one(), T::zero());
    }
    let scaled = Complex::new(z.re / m, z.im / m);
    let inv = T::one() / scaled.norm();
    Complex::new(scaled.re * inv, scaled.im * inv)
}

/// Householder reduction of a Hermitian matrix to real symmetric tridiagonal
/// form. Returns (diagonal, subdiagonal, accumulated unitary Q) with
/// A = Q T Q*.
fn tridiagonalize<T: Real>(mut a: ComplexMatrix<T>) -> (Vec<T>, Vec<T>, ComplexMatrix<T>) {
    let d = a.dim();
    let mut q = ComplexMatrix::identity(d);
    let zero = Complex::new(T::zero(), T::zero());
    let two = lit::<T>(2.0);

    for k in 0..d.saturating_sub(2) {
        // Column below the subdiagonal entry.
        let m = d - k - 1;
        let mut x: Vec<Complex<T>> = (0..m).map(|i| a[(k + 1 + i, k)]).collect();
        let norm = x.iter().fold(T::zero(), |s, z| s + z.norm_sqr()).sqrt();
        if norm <= T::zero() {
            continue;
        }
        let x0 = x[0];
        let phase = unit_phase(x0);
        let alpha = -phase * Complex::new(norm, T::zero());
        x[0] -= alpha;
        let vnorm = x.iter().fold(T::zero(), |s, z| s + z.norm_sqr()).sqrt();
        if vnorm <= norm * T::epsilon() {
            continue;
        }
        let inv = Complex::new(T::one() / vnorm, T::zero());
        let u: Vec<Complex<T>> = x.iter().map(|z| z * inv).collect();

        // Two-sided rank-2 update of the trailing block B = A[k+1.., k+1..]:
        // B ← B − 2(u w* + w u*), with p = B u, K = Re(u* p), w = p − K u.
        let mut p = vec![zero; m];
        for (i, pi) in p.iter_mut().enumerate() {
            let mut acc = zero;
            for (j, uj) in u.iter().enumerate() {
                acc += a[(k + 1 + i, k + 1 + j)] * uj;
            }
            *pi = acc;
        }
        let kappa = u
            .iter()
            .zip(&p)
            .fold(zero, |acc, (ui, pi)| acc + ui.conj() * pi)
            .re;
        let w: Vec<Complex<T>> = p
            .iter()
            .zip(&u)
            .map(|(pi, ui)| pi - ui * Complex::new(kappa, T::zero()))
            .collect();
        let two_c = Complex::new(two, T::zero());
        for i in 0..m {
            for j in 0..m {
                let upd = (u[i] * w[j].conj() + w[i] * u[j].conj()) * two_c;
                let e = a[(k + 1 + i, k + 1 + j)];
                a[(k + 1 + i, k + 1 + j)] = e - upd;
            }
        }

        // The eliminated column collapses to α e₁.
        a[(k + 1, k)] = alpha;
        a[(k, k + 1)] = alpha.conj();
        for i in 2..=m {
            a[(k + i, k)] = zero;
            a[(k, k + i)] = zero;
        }

        // Q ← Q · diag(I, P): columns k+1..d pick up the reflector.
        for r in 0..d {
            let mut acc = zero;
            for (j, uj) in u.iter().enumerate() {
                acc += q[(r, k + 1 + j)] * uj;
            }
            let acc2 = acc * two_c;
            for (j, uj) in u.iter().enumerate() {
                let e = q[(r, k + 1 + j)];
                q[(r, k + 1 + j)] = e - acc2 * uj.conj();
            }
        }
    }

    // Phase-rotate so the subdiagonal becomes real nonnegative.
    let mut s = Complex::new(T::one(), T::zero());
    let mut sub = vec![T::zero(); d.saturating_sub(1)];
    for j in 0..d - 1 {
        let e = a[(j + 1, j)];
        let mag = e.norm();
        sub[j] = mag;
        let phase = unit_phase(e);
        let s_next = s * phase;
        for r in 0..d {
            let e = q[(r, j + 1)];
            q[(r, j + 1)] = e * s_next;
        }
        s = s_next;
    }

    let diag: Vec<T> = (0..d).map(|j| a[(j, j)].re).collect();
    (diag, sub, q)
}

/// Implicit-shift QL on a real symmetric tridiagonal matrix, rotating the
/// (complex) transform columns in step. Classic tql2/tqli scheme.
fn ql_implicit_shift<T: Real>(
    diag: &mut [T],
    sub: &mut [T],
    q: &mut ComplexMatrix<T>,
) -> Result<()> {
    let n = diag.len();
    let mut e = vec![T::zero(); n];
    e[..n - 1].copy_from_slice(sub);
    let eps = T::epsilon();
    let max_iter = 50usize;

    for l in 0..n {
        let mut iter = 0usize;
        loop {
            let mut m = l;
            while m + 1 < n {
                let dd = diag[m].abs() + diag[m + 1].abs();
                if e[m].abs() <= eps * dd {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            iter += 1;
            if iter > max_iter {
                return Err(Error::EigNonConvergence {
                    residual: e[l].abs().to_f64().unwrap_or(f64::NAN),
                    iterations: max_iter,
                });
            }
            let two = lit::<T>(2.0);
            let mut g = (diag[l + 1] - diag[l]) / (two * e[l]);
            let mut r = g.hypot(T::one());
            let denom = g + if g >= T::zero() { r.abs() } else { -r.abs() };
            g = diag[m] - diag[l] + e[l] / denom;
            let mut s = T::one();
            let mut c = T::one();
            let mut p = T::zero();
            let mut underflow = false;
            for i in (l..m).rev() {
                let f = s * e[i];
                let b = c * e[i];
                r = f.hypot(g);
                e[i + 1] = r;
                if r.is_zero() {
                    diag[i + 1] = diag[i + 1] - p;
                    e[m] = T::zero();
                    underflow = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = diag[i + 1] - p;
                r = (diag[i] - g) * s + two * c * b;
                p = s * r;
                diag[i + 1] = g + p;
                g = c * r - b;
                // Rotate transform columns i and i+1.
                let d = q.rows();
                for k in 0..d {
                    let fk = q[(k, i + 1)];
                    let gk = q[(k, i)];
                    q[(k, i + 1)] = gk * Complex::new(s, T::zero()) + fk * Complex::new(c, T::zero());
                    q[(k, i)] = gk * Complex::new(c, T::zero()) - fk * Complex::new(s, T::zero());
                }
            }
            if underflow {
                continue;
            }
            diag[l] = diag[l] - p;
            e[l] = g;
            e[m] = T::zero();
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::matrix::{sigma_x, ComplexMatrix};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn c(re: f64, im: f64) -> Complex<f64> {
        Complex::new(re, im)
    }

    fn random_hermitian(d: usize, seed: u64) -> ComplexMatrix<f64> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut m = ComplexMatrix::zeros(d, d);
        for j in 0..d {
            m[(j, j)] = c(rng.gen_range(-1.0..1.0), 0.0);
            for k in j + 1..d {
                let z = c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
                m[(j, k)] = z;
                m[(k, j)] = z.conj();
            }
        }
        m
    }

    #[test]
    fn diagonal_input_sorted_descending() {
        let mut m = ComplexMatrix::zeros(3, 3);
        m[(0, 0)] = c(3.0, 0.0);
        m[(1, 1)] = c(1.0, 0.0);
        m[(2, 2)] = c(2.0, 0.0);
        let e = herm_eig(&m).unwrap();
        assert_eq!(e.eigenvalues(), &[3.0, 2.0, 1.0]);
    }

    #[test]
    fn pauli_x_spectrum() {
        let e = herm_eig(&sigma_x::<f64>()).unwrap();
        assert!((e.eigenvalues()[0] - 1.0).abs() < 1e-12);
        assert!((e.eigenvalues()[1] + 1.0).abs() < 1e-12);
    }

    #[test]
    fn random_hermitian_reconstruction_residual() {
        for seed in 0..5 {
            let m = random_hermitian(8, seed);
            let e = herm_eig(&m).unwrap();
            let res = e.recompose().sub(&m).frobenius_norm();
            let bound = 1e-9 * f64::max(1.0, m.frobenius_norm());
            assert!(res <= bound, "residual {res} exceeds {bound}");
        }
    }

    #[test]
    fn eigenvectors_orthonormal() {
        let m = random_hermitian(12, 7);
        let e = herm_eig(&m).unwrap();
        let v = e.eigenvectors();
        let gram = v.conj_transpose().matmul(v);
        let dev = gram.sub(&ComplexMatrix::identity(12)).frobenius_norm();
        assert!(dev < 1e-9, "gram deviation {dev}");
    }

    #[test]
    fn eigenvalue_sum_matches_trace() {
        let m = random_hermitian(16, 3);
        let e = herm_eig(&m).unwrap();
        let sum: f64 = e.eigenvalues().iter().sum();
        assert!((sum - m.trace().re).abs() <= 1e-9 * 16.0);
    }

    #[test]
    fn deterministic_for_identical_input() {
        let m = random_hermitian(9, 11);
        let a = herm_eig(&m).unwrap();
        let b = herm_eig(&m).unwrap();
        assert_eq!(a.eigenvalues(), b.eigenvalues());
        assert_eq!(a.eigenvectors(), b.eigenvectors());
    }

    #[test]
    fn rejects_non_hermitian() {
        let mut m = ComplexMatrix::zeros(2, 2);
        m[(0, 1)] = c(1.0, 0.0);
        m[(1, 0)] = c(0.5, 0.0);
        assert!(herm_eig(&m).is_err());
    }

    #[test]
    fn subnormal_leading_entry_does_not_nan() {
        // An eliminated-column head so small that |z|² flushes to zero used
        // to produce a NaN phase; the decomposition must stay finite.
        let mut m = ComplexMatrix::zeros(3, 3);
        m[(0, 0)] = c(0.5, 0.0);
        m[(1, 0)] = c(-7.4e-166, 0.0);
        m[(0, 1)] = c(-7.4e-166, 0.0);
        m[(2, 0)] = c(0.25, 0.1);
        m[(0, 2)] = c(0.25, -0.1);
        m[(1, 1)] = c(-0.25, 0.0);
        m[(2, 1)] = c(1e-170, 1e-167);
        m[(1, 2)] = c(1e-170, -1e-167);
        m[(2, 2)] = c(0.75, 0.0);
        let e = herm_eig(&m).unwrap();
        assert!(e.eigenvalues().iter().all(|x| x.is_finite()));
        let res = e.recompose().sub(&m).frobenius_norm();
        assert!(res < 1e-12, "residual {res}");
    }

    #[test]
    fn degenerate_spectrum_still_orthonormal() {
        // I ⊕ I with a 2-fold degenerate pair.
        let mut m = ComplexMatrix::zeros(4, 4);
        for j in 0..4 {
            m[(j, j)] = c(if j < 2 { 2.0 } else { -1.0 }, 0.0);
        }
        let e = herm_eig(&m).unwrap();
        assert_eq!(e.eigenvalues(), &[2.0, 2.0, -1.0, -1.0]);
        let res = e.recompose().sub(&m).frobenius_norm();
        assert!(res < 1e-12);
    }
}
