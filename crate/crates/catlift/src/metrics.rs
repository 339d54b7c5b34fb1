//! Diagnostics reported for reconstructed states: fidelity, witness
//! expectation, visibility curve, reconstruction error, von Neumann entropy.

use crate::error::{Error, Result};
use crate::linalg::{frobenius_distance, herm_eig, trace_inner, ComplexMatrix, DensityMatrix, StateVector};
use crate::operators::{m_theta_power, realize, witness_decomposition};
use crate::scalar::{lit, Real};
use crate::states::sc_state;

/// ⟨ψ|ρ|ψ⟩.
pub fn fidelity<T: Real>(rho: &DensityMatrix<T>, target: &StateVector<T>) -> Result<T> {
    if rho.dim() != target.dim() {
        return Err(Error::DimensionMismatch {
            context: "fidelity",
            left: rho.dim(),
            right: target.dim(),
        });
    }
    trace_inner(rho.matrix(), &target.outer())
}

/// Overlap of the four matrix corners with the cat state:
/// ½(ρ₀₀ + ρ_{d−1,d−1} + 2·Re ρ₀,_{d−1}).
pub fn fidelity_from_corners<T: Real>(p00: T, p11: T, re01: T, re10: T) -> T {
    lit::<T>(0.5) * (p00 + p11 + re01 + re10)
}

/// ⟨w⟩ = Tr(ρ(½I − |SC⟩⟨SC|)) = ½ − fidelity.
pub fn witness_expectation<T: Real>(rho: &DensityMatrix<T>, n: usize) -> Result<T> {
    let target = sc_state::<T>(n)?;
    Ok(lit::<T>(0.5) - fidelity(rho, &target)?)
}

/// Witness expectation summed term-by-term through the measurable
/// decomposition; agrees with the direct path.
pub fn witness_expectation_decomposed<T: Real>(rho: &DensityMatrix<T>, n: usize) -> Result<T> {
    let mut overlap = T::zero();
    for (w, desc) in witness_decomposition::<T>(n)? {
        overlap += w * trace_inner(&realize(&desc, n)?, rho.matrix())?;
    }
    Ok(lit::<T>(0.5) - overlap)
}

/// ⟨M_θ^⊗n⟩ sampled on a θ grid.
pub fn visibility_curve<T: Real>(
    rho: &DensityMatrix<T>,
    n: usize,
    grid: &[T],
) -> Result<Vec<(T, T)>> {
    grid.iter()
        .map(|&theta| {
            let m = m_theta_power(theta, n);
            Ok((theta, trace_inner(&m, rho.matrix())?))
        })
        .collect()
}

/// The 48-point grid θ = kπ/24, k = 0..47.
pub fn default_theta_grid<T: Real>() -> Vec<T> {
    (0..48)
        .map(|k| lit::<T>(k as f64) * T::PI() / lit(24.0))
        .collect()
}

/// Least-squares amplitude A ≥ 0 of the model A·cos(nθ + φ) + c, fit as
/// a·cos(nθ) + b·sin(nθ) + c with A = √(a² + b²).
pub fn visibility_amplitude<T: Real>(curve: &[(T, T)], n: usize) -> Result<T> {
    if curve.len() < 3 {
        return Err(Error::invalid(
            "visibility fit needs at least 3 curve points",
        ));
    }
    // Normal equations for the 3-parameter linear model.
    let nn = lit::<T>(n as f64);
    let mut ata = [[T::zero(); 3]; 3];
    let mut atb = [T::zero(); 3];
    for &(theta, value) in curve {
        let row = [(nn * theta).cos(), (nn * theta).sin(), T::one()];
        for j in 0..3 {
            for k in 0..3 {
                ata[j][k] += row[j] * row[k];
            }
            atb[j] += row[j] * value;
        }
    }
    let x = solve3(ata, atb)?;
    Ok((x[0] * x[0] + x[1] * x[1]).sqrt())
}

fn solve3<T: Real>(mut a: [[T; 3]; 3], mut b: [T; 3]) -> Result<[T; 3]> {
    for col in 0..3 {
        let pivot = (col..3)
            .max_by(|&i, &j| a[i][col].abs().partial_cmp(&a[j][col].abs()).unwrap())
            .unwrap();
        if a[pivot][col].abs() < lit(1e-14) {
            return Err(Error::invalid("degenerate visibility fit system"));
        }
        a.swap(col, pivot);
        b.swap(col, pivot);
        for row in col + 1..3 {
            let f = a[row][col] / a[col][col];
            for k in col..3 {
                let upd = f * a[col][k];
                a[row][k] -= upd;
            }
            let upd = f * b[col];
            b[row] -= upd;
        }
    }
    let mut x = [T::zero(); 3];
    for row in (0..3).rev() {
        let mut s = b[row];
        for k in row + 1..3 {
            s -= a[row][k] * x[k];
        }
        x[row] = s / a[row][row];
    }
    Ok(x)
}

/// (‖ρ − ρ_ref‖_F, ‖ρ − ρ_ref‖_F²/d²).
pub fn error_metrics<T: Real>(
    rho: &ComplexMatrix<T>,
    rho_ref: &ComplexMatrix<T>,
) -> Result<(T, T)> {
    let fro = frobenius_distance(rho, rho_ref)?;
    let d = lit::<T>(rho.dim() as f64);
    Ok((fro, fro * fro / (d * d)))
}

/// Von Neumann entropy −Σ λᵢ ln λᵢ in nats; eigenvalues below 1e-12 count
/// as zero.
pub fn entropy<T: Real>(rho: &DensityMatrix<T>) -> Result<T> {
    let eig = herm_eig(rho.matrix())?;
    let cut = lit::<T>(1e-12);
    Ok(eig
        .eigenvalues()
        .iter()
        .filter(|&&l| l > cut)
        .fold(T::zero(), |acc, &l| acc - l * l.ln()))
}

/// All diagnostics for one reconstructed state, against a reference state.
/// Stored in f64 regardless of the working precision, since this is an
/// output artifact.
#[derive(Debug, Clone, serde::Serialize, serde::Deserialize)]
pub struct MetricsReport {
    pub fidelity: f64,
    pub witness_expectation: f64,
    pub frobenius_error: f64,
    pub mse: f64,
    pub entropy: f64,
    pub visibility_theta: Vec<f64>,
    pub visibility_value: Vec<f64>,
    pub visibility_amplitude: f64,
}

/// Computes every metric for an n-qubit state: fidelity and witness against
/// the ideal cat state, error against `reference`, entropy, and the
/// visibility curve on the default θ grid.
pub fn full_report<T: Real>(
    rho: &DensityMatrix<T>,
    reference: &DensityMatrix<T>,
    n: usize,
) -> Result<MetricsReport> {
    let f = |x: T| x.to_f64().unwrap();
    let fid = fidelity(rho, &sc_state(n)?)?;
    let (fro, mse) = error_metrics(rho.matrix(), reference.matrix())?;
    let curve = visibility_curve(rho, n, &default_theta_grid())?;
    Ok(MetricsReport {
        fidelity: f(fid),
        witness_expectation: f(lit::<T>(0.5) - fid),
        frobenius_error: f(fro),
        mse: f(mse),
        entropy: f(entropy(rho)?),
        visibility_theta: curve.iter().map(|&(t, _)| f(t)).collect(),
        visibility_value: curve.iter().map(|&(_, v)| f(v)).collect(),
        visibility_amplitude: f(visibility_amplitude(&curve, n)?),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::states::ideal_density;
    use num_complex::Complex;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    /// Random density matrix through an independent route: normalized
    /// Gram matrix G G*/Tr(G G*).
    pub(crate) fn random_density(d: usize, seed: u64) -> DensityMatrix<f64> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let g = ComplexMatrix::from_fn(d, d, |_, _| {
            Complex::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
        });
        let gg = g.matmul(&g.conj_transpose());
        let m = gg.scale_re(1.0 / gg.trace().re).symmetrize();
        DensityMatrix::new(m).unwrap()
    }

    #[test]
    fn fidelity_paper_corner_values() {
        let f = fidelity_from_corners(0.3816, 0.3402, 0.2544, 0.2544);
        assert!((f - 0.6154f64).abs() < 1e-3);
        let f = fidelity_from_corners(0.4206, 0.3864, 0.3043, 0.3043);
        assert!((f - 0.7078f64).abs() < 5e-4);
    }

    #[test]
    fn fidelity_of_maximally_mixed() {
        let d = 16usize;
        let mixed =
            DensityMatrix::trusted(ComplexMatrix::<f64>::identity(d).scale_re(1.0 / d as f64));
        let target = sc_state::<f64>(4).unwrap();
        let f = fidelity(&mixed, &target).unwrap();
        assert!((f - 1.0 / d as f64).abs() < 1e-12);
    }

    #[test]
    fn corner_formula_matches_direct_overlap() {
        for seed in 0..10 {
            let rho = random_density(8, seed);
            let m = rho.matrix();
            let via_corners =
                fidelity_from_corners(m[(0, 0)].re, m[(7, 7)].re, m[(0, 7)].re, m[(7, 0)].re);
            let direct = fidelity(&rho, &sc_state::<f64>(3).unwrap()).unwrap();
            assert!((via_corners - direct).abs() < 1e-12);
        }
    }

    #[test]
    fn witness_identity_and_bounds() {
        let ideal = ideal_density::<f64>(4).unwrap();
        assert!((witness_expectation(&ideal, 4).unwrap() + 0.5).abs() < 1e-12);
        let d = 16usize;
        let mixed =
            DensityMatrix::trusted(ComplexMatrix::<f64>::identity(d).scale_re(1.0 / d as f64));
        let w = witness_expectation(&mixed, 4).unwrap();
        assert!((w - (0.5 - 1.0 / d as f64)).abs() < 1e-12);
    }

    #[test]
    fn witness_two_paths_agree() {
        for n in [2usize, 4] {
            for seed in 0..10 {
                let rho = random_density(1 << n, 100 + seed);
                let direct = witness_expectation(&rho, n).unwrap();
                let decomposed = witness_expectation_decomposed(&rho, n).unwrap();
                assert!((direct - decomposed).abs() < 1e-9, "n={n} seed={seed}");
            }
        }
    }

    #[test]
    fn visibility_of_ideal_is_cos_n_theta() {
        let rho = ideal_density::<f64>(6).unwrap();
        let grid = default_theta_grid::<f64>();
        assert_eq!(grid.len(), 48);
        let curve = visibility_curve(&rho, 6, &grid).unwrap();
        for (theta, v) in &curve {
            assert!((v - (6.0 * theta).cos()).abs() < 1e-8);
        }
        let amp = visibility_amplitude(&curve, 6).unwrap();
        assert!((amp - 1.0).abs() < 1e-8);
    }

    #[test]
    fn visibility_of_mixed_is_flat() {
        let d = 64usize;
        let mixed =
            DensityMatrix::trusted(ComplexMatrix::<f64>::identity(d).scale_re(1.0 / d as f64));
        let curve = visibility_curve(&mixed, 6, &default_theta_grid::<f64>()).unwrap();
        for (_, v) in &curve {
            assert!(v.abs() < 1e-12);
        }
        let amp = visibility_amplitude(&curve, 6).unwrap();
        assert!(amp.abs() < 1e-12);
    }

    #[test]
    fn visibility_fit_recovers_noisy_amplitude() {
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        let curve: Vec<(f64, f64)> = default_theta_grid::<f64>()
            .into_iter()
            .map(|t| {
                let noise: f64 = rng.gen_range(-0.03..0.03);
                (t, 0.7 * (6.0 * t).cos() + noise * 0.33)
            })
            .collect();
        let amp = visibility_amplitude(&curve, 6).unwrap();
        assert!((amp - 0.7).abs() < 0.02, "amp {amp}");
    }

    #[test]
    fn visibility_fit_needs_three_points() {
        assert!(visibility_amplitude::<f64>(&[(0.0, 1.0), (1.0, 0.0)], 6).is_err());
    }

    #[test]
    fn error_metric_examples() {
        let a = ComplexMatrix::<f64>::from_fn(2, 2, |j, k| {
            Complex::new(if j == 0 && k == 0 { 1.0 } else { 0.0 }, 0.0)
        });
        let b = ComplexMatrix::<f64>::from_fn(2, 2, |j, k| {
            Complex::new(if j == 1 && k == 1 { 1.0 } else { 0.0 }, 0.0)
        });
        let (fro, mse) = error_metrics(&a, &a).unwrap();
        assert_eq!((fro, mse), (0.0, 0.0));
        let (fro, mse) = error_metrics(&a, &b).unwrap();
        assert!((fro - 2f64.sqrt()).abs() < 1e-15);
        assert!((mse - 0.5).abs() < 1e-15);
    }

    #[test]
    fn entropy_limits() {
        let pure = ideal_density::<f64>(3).unwrap();
        assert!(entropy(&pure).unwrap().abs() < 1e-9);
        let d = 8usize;
        let mixed =
            DensityMatrix::trusted(ComplexMatrix::<f64>::identity(d).scale_re(1.0 / d as f64));
        assert!((entropy(&mixed).unwrap() - (d as f64).ln()).abs() < 1e-9);
        // (½, ½, 0, …) spectrum.
        let mut half = ComplexMatrix::<f64>::zeros(4, 4);
        half[(0, 0)] = Complex::new(0.5, 0.0);
        half[(1, 1)] = Complex::new(0.5, 0.0);
        let rho = DensityMatrix::trusted(half);
        assert!((entropy(&rho).unwrap() - 2f64.ln()).abs() < 1e-9);
    }

    #[test]
    fn entropy_unitary_invariance_and_range() {
        for seed in 0..5 {
            let rho = random_density(8, 200 + seed);
            let s = entropy(&rho).unwrap();
            assert!(s >= -1e-9 && s <= 8f64.ln() + 1e-9);
            // Conjugate by eigenvectors of an unrelated Hermitian matrix.
            let other = random_density(8, 300 + seed);
            let u = herm_eig(other.matrix()).unwrap().eigenvectors().clone();
            let rotated = u.matmul(rho.matrix()).matmul(&u.conj_transpose()).symmetrize();
            let s_rot = entropy(&DensityMatrix::trusted(rotated)).unwrap();
            assert!((s - s_rot).abs() < 1e-9);
        }
    }
}
