//! Measurement-operator families: local θ-basis projectors, computational
//! projectors, M_θ tensor powers, the cat-state witness decomposition, and
//! the named operator sets used by the experiments.

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::linalg::{sigma_x, sigma_y, ComplexMatrix, StateVector};
use crate::scalar::{lit, Real};

/// Outcome sign of a local θ-basis projector.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn as_char(self) -> char {
        match self {
            Sign::Plus => '+',
            Sign::Minus => '-',
        }
    }

    pub fn from_char(c: char) -> Result<Self> {
        match c {
            '+' => Ok(Sign::Plus),
            '-' => Ok(Sign::Minus),
            other => Err(Error::invalid(format!("invalid sign character {other:?}"))),
        }
    }

    fn factor<T: Real>(self) -> T {
        match self {
            Sign::Plus => T::one(),
            Sign::Minus => -T::one(),
        }
    }
}

/// Symbolic recipe for one measurement operator. Qubit 1 is the
/// most-significant bit everywhere.
#[derive(Debug, Clone, PartialEq)]
pub enum OperatorDescriptor<T: Real> {
    /// ⊗_j |b_j⟩⟨b_j|
    Computational { bits: Vec<u8> },
    /// ⊗_j |s_j,θ⟩⟨s_j,θ|
    ThetaPattern { theta: T, signs: Vec<Sign> },
    /// M_θ^⊗n with M_θ = cosθ·σx + sinθ·σy
    MThetaPower { theta: T, n: usize },
    Dense { matrix: ComplexMatrix<T> },
}

impl<T: Real> OperatorDescriptor<T> {
    pub fn qubits(&self) -> Option<usize> {
        match self {
            OperatorDescriptor::Computational { bits } => Some(bits.len()),
            OperatorDescriptor::ThetaPattern { signs, .. } => Some(signs.len()),
            OperatorDescriptor::MThetaPower { n, .. } => Some(*n),
            OperatorDescriptor::Dense { .. } => None,
        }
    }

    pub fn dim(&self) -> usize {
        match self {
            OperatorDescriptor::Dense { matrix } => matrix.dim(),
            other => 1 << other.qubits().unwrap(),
        }
    }
}

/// Ordered operator family with stable ids (the list index) and a
/// per-operator measurement-setting key used to group shot statistics.
#[derive(Debug, Clone)]
pub struct OperatorSet<T: Real> {
    pub name: String,
    pub n: usize,
    pub descriptors: Vec<OperatorDescriptor<T>>,
    /// id → setting id, parallel to `descriptors`.
    pub settings: Vec<usize>,
}

impl<T: Real> OperatorSet<T> {
    pub fn len(&self) -> usize {
        self.descriptors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.descriptors.is_empty()
    }

    pub fn dim(&self) -> usize {
        1 << self.n
    }

    /// Realizes every descriptor once; rank-1 operators stay factored so the
    /// dense form of a 3136-element set is never materialized.
    pub fn realize_all(&self) -> Vec<RealizedOperator<T>> {
        self.descriptors.iter().map(|d| realize_factored(d)).collect()
    }
}

/// A realized operator, kept in rank-1 form when the descriptor admits it.
#[derive(Debug, Clone)]
pub enum RealizedOperator<T: Real> {
    Rank1(StateVector<T>),
    Dense(ComplexMatrix<T>),
}

impl<T: Real> RealizedOperator<T> {
    pub fn dim(&self) -> usize {
        match self {
            RealizedOperator::Rank1(z) => z.dim(),
            RealizedOperator::Dense(m) => m.dim(),
        }
    }

    /// Re Tr(M ρ); O(d²) in both forms.
    pub fn expectation(&self, rho: &ComplexMatrix<T>) -> T {
        match self {
            RealizedOperator::Rank1(z) => {
                // z* ρ z
                let rz = rho.matvec(z.amplitudes());
                z.amplitudes()
                    .iter()
                    .zip(&rz)
                    .fold(Complex::new(T::zero(), T::zero()), |acc, (a, b)| {
                        acc + a.conj() * b
                    })
                    .re
            }
            RealizedOperator::Dense(m) => {
                let d = m.dim();
                let mut re = T::zero();
                for j in 0..d {
                    for k in 0..d {
                        let z = m[(j, k)] * rho[(k, j)];
                        re += z.re;
                    }
                }
                re
            }
        }
    }

    /// `into += w · M`, a rank-1 or dense update.
    pub fn accumulate(&self, w: T, into: &mut ComplexMatrix<T>) {
        match self {
            RealizedOperator::Rank1(z) => {
                let d = z.dim();
                let wc = Complex::new(w, T::zero());
                for j in 0..d {
                    let aj = z.amplitudes()[j] * wc;
                    for k in 0..d {
                        let upd = aj * z.amplitudes()[k].conj();
                        let e = into[(j, k)];
                        into[(j, k)] = e + upd;
                    }
                }
            }
            RealizedOperator::Dense(m) => into.add_scaled(w, m),
        }
    }

    pub fn to_dense(&self) -> ComplexMatrix<T> {
        match self {
            RealizedOperator::Rank1(z) => z.outer(),
            RealizedOperator::Dense(m) => m.clone(),
        }
    }

    /// Tr(M · N), real for a Hermitian pair.
    pub fn product_trace(&self, other: &Self) -> T {
        match (self, other) {
            (RealizedOperator::Rank1(z), RealizedOperator::Rank1(x)) => z.inner(x).norm_sqr(),
            (RealizedOperator::Rank1(z), RealizedOperator::Dense(m))
            | (RealizedOperator::Dense(m), RealizedOperator::Rank1(z)) => {
                RealizedOperator::Dense(m.clone()).expectation(&z.outer())
            }
            (RealizedOperator::Dense(a), RealizedOperator::Dense(b)) => {
                let d = a.dim();
                let mut re = T::zero();
                for j in 0..d {
                    for k in 0..d {
                        re += (a[(j, k)] * b[(k, j)]).re;
                    }
                }
                re
            }
        }
    }
}

/// |±,θ⟩ = (|0⟩ ± e^{iθ}|1⟩)/√2.
pub fn local_basis_vector<T: Real>(theta: T, sign: Sign) -> StateVector<T> {
    let inv_sqrt2 = T::one() / lit::<T>(2.0).sqrt();
    let phase = Complex::new(theta.cos(), theta.sin());
    let s = Complex::new(sign.factor::<T>(), T::zero());
    StateVector::new(vec![
        Complex::new(inv_sqrt2, T::zero()),
        phase * s * Complex::new(inv_sqrt2, T::zero()),
    ])
    .expect("unit by construction")
}

/// M_θ = cosθ·σx + sinθ·σy.
pub fn m_theta<T: Real>(theta: T) -> ComplexMatrix<T> {
    let mut m = sigma_x::<T>().scale_re(theta.cos());
    m.add_scaled(theta.sin(), &sigma_y());
    m
}

/// n-fold Kronecker power of M_θ.
pub fn m_theta_power<T: Real>(theta: T, n: usize) -> ComplexMatrix<T> {
    assert!(n >= 1);
    let base = m_theta(theta);
    let mut out = base.clone();
    for _ in 1..n {
        out = out.kron(&base);
    }
    out
}

/// Rank-1 factor z with M = z z*, when the descriptor admits one.
/// M_θ tensor powers and dense operators have no rank-1 factorization.
pub fn factor<T: Real>(desc: &OperatorDescriptor<T>) -> Option<StateVector<T>> {
    match desc {
        OperatorDescriptor::Computational { bits } => {
            let n = bits.len();
            let mut index = 0usize;
            for &b in bits {
                index = (index << 1) | (b as usize);
            }
            let mut v = vec![Complex::new(T::zero(), T::zero()); 1 << n];
            v[index] = Complex::new(T::one(), T::zero());
            Some(StateVector::new(v).expect("basis vector is unit"))
        }
        OperatorDescriptor::ThetaPattern { theta, signs } => {
            let mut it = signs.iter();
            let first = local_basis_vector(*theta, *it.next().expect("n >= 1"));
            Some(it.fold(first, |acc, &s| acc.kron(&local_basis_vector(*theta, s))))
        }
        OperatorDescriptor::MThetaPower { .. } | OperatorDescriptor::Dense { .. } => None,
    }
}

fn realize_factored<T: Real>(desc: &OperatorDescriptor<T>) -> RealizedOperator<T> {
    match factor(desc) {
        Some(z) => RealizedOperator::Rank1(z),
        None => match desc {
            OperatorDescriptor::MThetaPower { theta, n } => {
                RealizedOperator::Dense(m_theta_power(*theta, *n))
            }
            OperatorDescriptor::Dense { matrix } => RealizedOperator::Dense(matrix.clone()),
            _ => unreachable!(),
        },
    }
}

/// Dense 2ⁿ×2ⁿ realization of a descriptor.
pub fn realize<T: Real>(desc: &OperatorDescriptor<T>, n: usize) -> Result<ComplexMatrix<T>> {
    let d = 1 << n;
    if desc.dim() != d {
        return Err(Error::DimensionMismatch {
            context: "operator realization",
            left: desc.dim(),
            right: d,
        });
    }
    Ok(realize_factored(desc).to_dense())
}

fn bits_of_index(index: usize, n: usize) -> Vec<u8> {
    (0..n).map(|j| ((index >> (n - 1 - j)) & 1) as u8).collect()
}

fn signs_of_index(index: usize, n: usize) -> Vec<Sign> {
    (0..n)
        .map(|j| {
            if (index >> (n - 1 - j)) & 1 == 0 {
                Sign::Plus
            } else {
                Sign::Minus
            }
        })
        .collect()
}

/// The named operator sets.
///
/// * `full`: all 2ⁿ computational patterns plus every sign pattern at the 48
///   angles θ = kπ/24, k = 0..47; one setting per basis.
/// * `fid14`: the two extreme computational projectors plus M_θ^⊗n at the 12
///   angles θ = 2πj/12.
/// * `fid3`: the two extreme computational projectors plus M_0^⊗n.
/// * `photon8`: all 256 computational patterns plus M_{kπ/8}^⊗8, k = 0..7.
pub fn standard_set<T: Real>(name: &str, n: usize) -> Result<OperatorSet<T>> {
    if n == 0 {
        return Err(Error::invalid("qubit count must be at least 1"));
    }
    let d = 1usize << n;
    let mut descriptors = Vec::new();
    let mut settings = Vec::new();
    match name {
        "full" => {
            for index in 0..d {
                descriptors.push(OperatorDescriptor::Computational {
                    bits: bits_of_index(index, n),
                });
                settings.push(0);
            }
            for k in 0..48usize {
                let theta = lit::<T>(k as f64) * T::PI() / lit(24.0);
                for index in 0..d {
                    descriptors.push(OperatorDescriptor::ThetaPattern {
                        theta,
                        signs: signs_of_index(index, n),
                    });
                    settings.push(k + 1);
                }
            }
        }
        "fid14" => {
            descriptors.push(OperatorDescriptor::Computational { bits: vec![0; n] });
            descriptors.push(OperatorDescriptor::Computational { bits: vec![1; n] });
            settings.extend([0, 1]);
            for j in 0..12usize {
                let theta = lit::<T>(2.0) * T::PI() * lit::<T>(j as f64) / lit(12.0);
                descriptors.push(OperatorDescriptor::MThetaPower { theta, n });
                settings.push(2 + j);
            }
        }
        "fid3" => {
            descriptors.push(OperatorDescriptor::Computational { bits: vec![0; n] });
            descriptors.push(OperatorDescriptor::Computational { bits: vec![1; n] });
            descriptors.push(OperatorDescriptor::MThetaPower { theta: T::zero(), n });
            settings.extend([0, 1, 2]);
        }
        "photon8" => {
            if n != 8 {
                return Err(Error::invalid("photon8 set is defined for 8 qubits"));
            }
            for index in 0..d {
                descriptors.push(OperatorDescriptor::Computational {
                    bits: bits_of_index(index, n),
                });
                settings.push(0);
            }
            for k in 0..8usize {
                let theta = lit::<T>(k as f64) * T::PI() / lit(8.0);
                descriptors.push(OperatorDescriptor::MThetaPower { theta, n });
                settings.push(1 + k);
            }
        }
        other => return Err(Error::invalid(format!("unknown operator set {other:?}"))),
    }
    Ok(OperatorSet {
        name: name.to_string(),
        n,
        descriptors,
        settings,
    })
}

/// Decomposition of the ideal cat projector into measurable terms:
/// |SC⟩⟨SC| = ½ P₀…₀ + ½ P₁…₁ + Σ_{k=1}^{n} (−1)^k/(2n) · M_{kπ/n}^⊗n.
///
/// Defined for even n; the pattern does not extend to odd n.
pub fn witness_decomposition<T: Real>(
    n: usize,
) -> Result<Vec<(T, OperatorDescriptor<T>)>> {
    if n < 2 || n % 2 != 0 {
        return Err(Error::invalid(
            "witness decomposition requires an even qubit count of at least 2",
        ));
    }
    let half = lit::<T>(0.5);
    let mut terms: Vec<(T, OperatorDescriptor<T>)> = vec![
        (half, OperatorDescriptor::Computational { bits: vec![0; n] }),
        (half, OperatorDescriptor::Computational { bits: vec![1; n] }),
    ];
    let weight = T::one() / lit::<T>(2.0 * n as f64);
    for k in 1..=n {
        let sign = if k % 2 == 0 { T::one() } else { -T::one() };
        let theta = lit::<T>(k as f64) * T::PI() / lit(n as f64);
        terms.push((sign * weight, OperatorDescriptor::MThetaPower { theta, n }));
    }
    Ok(terms)
}

/// Weighted sum of realized decomposition terms; equals `ideal_density(n)`.
pub fn witness_reconstruction<T: Real>(n: usize) -> Result<ComplexMatrix<T>> {
    let terms = witness_decomposition::<T>(n)?;
    let d = 1usize << n;
    let mut acc = ComplexMatrix::zeros(d, d);
    for (w, desc) in &terms {
        acc.add_scaled(*w, &realize(desc, n)?);
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{frobenius_distance, herm_eig, trace_inner};
    use crate::states::ideal_density;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn local_basis_examples() {
        let plus = local_basis_vector(0.0, Sign::Plus);
        let inv = 0.5f64.sqrt();
        assert!((plus.amplitudes()[0].re - inv).abs() < 1e-15);
        assert!((plus.amplitudes()[1].re - inv).abs() < 1e-15);
        let minus_i = local_basis_vector(std::f64::consts::FRAC_PI_2, Sign::Minus);
        assert!((minus_i.amplitudes()[1] - Complex::new(0.0, -inv)).norm() < 1e-15);
    }

    #[test]
    fn local_basis_orthogonal() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..20 {
            let theta = rng.gen_range(0.0..std::f64::consts::TAU);
            let p = local_basis_vector(theta, Sign::Plus);
            let m = local_basis_vector(theta, Sign::Minus);
            assert!(p.inner(&m).norm() < 1e-14);
        }
    }

    #[test]
    fn computational_realization() {
        let desc = OperatorDescriptor::<f64>::Computational { bits: vec![0; 3] };
        let m = realize(&desc, 3).unwrap();
        assert!((m[(0, 0)].re - 1.0).abs() < 1e-15);
        assert!((m.trace().re - 1.0).abs() < 1e-15);
    }

    #[test]
    fn theta_pattern_factor_matches_outer_product() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for _ in 0..10 {
            let n = rng.gen_range(1..=4);
            let theta = rng.gen_range(0.0..std::f64::consts::TAU);
            let signs = (0..n)
                .map(|_| if rng.gen::<bool>() { Sign::Plus } else { Sign::Minus })
                .collect();
            let desc = OperatorDescriptor::ThetaPattern { theta, signs };
            let z = factor(&desc).unwrap();
            let dense = realize(&desc, n).unwrap();
            assert!(frobenius_distance(&z.outer(), &dense).unwrap() < 1e-12);
        }
    }

    #[test]
    fn m_theta_at_zero_is_sigma_x() {
        assert!(frobenius_distance(&m_theta(0.0), &sigma_x::<f64>()).unwrap() < 1e-15);
    }

    #[test]
    fn m_theta_power_equals_signed_pattern_sum() {
        // The 2ⁿ-term expansion of M_θ^⊗n over signed pattern projectors.
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..5 {
            let n = rng.gen_range(1..=6);
            let theta = rng.gen_range(0.0..std::f64::consts::TAU);
            let d = 1usize << n;
            let mut sum = ComplexMatrix::<f64>::zeros(d, d);
            for index in 0..d {
                let signs = signs_of_index(index, n);
                let parity: f64 = signs
                    .iter()
                    .map(|s| s.factor::<f64>())
                    .product();
                let desc = OperatorDescriptor::ThetaPattern { theta, signs };
                sum.add_scaled(parity, &realize(&desc, n).unwrap());
            }
            let direct = m_theta_power(theta, n);
            assert!(frobenius_distance(&sum, &direct).unwrap() < 1e-10);
        }
    }

    #[test]
    fn m_theta_power_expectation_on_cat_is_cos_n_theta() {
        let rho = ideal_density::<f64>(6).unwrap();
        for k in 0..12 {
            let theta = k as f64 * std::f64::consts::PI / 6.0;
            let v = trace_inner(&m_theta_power(theta, 6), rho.matrix()).unwrap();
            assert!((v - (6.0 * theta).cos()).abs() < 1e-10, "theta={theta}");
        }
    }

    #[test]
    fn standard_set_counts() {
        assert_eq!(standard_set::<f64>("full", 6).unwrap().len(), 3136);
        assert_eq!(standard_set::<f64>("full", 2).unwrap().len(), 196);
        assert_eq!(standard_set::<f64>("fid14", 6).unwrap().len(), 14);
        assert_eq!(standard_set::<f64>("fid3", 6).unwrap().len(), 3);
        assert_eq!(standard_set::<f64>("photon8", 8).unwrap().len(), 264);
        assert!(standard_set::<f64>("bogus", 6).is_err());
        assert!(standard_set::<f64>("photon8", 6).is_err());
        assert!(standard_set::<f64>("full", 0).is_err());
    }

    #[test]
    fn full_set_has_49_settings_of_equal_size() {
        let set = standard_set::<f64>("full", 3).unwrap();
        let max_setting = *set.settings.iter().max().unwrap();
        assert_eq!(max_setting, 48);
        for s in 0..=max_setting {
            let count = set.settings.iter().filter(|&&x| x == s).count();
            assert_eq!(count, 8);
        }
    }

    #[test]
    fn witness_reconstructs_ideal_projector() {
        for n in [2usize, 4, 6] {
            let rec = witness_reconstruction::<f64>(n).unwrap();
            let ideal = ideal_density::<f64>(n).unwrap();
            let gap = frobenius_distance(&rec, ideal.matrix()).unwrap();
            assert!(gap < 1e-10, "n={n} gap {gap}");
        }
    }

    #[test]
    fn witness_last_coefficient_positive() {
        let terms = witness_decomposition::<f64>(6).unwrap();
        let (w, _) = terms.last().unwrap();
        assert!((w - 1.0 / 12.0).abs() < 1e-15);
    }

    #[test]
    fn witness_rejects_odd_qubit_count() {
        assert!(witness_decomposition::<f64>(3).is_err());
        assert!(witness_decomposition::<f64>(1).is_err());
    }

    #[test]
    fn bell_projector_from_two_qubit_decomposition() {
        // ½[P₀₀+P₁₁+½(σx⊗σx − σy⊗σy)] is the Bell projector.
        let rec = witness_reconstruction::<f64>(2).unwrap();
        let mut want = ComplexMatrix::<f64>::zeros(4, 4);
        let h = Complex::new(0.5, 0.0);
        want[(0, 0)] = h;
        want[(3, 3)] = h;
        want[(0, 3)] = h;
        want[(3, 0)] = h;
        assert!(frobenius_distance(&rec, &want).unwrap() < 1e-12);
    }

    #[test]
    fn full_set_rank_at_small_n() {
        // Independent rank oracle: positive eigenvalues of Σ vec(M)vec(M)*.
        //
        // The family is not informationally complete: a θ-pattern projector
        // weights the entry (z, z′) only through u = z⊕z′ and the weight
        // difference w = |z| − |z′|, so entries sharing (u, w) are
        // inseparable. The span is the 2ⁿ diagonal entries (resolved by the
        // computational projectors) plus one coordinate per off-diagonal
        // (u, w) class — which still covers the cat state's corners.
        for n in 1usize..=3 {
            let set = standard_set::<f64>("full", n).unwrap();
            let d = set.dim();
            let d2 = d * d;
            let mut classes = std::collections::HashSet::new();
            for z in 0..d {
                for zp in 0..d {
                    if z != zp {
                        let w = z.count_ones() as i32 - zp.count_ones() as i32;
                        classes.insert((z ^ zp, w));
                    }
                }
            }
            let expected = d + classes.len();
            let mut gram = ComplexMatrix::<f64>::zeros(d2, d2);
            for desc in &set.descriptors {
                let m = realize(desc, n).unwrap();
                for a in 0..d2 {
                    for b in 0..d2 {
                        let va = m.data()[a];
                        let vb = m.data()[b].conj();
                        let e = gram[(a, b)];
                        gram[(a, b)] = e + va * vb;
                    }
                }
            }
            let eig = herm_eig(&gram).unwrap();
            let rank = eig.eigenvalues().iter().filter(|&&l| l > 1e-9).count();
            assert!(rank <= d2);
            assert_eq!(rank, expected, "n={n}");
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(32))]

        #[test]
        fn theta_patterns_are_rank_one_projectors(
            theta in 0.0..std::f64::consts::TAU,
            pattern in 0usize..16,
            n in 1usize..=4,
        ) {
            let signs = signs_of_index(pattern % (1 << n), n);
            let desc = OperatorDescriptor::ThetaPattern { theta, signs };
            let m = realize(&desc, n).unwrap();
            prop_assert!((m.trace().re - 1.0).abs() < 1e-10);
            let sq = m.matmul(&m);
            prop_assert!(frobenius_distance(&sq, &m).unwrap() < 1e-10);
        }

        #[test]
        fn m_theta_power_is_involution(theta in 0.0..std::f64::consts::TAU, n in 1usize..=5) {
            let m = m_theta_power(theta, n);
            let sq = m.matmul(&m);
            let id = ComplexMatrix::<f64>::identity(1 << n);
            prop_assert!(frobenius_distance(&sq, &id).unwrap() < 1e-9);
        }
    }
}
