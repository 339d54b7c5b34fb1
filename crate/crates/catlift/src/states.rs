//! Ideal cat-state construction, noise models, and measurement simulation
//! (the stand-in for unavailable experimental data).

use num_complex::Complex;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Binomial, Distribution, Normal};

use crate::error::{Error, Result};
use crate::linalg::{project_density_cone, ComplexMatrix, DensityMatrix, StateVector};
use crate::operators::{OperatorSet, RealizedOperator};
use crate::scalar::{lit, Real};

/// n-qubit cat state (|0…0⟩ + |1…1⟩)/√2, qubit 1 on the most-significant bit.
pub fn sc_state<T: Real>(n: usize) -> Result<StateVector<T>> {
    if n == 0 {
        return Err(Error::invalid("qubit count must be at least 1"));
    }
    let d = 1usize << n;
    let amp = T::one() / lit::<T>(2.0).sqrt();
    let mut v = vec![Complex::new(T::zero(), T::zero()); d];
    v[0] = Complex::new(amp, T::zero());
    v[d - 1] = Complex::new(amp, T::zero());
    StateVector::new(v)
}

/// |SC⟩⟨SC|: 1/2 at the four corners, zero elsewhere.
pub fn ideal_density<T: Real>(n: usize) -> Result<DensityMatrix<T>> {
    let state = sc_state::<T>(n)?;
    Ok(DensityMatrix::trusted(state.outer()))
}

/// Noise applied to a density matrix before measurement simulation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum NoiseModel<T: Real> {
    None,
    /// (1−p)·ρ + p·I/d
    White { p: T },
    /// Hermitian perturbation with per-entry std-dev σ, then cone projection.
    Gaussian { sigma: T },
}

impl<T: Real> NoiseModel<T> {
    pub fn parse(spec: &str) -> Result<Self> {
        if spec == "none" {
            return Ok(NoiseModel::None);
        }
        if let Some(p) = spec.strip_prefix("white:") {
            let p: f64 = p
                .parse()
                .map_err(|_| Error::invalid(format!("bad white noise weight {p:?}")))?;
            if !(0.0..=1.0).contains(&p) {
                return Err(Error::invalid("white noise weight must lie in [0,1]"));
            }
            return Ok(NoiseModel::White { p: lit(p) });
        }
        if let Some(s) = spec.strip_prefix("gaussian:") {
            let s: f64 = s
                .parse()
                .map_err(|_| Error::invalid(format!("bad gaussian noise sigma {s:?}")))?;
            if s < 0.0 {
                return Err(Error::invalid("gaussian sigma must be nonnegative"));
            }
            return Ok(NoiseModel::Gaussian { sigma: lit(s) });
        }
        Err(Error::invalid(format!(
            "unknown noise spec {spec:?}; expected none, white:<p> or gaussian:<sigma>"
        )))
    }
}

impl<T: Real> std::fmt::Display for NoiseModel<T> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            NoiseModel::None => write!(f, "none"),
            NoiseModel::White { p } => write!(f, "white:{p}"),
            NoiseModel::Gaussian { sigma } => write!(f, "gaussian:{sigma}"),
        }
    }
}

/// Applies a noise model. White admixture is deterministic; the gaussian
/// perturbation is drawn from a generator seeded per call.
pub fn apply_noise<T: Real>(
    rho: &DensityMatrix<T>,
    model: NoiseModel<T>,
    seed: u64,
) -> Result<DensityMatrix<T>> {
    match model {
        NoiseModel::None => Ok(rho.clone()),
        NoiseModel::White { p } => {
            let d = rho.dim();
            let mixed = ComplexMatrix::identity(d).scale_re(T::one() / lit(d as f64));
            let mut out = rho.matrix().scale_re(T::one() - p);
            out.add_scaled(p, &mixed);
            Ok(DensityMatrix::trusted(out))
        }
        NoiseModel::Gaussian { sigma } => {
            let d = rho.dim();
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let sigma_f = sigma.to_f64().unwrap();
            let diag = Normal::new(0.0, sigma_f.max(f64::MIN_POSITIVE)).unwrap();
            let off = Normal::new(0.0, (sigma_f / 2f64.sqrt()).max(f64::MIN_POSITIVE)).unwrap();
            let mut noisy = rho.matrix().clone();
            if sigma_f > 0.0 {
                for j in 0..d {
                    let e = noisy[(j, j)];
                    noisy[(j, j)] = e + Complex::new(lit::<T>(diag.sample(&mut rng)), T::zero());
                    for k in j + 1..d {
                        let z = Complex::new(
                            lit::<T>(off.sample(&mut rng)),
                            lit::<T>(off.sample(&mut rng)),
                        );
                        let e = noisy[(j, k)];
                        noisy[(j, k)] = e + z;
                        let e = noisy[(k, j)];
                        noisy[(k, j)] = e + z.conj();
                    }
                }
            }
            project_density_cone(&noisy)
        }
    }
}

/// One observed value for one operator.
#[derive(Debug, Clone, PartialEq)]
pub struct MeasurementRecord<T: Real> {
    pub operator_id: usize,
    pub value: T,
    pub setting_id: Option<usize>,
    pub shots: Option<u64>,
}

/// Simulates measurement data for an operator set.
///
/// With `shots = 0` the records carry the exact expectations Tr(M_i ρ).
/// With `shots = N > 0`, operators sharing a setting (a complete local basis
/// of 2ⁿ projectors) are sampled as one multinomial draw of N counts over the
/// outcome probabilities, and values are counts/N. Operators that sit alone
/// in their setting are sampled independently: projectors as binomials,
/// ±1-valued tensor powers through the two-outcome split (1±v)/2.
pub fn simulate_measurements<T: Real>(
    rho: &DensityMatrix<T>,
    ops: &OperatorSet<T>,
    shots: u64,
    seed: u64,
) -> Result<Vec<MeasurementRecord<T>>> {
    if ops.dim() != rho.dim() {
        return Err(Error::DimensionMismatch {
            context: "simulate_measurements",
            left: ops.dim(),
            right: rho.dim(),
        });
    }
    let realized = ops.realize_all();
    let exact: Vec<T> = realized
        .iter()
        .map(|op| op.expectation(rho.matrix()))
        .collect();

    // Projector expectations must be probabilities.
    for (i, op) in realized.iter().enumerate() {
        if matches!(op, RealizedOperator::Rank1(_)) && exact[i] < lit(-1e-9) {
            return Err(Error::InvalidDensityMatrix(format!(
                "operator {i} has negative probability {}",
                exact[i]
            )));
        }
    }

    let mut values: Vec<T> = exact.clone();
    let mut shot_field: Vec<Option<u64>> = vec![None; ops.len()];

    if shots > 0 {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        // Group ids by setting, in order of first appearance.
        let mut groups: Vec<Vec<usize>> = Vec::new();
        let mut group_of_setting: std::collections::HashMap<usize, usize> =
            std::collections::HashMap::new();
        for (id, &s) in ops.settings.iter().enumerate() {
            let g = *group_of_setting.entry(s).or_insert_with(|| {
                groups.push(Vec::new());
                groups.len() - 1
            });
            groups[g].push(id);
        }

        for group in &groups {
            let all_projectors = group
                .iter()
                .all(|&id| matches!(realized[id], RealizedOperator::Rank1(_)));
            if group.len() >= 2 && all_projectors {
                // One multinomial draw over the setting's outcomes.
                let probs: Vec<f64> = group
                    .iter()
                    .map(|&id| exact[id].to_f64().unwrap().max(0.0))
                    .collect();
                let total: f64 = probs.iter().sum();
                let mut remaining = shots;
                let mut rest = total;
                for (slot, &id) in group.iter().enumerate() {
                    let count = if slot + 1 == group.len() || rest <= 0.0 {
                        remaining
                    } else {
                        let p = (probs[slot] / rest).clamp(0.0, 1.0);
                        let k = Binomial::new(remaining, p).unwrap().sample(&mut rng);
                        rest -= probs[slot];
                        k
                    };
                    remaining -= count.min(remaining);
                    values[id] = lit::<T>(count as f64 / shots as f64);
                    shot_field[id] = Some(shots);
                }
            } else {
                for &id in group {
                    match &realized[id] {
                        RealizedOperator::Rank1(_) => {
                            let p = exact[id].to_f64().unwrap().clamp(0.0, 1.0);
                            let k = Binomial::new(shots, p).unwrap().sample(&mut rng);
                            values[id] = lit::<T>(k as f64 / shots as f64);
                            shot_field[id] = Some(shots);
                        }
                        RealizedOperator::Dense(_) => {
                            let v = exact[id].to_f64().unwrap();
                            if v >= -1.0 - 1e-9 && v <= 1.0 + 1e-9 {
                                // ±1-valued observable: sample the + outcome.
                                let p = ((1.0 + v) / 2.0).clamp(0.0, 1.0);
                                let k = Binomial::new(shots, p).unwrap().sample(&mut rng);
                                values[id] =
                                    lit::<T>(2.0 * k as f64 / shots as f64 - 1.0);
                                shot_field[id] = Some(shots);
                            }
                            // Outside [−1,1] there is no two-outcome model;
                            // the exact value is kept.
                        }
                    }
                }
            }
        }
    }

    Ok((0..ops.len())
        .map(|id| MeasurementRecord {
            operator_id: id,
            value: values[id],
            setting_id: Some(ops.settings[id]),
            shots: shot_field[id],
        })
        .collect())
}
