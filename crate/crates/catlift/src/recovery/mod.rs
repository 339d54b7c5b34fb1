//! Density-matrix recovery: the PhaseLift absolute-residual program and the
//! L1-sparsity program over the density-matrix constraint set, plus
//! measurement subsampling.

pub mod admm;

pub use admm::{recover, recover_l1, recover_phaselift};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::linalg::DensityMatrix;
use crate::operators::OperatorSet;
use crate::scalar::{lit, Real};
use crate::states::MeasurementRecord;

/// Which convex program to solve.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    /// min Σ|Tr(Mᵢρ) − bᵢ| over the density cone.
    PhaseLift,
    /// min Σ|ρ_jk| subject to |Tr(Mᵢρ) − bᵢ| ≤ ε over the density cone.
    L1,
}

/// Solver configuration. `seed` is reserved for randomized restarts and is
/// unused by the deterministic solver itself.
#[derive(Debug, Clone)]
pub struct RecoveryConfig<T: Real> {
    pub method: Method,
    pub mu: T,
    pub tol_abs: T,
    pub tol_rel: T,
    pub max_iter: usize,
    pub epsilon: T,
    pub residual_balancing: bool,
    pub seed: u64,
}

impl<T: Real> RecoveryConfig<T> {
    /// Defaults for dimension d: μ = 1, tol_abs = 1e-7·d, tol_rel = 1e-5,
    /// max_iter = 20000, ε = 0, balancing on.
    pub fn default_for(method: Method, d: usize) -> Self {
        Self {
            method,
            mu: T::one(),
            tol_abs: lit::<T>(1e-7) * lit(d as f64),
            tol_rel: lit(1e-5),
            max_iter: 20_000,
            epsilon: T::zero(),
            residual_balancing: true,
            seed: 0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.mu <= T::zero() {
            return Err(Error::invalid("penalty mu must be positive"));
        }
        if self.tol_abs <= T::zero() || self.tol_rel <= T::zero() {
            return Err(Error::invalid("tolerances must be positive"));
        }
        if self.max_iter == 0 {
            return Err(Error::invalid("max_iter must be at least 1"));
        }
        if self.epsilon < T::zero() {
            return Err(Error::invalid("epsilon must be nonnegative"));
        }
        Ok(())
    }
}

/// Reconstructed state plus solver telemetry.
#[derive(Debug, Clone)]
pub struct RecoveryResult<T: Real> {
    pub rho: DensityMatrix<T>,
    pub objective: T,
    pub primal_residual: T,
    pub dual_residual: T,
    pub iterations: usize,
    pub converged: bool,
}

/// Uniformly random m-subset of an operator set, deterministic per seed.
/// Ids are re-indexed densely; the returned vector maps new id → original id.
pub fn sample_without_replacement<T: Real>(
    set: &OperatorSet<T>,
    m: usize,
    seed: u64,
) -> Result<(OperatorSet<T>, Vec<usize>)> {
    if m == 0 {
        return Err(Error::invalid("subset size must be at least 1"));
    }
    if m > set.len() {
        return Err(Error::invalid(format!(
            "subset size {m} exceeds pool size {}",
            set.len()
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let picked = rand::seq::index::sample(&mut rng, set.len(), m).into_vec();
    let descriptors = picked.iter().map(|&i| set.descriptors[i].clone()).collect();
    let settings = picked.iter().map(|&i| set.settings[i]).collect();
    Ok((
        OperatorSet {
            name: format!("{}[{}]", set.name, m),
            n: set.n,
            descriptors,
            settings,
        },
        picked,
    ))
}

/// Restricts measurement records to a sampled subset, rewriting operator ids
/// to the subset's dense indexing. Errors if a picked operator has no record.
pub fn subset_records<T: Real>(
    records: &[MeasurementRecord<T>],
    original_ids: &[usize],
) -> Result<Vec<MeasurementRecord<T>>> {
    let by_id: std::collections::HashMap<usize, &MeasurementRecord<T>> =
        records.iter().map(|r| (r.operator_id, r)).collect();
    original_ids
        .iter()
        .enumerate()
        .map(|(new_id, &orig)| {
            by_id
                .get(&orig)
                .map(|r| MeasurementRecord {
                    operator_id: new_id,
                    ..(*r).clone()
                })
                .ok_or_else(|| Error::invalid(format!("no measurement record for operator {orig}")))
        })
        .collect()
}
