//! Subsampling sweeps: reconstruction quality as a function of how many
//! operators are kept from a measured pool, averaged over random subsets.

use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::DensityMatrix;
use crate::metrics::{error_metrics, fidelity};
use crate::operators::OperatorSet;
use crate::recovery::{recover, sample_without_replacement, subset_records, RecoveryConfig};
use crate::scalar::Real;
use crate::states::{sc_state, MeasurementRecord};

/// What the per-cell error metrics are computed against.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Reference {
    /// The ideal cat state.
    Ideal,
    /// A reconstruction from the complete pool, solved once up front.
    FullRecovery,
}

/// Sweep plan: for each size in `sizes`, draw `repetitions` random subsets
/// of the operator pool and reconstruct from each.
#[derive(Debug, Clone)]
pub struct SweepConfig<T: Real> {
    pub sizes: Vec<usize>,
    pub repetitions: usize,
    pub master_seed: u64,
    pub reference: Reference,
    pub recovery: RecoveryConfig<T>,
}

/// One (size, repetition) reconstruction. `error` records a per-cell solver
/// failure without aborting the sweep.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SweepCell {
    pub size: usize,
    pub repetition: usize,
    pub seed: u64,
    pub fidelity: Option<f64>,
    pub frobenius_error: Option<f64>,
    pub mse: Option<f64>,
    pub converged: bool,
    pub iterations: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

/// Per-size means over the successful cells.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SweepSizeSummary {
    pub size: usize,
    pub cells: usize,
    pub failures: usize,
    pub mean_fidelity: f64,
    pub mean_frobenius_error: f64,
    pub mean_mse: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SweepReport {
    pub pool_size: usize,
    pub master_seed: u64,
    pub cells: Vec<SweepCell>,
    pub summaries: Vec<SweepSizeSummary>,
    pub wall_time_secs: f64,
}

/// Derives the per-cell subsampling seed from the master seed with a
/// splitmix64-style mix, so cells are independent and reproducible.
pub fn cell_seed(master: u64, size: usize, repetition: usize) -> u64 {
    let mut x = master
        .wrapping_add(0x9e37_79b9_7f4a_7c15u64.wrapping_mul(size as u64 + 1))
        .wrapping_add(0xbf58_476d_1ce4_e5b9u64.wrapping_mul(repetition as u64 + 1));
    x = (x ^ (x >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    x = (x ^ (x >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    x ^ (x >> 31)
}

/// Runs a sweep over an already-measured pool. `records` must cover every
/// operator in `pool` under the pool's dense ids.
pub fn run_sweep<T: Real>(
    cfg: &SweepConfig<T>,
    pool: &OperatorSet<T>,
    records: &[MeasurementRecord<T>],
) -> Result<SweepReport> {
    cfg.recovery.validate()?;
    if cfg.sizes.is_empty() || cfg.repetitions == 0 {
        return Err(Error::invalid("sweep needs at least one size and one repetition"));
    }
    for &m in &cfg.sizes {
        if m == 0 || m > pool.len() {
            return Err(Error::invalid(format!(
                "sweep size {m} is outside the pool (1..={})",
                pool.len()
            )));
        }
    }
    let start = Instant::now();
    let target = sc_state::<T>(pool.n)?;
    let reference: DensityMatrix<T> = match cfg.reference {
        Reference::Ideal => crate::states::ideal_density(pool.n)?,
        Reference::FullRecovery => recover(pool, records, &cfg.recovery)?.rho,
    };

    let mut sizes = cfg.sizes.clone();
    sizes.sort_unstable();
    sizes.dedup();

    let mut cells = Vec::with_capacity(sizes.len() * cfg.repetitions);
    for &size in &sizes {
        for rep in 0..cfg.repetitions {
            let seed = cell_seed(cfg.master_seed, size, rep);
            let cell = match run_cell(cfg, pool, records, &reference, &target, size, seed) {
                Ok((fid, fro, mse, converged, iterations)) => SweepCell {
                    size,
                    repetition: rep,
                    seed,
                    fidelity: Some(fid),
                    frobenius_error: Some(fro),
                    mse: Some(mse),
                    converged,
                    iterations,
                    error: None,
                },
                Err(e) => SweepCell {
                    size,
                    repetition: rep,
                    seed,
                    fidelity: None,
                    frobenius_error: None,
                    mse: None,
                    converged: false,
                    iterations: 0,
                    error: Some(e.to_string()),
                },
            };
            cells.push(cell);
        }
    }

    let summaries = sizes
        .iter()
        .map(|&size| summarize(&cells, size))
        .collect();
    Ok(SweepReport {
        pool_size: pool.len(),
        master_seed: cfg.master_seed,
        cells,
        summaries,
        wall_time_secs: start.elapsed().as_secs_f64(),
    })
}

#[allow(clippy::too_many_arguments)]
fn run_cell<T: Real>(
    cfg: &SweepConfig<T>,
    pool: &OperatorSet<T>,
    records: &[MeasurementRecord<T>],
    reference: &DensityMatrix<T>,
    target: &crate::linalg::StateVector<T>,
    size: usize,
    seed: u64,
) -> Result<(f64, f64, f64, bool, usize)> {
    let (subset, ids) = sample_without_replacement(pool, size, seed)?;
    let sub_records = subset_records(records, &ids)?;
    let result = recover(&subset, &sub_records, &cfg.recovery)?;
    let fid = fidelity(&result.rho, target)?;
    let (fro, mse) = error_metrics(result.rho.matrix(), reference.matrix())?;
    Ok((
        fid.to_f64().unwrap(),
        fro.to_f64().unwrap(),
        mse.to_f64().unwrap(),
        result.converged,
        result.iterations,
    ))
}

fn summarize(cells: &[SweepCell], size: usize) -> SweepSizeSummary {
    let mine: Vec<&SweepCell> = cells.iter().filter(|c| c.size == size).collect();
    let ok: Vec<&&SweepCell> = mine.iter().filter(|c| c.error.is_none()).collect();
    let mean = |f: fn(&SweepCell) -> Option<f64>| -> f64 {
        if ok.is_empty() {
            f64::NAN
        } else {
            ok.iter().map(|c| f(c).unwrap()).sum::<f64>() / ok.len() as f64
        }
    };
    SweepSizeSummary {
        size,
        cells: mine.len(),
        failures: mine.len() - ok.len(),
        mean_fidelity: mean(|c| c.fidelity),
        mean_frobenius_error: mean(|c| c.frobenius_error),
        mean_mse: mean(|c| c.mse),
    }
}
