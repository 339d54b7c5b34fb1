//! Temporary diagnostic: reproduce the 6-qubit plateau sweep size by size.

use catlift::operators::standard_set;
use catlift::recovery::{Method, RecoveryConfig};
use catlift::states::{apply_noise, ideal_density, simulate_measurements, NoiseModel};
use catlift::sweep::{run_sweep, Reference, SweepConfig};

fn main() {
    let n = 6;
    let d = 1usize << n;
    let sizes: Vec<usize> = std::env::args()
        .skip(1)
        .map(|s| s.parse().unwrap())
        .collect();
    let pool = standard_set::<f64>("full", n).unwrap();
    let p = (1.0 - 0.63) / (1.0 - 1.0 / d as f64);
    let ideal = ideal_density::<f64>(n).unwrap();
    let noisy = apply_noise(&ideal, NoiseModel::White { p }, 0).unwrap();
    let records = simulate_measurements(&noisy, &pool, 1_000_000, 42).unwrap();
    for size in sizes {
        let cfg = SweepConfig {
            sizes: vec![size],
            repetitions: 12,
            master_seed: 7,
            reference: Reference::Ideal,
            recovery: RecoveryConfig::default_for(Method::PhaseLift, d),
        };
        let report = run_sweep(&cfg, &pool, &records).unwrap();
        for c in &report.cells {
            println!(
                "size {:>5} rep {:>2}: F = {:.6} fro = {:.6} mse = {:.6e} converged = {} iters = {}",
                c.size,
                c.repetition,
                c.fidelity.unwrap_or(f64::NAN),
                c.frobenius_error.unwrap_or(f64::NAN),
                c.mse.unwrap_or(f64::NAN),
                c.converged,
                c.iterations
            );
        }
        let s = &report.summaries[0];
        println!(
            "SUMMARY size {:>5}: mean F = {:.6} mean fro = {:.6} mean MSE = {:.6e} ({:.1}s)",
            s.size, s.mean_fidelity, s.mean_frobenius_error, s.mean_mse, report.wall_time_secs
        );
    }
}
