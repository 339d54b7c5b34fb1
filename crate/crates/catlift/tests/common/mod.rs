//! Shared helpers for the integration tests: an independent
//! projected-subgradient reference solver and random-state generators.

use num_complex::Complex;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use catlift::linalg::{project_density_cone, ComplexMatrix, DensityMatrix};
use catlift::operators::OperatorSet;

/// Projected-subgradient reference solver for
/// min Σ|Tr(Mᵢρ) − bᵢ| over the density-matrix set.
///
/// Independent of the production ADMM path: plain subgradient steps with a
/// projection after each one, Polyak step (f − target)/‖g‖². With
/// `optimum: Some(v)` the target is the known optimal value; with `None`
/// the target follows the best value seen minus a margin that decays over
/// the run. Slow but simple — a cross-check, not a production solver.
pub fn subgradient_reference(
    ops: &OperatorSet<f64>,
    b: &[f64],
    iters: usize,
    optimum: Option<f64>,
) -> (DensityMatrix<f64>, f64) {
    let d = ops.dim();
    let realized = ops.realize_all();
    let mut rho = project_density_cone(&ComplexMatrix::identity(d).scale_re(1.0 / d as f64)).unwrap();
    let mut best = rho.clone();
    let mut best_f = f64::INFINITY;
    let mut margin = 0.1;
    for k in 0..iters {
        let residuals: Vec<f64> = realized
            .iter()
            .zip(b)
            .map(|(op, &bi)| op.expectation(rho.matrix()) - bi)
            .collect();
        let f: f64 = residuals.iter().map(|r| r.abs()).sum();
        if f < best_f {
            best_f = f;
            best = rho.clone();
        }
        let mut g = ComplexMatrix::zeros(d, d);
        for (op, &r) in realized.iter().zip(&residuals) {
            if r != 0.0 {
                op.accumulate(r.signum(), &mut g);
            }
        }
        let gnorm2 = {
            let gn = g.frobenius_norm();
            gn * gn
        };
        if gnorm2 < 1e-30 {
            break;
        }
        let target = match optimum {
            Some(v) => v,
            None => {
                if k > 0 && k % 500 == 0 {
                    margin *= 0.7;
                }
                best_f - margin
            }
        };
        let step = ((f - target) / gnorm2).max(0.0);
        if step == 0.0 {
            break;
        }
        let mut next = rho.matrix().clone();
        next.add_scaled(-step, &g);
        rho = project_density_cone(&next).unwrap();
    }
    (best, best_f)
}

/// Random full-rank density matrix GG*/Tr(GG*), deterministic per seed.
pub fn random_density(d: usize, seed: u64) -> DensityMatrix<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let g = ComplexMatrix::from_fn(d, d, |_, _| {
        Complex::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
    });
    let mut gram = ComplexMatrix::zeros(d, d);
    for j in 0..d {
        for k in 0..d {
            let mut s = Complex::new(0.0, 0.0);
            for l in 0..d {
                s += g[(j, l)] * g[(k, l)].conj();
            }
            gram[(j, k)] = s;
        }
    }
    let tr = gram.trace().re;
    DensityMatrix::new(gram.scale_re(1.0 / tr)).unwrap()
}

/// Prints the per-criterion verdict line expected by the acceptance run.
pub fn verdict(id: usize, label: &str, result: Result<(), String>) {
    match result {
        Ok(()) => println!("criterion {id:02} ({label}): PASS"),
        Err(msg) => {
            println!("criterion {id:02} ({label}): FAIL — {msg}");
            panic!("criterion {id:02} ({label}) failed: {msg}");
        }
    }
}
