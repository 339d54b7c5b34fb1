//! ADMM solver for both recovery programs.
//!
//! Splitting: ρ carries the data term, a residual copy y carries the
//! absolute-value (or interval) penalty, and a cone copy Z carries the
//! density-matrix constraint; the L1 program adds a second matrix copy for
//! the elementwise complex soft-threshold. The ρ-update solves the
//! regularized normal equations (A*A + cI)ρ = R through the matrix-inversion
//! lemma: with G = AA* (the Gram matrix of the measurement operators,
//! factored once per solve), (A*A + cI)⁻¹R = (R − A*((G + cI)⁻¹A(R)))/c.
//! Every other update is a closed-form prox; the dominant per-iteration cost
//! is one eigendecomposition for the cone projection.

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::linalg::{project_density_cone, Cholesky, ComplexMatrix};
use crate::operators::{OperatorSet, RealizedOperator};
use crate::scalar::{lit, Real};
use crate::states::MeasurementRecord;

use super::{Method, RecoveryConfig, RecoveryResult};

/// Measurement map A: Hermitian d×d → ℝ^Num and its adjoint.
struct MeasurementMap<T: Real> {
    ops: Vec<RealizedOperator<T>>,
    dim: usize,
}

impl<T: Real> MeasurementMap<T> {
    fn apply(&self, rho: &ComplexMatrix<T>) -> Vec<T> {
        self.ops.iter().map(|op| op.expectation(rho)).collect()
    }

    fn adjoint(&self, weights: &[T]) -> ComplexMatrix<T> {
        let mut acc = ComplexMatrix::zeros(self.dim, self.dim);
        for (op, &w) in self.ops.iter().zip(weights) {
            if !w.is_zero() {
                op.accumulate(w, &mut acc);
            }
        }
        acc
    }

    /// Gram matrix G with G[i][j] = Tr(Mᵢ Mⱼ), row-major.
    fn gram(&self) -> Vec<T> {
        let num = self.ops.len();
        let mut g = vec![T::zero(); num * num];
        for i in 0..num {
            for j in i..num {
                let v = self.ops[i].product_trace(&self.ops[j]);
                g[i * num + j] = v;
                g[j * num + i] = v;
            }
        }
        g
    }
}

fn soft_threshold<T: Real>(x: T, tau: T) -> T {
    if x > tau {
        x - tau
    } else if x < -tau {
        x + tau
    } else {
        T::zero()
    }
}

/// Shrinks the modulus of every entry, preserving the phase.
fn complex_soft_threshold<T: Real>(m: &ComplexMatrix<T>, tau: T) -> ComplexMatrix<T> {
    ComplexMatrix::from_fn(m.rows(), m.cols(), |j, k| {
        let z = m[(j, k)];
        let r = z.norm();
        if r > tau {
            z * Complex::new((r - tau) / r, T::zero())
        } else {
            Complex::new(T::zero(), T::zero())
        }
    })
}

fn vec_norm<T: Real>(v: &[T]) -> T {
    v.iter().fold(T::zero(), |acc, x| acc + *x * *x).sqrt()
}

/// min Σ|Tr(Mᵢρ) − bᵢ| s.t. ρ = ρ*, Tr ρ = 1, ρ ⪰ 0.
pub fn recover_phaselift<T: Real>(
    ops: &OperatorSet<T>,
    records: &[MeasurementRecord<T>],
    cfg: &RecoveryConfig<T>,
) -> Result<RecoveryResult<T>> {
    let mut cfg = cfg.clone();
    cfg.method = Method::PhaseLift;
    recover(ops, records, &cfg)
}

/// min Σ|ρ_jk| s.t. |Tr(Mᵢρ) − bᵢ| ≤ ε, ρ = ρ*, Tr ρ = 1, ρ ⪰ 0.
pub fn recover_l1<T: Real>(
    ops: &OperatorSet<T>,
    records: &[MeasurementRecord<T>],
    cfg: &RecoveryConfig<T>,
) -> Result<RecoveryResult<T>> {
    let mut cfg = cfg.clone();
    cfg.method = Method::L1;
    recover(ops, records, &cfg)
}

/// Runs the program selected by `cfg.method`.
pub fn recover<T: Real>(
    ops: &OperatorSet<T>,
    records: &[MeasurementRecord<T>],
    cfg: &RecoveryConfig<T>,
) -> Result<RecoveryResult<T>> {
    cfg.validate()?;
    if records.is_empty() {
        return Err(Error::invalid("at least one measurement record is required"));
    }
    for r in records {
        if r.operator_id >= ops.len() {
            return Err(Error::invalid(format!(
                "record references operator id {} but the set has {} operators",
                r.operator_id,
                ops.len()
            )));
        }
        if !r.value.is_finite() {
            return Err(Error::invalid(format!(
                "non-finite measurement value for operator {}",
                r.operator_id
            )));
        }
    }

    let d = ops.dim();
    let realized = ops.realize_all();
    let map = MeasurementMap {
        ops: records
            .iter()
            .map(|r| realized[r.operator_id].clone())
            .collect(),
        dim: d,
    };
    let b: Vec<T> = records.iter().map(|r| r.value).collect();
    let num = b.len();

    // Number of matrix consensus copies alongside the data split.
    let c = match cfg.method {
        Method::PhaseLift => T::one(),
        Method::L1 => lit(2.0),
    };
    let mut gram = map.gram();
    for i in 0..num {
        gram[i * num + i] += c;
    }
    let chol = Cholesky::factor(gram, num)?;
    let solve_regularized = |rhs: &ComplexMatrix<T>| -> ComplexMatrix<T> {
        let t = map.apply(rhs);
        let s = chol.solve(&t);
        let correction = map.adjoint(&s);
        rhs.sub(&correction).scale_re(T::one() / c)
    };

    let mut mu = cfg.mu;
    let mixed = ComplexMatrix::identity(d).scale_re(T::one() / lit(d as f64));
    let mut rho = mixed.clone();
    let mut z_cone = mixed.clone();
    let mut w_cone = ComplexMatrix::zeros(d, d);
    // PhaseLift: y is the residual copy A(ρ)−b. L1: y is the A(ρ) copy.
    let mut y = vec![T::zero(); num];
    if cfg.method == Method::L1 {
        y = map.apply(&rho);
    }
    let mut u = vec![T::zero(); num];
    let mut z_soft = mixed.clone();
    let mut w_soft = ComplexMatrix::zeros(d, d);

    let b_norm = vec_norm(&b);
    let mut primal = T::infinity();
    let mut dual = T::infinity();
    let mut converged = false;
    let mut iterations = 0usize;

    for iter in 1..=cfg.max_iter {
        iterations = iter;

        // ρ-update.
        let mut rhs = match cfg.method {
            Method::PhaseLift => {
                let w: Vec<T> = (0..num).map(|i| b[i] + y[i] - u[i]).collect();
                map.adjoint(&w)
            }
            Method::L1 => {
                let w: Vec<T> = (0..num).map(|i| y[i] - u[i]).collect();
                map.adjoint(&w)
            }
        };
        rhs = rhs.add(&z_cone.sub(&w_cone));
        if cfg.method == Method::L1 {
            rhs = rhs.add(&z_soft.sub(&w_soft));
        }
        rho = solve_regularized(&rhs);
        let a_rho = map.apply(&rho);

        // Prox updates.
        let y_old = y.clone();
        let z_cone_old = z_cone.clone();
        let z_soft_old = z_soft.clone();
        match cfg.method {
            Method::PhaseLift => {
                let tau = T::one() / mu;
                for i in 0..num {
                    y[i] = soft_threshold(a_rho[i] - b[i] + u[i], tau);
                }
            }
            Method::L1 => {
                for i in 0..num {
                    let v = a_rho[i] + u[i];
                    y[i] = v.max(b[i] - cfg.epsilon).min(b[i] + cfg.epsilon);
                }
            }
        }
        z_cone = project_density_cone(&rho.add(&w_cone))?.into_matrix();
        if cfg.method == Method::L1 {
            z_soft = complex_soft_threshold(&rho.add(&w_soft), T::one() / mu);
        }

        // Dual updates (scaled form).
        let data_gap: Vec<T> = match cfg.method {
            Method::PhaseLift => (0..num).map(|i| a_rho[i] - b[i] - y[i]).collect(),
            Method::L1 => (0..num).map(|i| a_rho[i] - y[i]).collect(),
        };
        for i in 0..num {
            u[i] += data_gap[i];
        }
        let cone_gap = rho.sub(&z_cone);
        w_cone = w_cone.add(&cone_gap);
        let soft_gap = if cfg.method == Method::L1 {
            let g = rho.sub(&z_soft);
            w_soft = w_soft.add(&g);
            g
        } else {
            ComplexMatrix::zeros(0, 0)
        };

        // Residuals and stopping test.
        let mut pri_sq = vec_norm(&data_gap).powi(2) + cone_gap.frobenius_norm().powi(2);
        let dy: Vec<T> = (0..num).map(|i| y[i] - y_old[i]).collect();
        let mut dual_sq = map.adjoint(&dy).frobenius_norm().powi(2)
            + z_cone.sub(&z_cone_old).frobenius_norm().powi(2);
        if cfg.method == Method::L1 {
            pri_sq += soft_gap.frobenius_norm().powi(2);
            dual_sq += z_soft.sub(&z_soft_old).frobenius_norm().powi(2);
        }
        primal = pri_sq.sqrt();
        dual = mu * dual_sq.sqrt();

        let iterate_scale = (vec_norm(&a_rho).powi(2) + rho.frobenius_norm().powi(2)).sqrt();
        let copy_scale = (vec_norm(&y).powi(2)
            + z_cone.frobenius_norm().powi(2)
            + if cfg.method == Method::L1 {
                z_soft.frobenius_norm().powi(2)
            } else {
                T::zero()
            })
        .sqrt();
        let pri_scale = iterate_scale.max(copy_scale).max(b_norm);
        let dual_scale = mu
            * (vec_norm(&u).powi(2)
                + w_cone.frobenius_norm().powi(2)
                + if cfg.method == Method::L1 {
                    w_soft.frobenius_norm().powi(2)
                } else {
                    T::zero()
                })
            .sqrt();
        let eps_pri = cfg.tol_abs + cfg.tol_rel * pri_scale;
        let eps_dual = cfg.tol_abs + cfg.tol_rel * dual_scale;
        if primal <= eps_pri && dual <= eps_dual {
            converged = true;
            break;
        }

        // Residual balancing: rescale μ when the residuals drift apart.
        // Adaptation stops after a fixed horizon — convergence of ADMM with
        // a varying penalty is only guaranteed once the penalty settles, and
        // unbounded adaptation can limit-cycle on small problems.
        if cfg.residual_balancing && iter % 10 == 0 && iter <= 1000 {
            let ten = lit::<T>(10.0);
            let two = lit::<T>(2.0);
            let half = lit::<T>(0.5);
            if primal > ten * dual && mu < lit(1e6) {
                mu *= two;
                for v in &mut u {
                    *v *= half;
                }
                w_cone = w_cone.scale_re(half);
                w_soft = w_soft.scale_re(half);
            } else if dual > ten * primal && mu > lit(1e-6) {
                mu *= half;
                for v in &mut u {
                    *v *= two;
                }
                w_cone = w_cone.scale_re(two);
                w_soft = w_soft.scale_re(two);
            }
        }
    }

    // The final iterate always passes through the cone projection.
    let rho_final = project_density_cone(&rho)?;
    let objective = match cfg.method {
        Method::PhaseLift => map
            .apply(rho_final.matrix())
            .iter()
            .zip(&b)
            .fold(T::zero(), |acc, (a, bi)| acc + (*a - *bi).abs()),
        Method::L1 => rho_final
            .matrix()
            .data()
            .iter()
            .fold(T::zero(), |acc, z| acc + z.norm()),
    };

    Ok(RecoveryResult {
        rho: rho_final,
        objective,
        primal_residual: primal,
        dual_residual: dual,
        iterations,
        converged,
    })
}
