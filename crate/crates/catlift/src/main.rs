use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use catlift::error::Error;
use catlift::files;
use catlift::metrics;
use catlift::operators::standard_set;
use catlift::recovery::{self, Method, RecoveryConfig};
use catlift::states::{self, NoiseModel};
use catlift::sweep::{run_sweep, Reference, SweepConfig};

#[derive(Parser)]
#[command(
    name = "catlift",
    about = "Compressed tomography of n-qubit Schrödinger-cat states",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Write a standard operator set as JSON Lines.
    GenOps {
        /// Number of qubits.
        #[arg(long)]
        qubits: usize,
        /// Set name: full, fid14, fid3, or photon8.
        #[arg(long)]
        set: String,
        /// Output path.
        #[arg(long)]
        out: PathBuf,
    },
    /// Simulate measurement data for an operator set on a (noisy) cat state.
    Simulate {
        /// Operator-set file.
        #[arg(long)]
        ops: PathBuf,
        /// Noise model: none, white:<p>, or gaussian:<sigma>.
        #[arg(long, default_value = "none")]
        noise: String,
        /// Shots per measurement setting; 0 means exact expectations.
        #[arg(long, default_value_t = 0)]
        shots: u64,
        /// RNG seed for noise and shot sampling.
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Output CSV path.
        #[arg(long)]
        out: PathBuf,
        /// Optional path for the simulated (noisy) state itself.
        #[arg(long)]
        state_out: Option<PathBuf>,
    },
    /// Reconstruct a density matrix from measurements.
    Recover {
        /// Operator-set file.
        #[arg(long)]
        ops: PathBuf,
        /// Measurement CSV.
        #[arg(long)]
        meas: PathBuf,
        /// phaselift or l1.
        #[arg(long, default_value = "phaselift")]
        method: String,
        /// Constraint slack for the l1 method.
        #[arg(long, default_value_t = 0.0)]
        epsilon: f64,
        /// Absolute stopping tolerance (default scales with dimension).
        #[arg(long)]
        tol_abs: Option<f64>,
        /// Relative stopping tolerance.
        #[arg(long)]
        tol_rel: Option<f64>,
        /// Iteration cap.
        #[arg(long)]
        max_iter: Option<usize>,
        /// Output path for the reconstructed state.
        #[arg(long)]
        out: PathBuf,
        /// Optional path for solver telemetry.
        #[arg(long)]
        telemetry: Option<PathBuf>,
    },
    /// Report metrics for a stored density matrix.
    Metrics {
        /// Density-matrix file.
        #[arg(long)]
        rho: PathBuf,
        /// Reference state for error metrics; defaults to the ideal cat state.
        #[arg(long)]
        reference: Option<PathBuf>,
        /// Output path; stdout if omitted.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Optional θ/value CSV of the visibility curve for plotting.
        #[arg(long)]
        plot: Option<PathBuf>,
    },
    /// Reconstruction quality versus number of subsampled operators.
    Sweep {
        /// Operator-set file (the pool).
        #[arg(long)]
        ops: PathBuf,
        /// Measurement CSV covering the whole pool.
        #[arg(long)]
        meas: PathBuf,
        /// phaselift or l1.
        #[arg(long, default_value = "phaselift")]
        method: String,
        /// Constraint slack for the l1 method.
        #[arg(long, default_value_t = 0.0)]
        epsilon: f64,
        /// Comma-separated subset sizes, e.g. 64,256,1024.
        #[arg(long, value_delimiter = ',', required = true)]
        sizes: Vec<usize>,
        /// Random subsets per size.
        #[arg(long, default_value_t = 10)]
        reps: usize,
        /// Master seed; per-cell seeds are derived from it.
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Error reference: ideal, or full (a reconstruction from the
        /// complete pool).
        #[arg(long, default_value = "ideal")]
        reference: String,
        #[arg(long)]
        tol_abs: Option<f64>,
        #[arg(long)]
        tol_rel: Option<f64>,
        #[arg(long)]
        max_iter: Option<usize>,
        /// Output path for the sweep report.
        #[arg(long)]
        out: PathBuf,
        /// Optional size/fidelity/error CSV of the per-size means for plotting.
        #[arg(long)]
        plot: Option<PathBuf>,
    },
}

fn parse_method(s: &str) -> Result<Method, Error> {
    match s {
        "phaselift" => Ok(Method::PhaseLift),
        "l1" => Ok(Method::L1),
        other => Err(Error::invalid(format!(
            "unknown method {other:?}; expected phaselift or l1"
        ))),
    }
}

fn recovery_config(
    method: &str,
    d: usize,
    epsilon: f64,
    tol_abs: Option<f64>,
    tol_rel: Option<f64>,
    max_iter: Option<usize>,
) -> Result<RecoveryConfig<f64>, Error> {
    let mut cfg = RecoveryConfig::default_for(parse_method(method)?, d);
    cfg.epsilon = epsilon;
    if let Some(t) = tol_abs {
        cfg.tol_abs = t;
    }
    if let Some(t) = tol_rel {
        cfg.tol_rel = t;
    }
    if let Some(m) = max_iter {
        cfg.max_iter = m;
    }
    cfg.validate()?;
    Ok(cfg)
}

fn qubits_of_dim(d: usize) -> Result<usize, Error> {
    if d < 2 || !d.is_power_of_two() {
        return Err(Error::invalid(format!(
            "density matrix dimension {d} is not a power of two >= 2"
        )));
    }
    Ok(d.trailing_zeros() as usize)
}

fn run(cli: Cli) -> Result<(), Error> {
    match cli.command {
        Command::GenOps { qubits, set, out } => {
            let ops = standard_set::<f64>(&set, qubits)?;
            files::write_operator_set(&out, &ops)?;
            eprintln!("wrote {} operators ({} qubits) to {}", ops.len(), qubits, out.display());
        }
        Command::Simulate {
            ops,
            noise,
            shots,
            seed,
            out,
            state_out,
        } => {
            let set = files::read_operator_set::<f64>(&ops)?;
            let model = NoiseModel::parse(&noise)?;
            let ideal = states::ideal_density::<f64>(set.n)?;
            let rho = states::apply_noise(&ideal, model, seed)?;
            // Distinct stream for shot sampling so noise draws stay stable
            // when only the shot count changes.
            let records = states::simulate_measurements(&rho, &set, shots, seed ^ 0x5349_4d55)?;
            files::write_measurements(&out, &records)?;
            if let Some(path) = state_out {
                files::write_density(&path, rho.matrix())?;
            }
            eprintln!("wrote {} records to {}", records.len(), out.display());
        }
        Command::Recover {
            ops,
            meas,
            method,
            epsilon,
            tol_abs,
            tol_rel,
            max_iter,
            out,
            telemetry,
        } => {
            let set = files::read_operator_set::<f64>(&ops)?;
            let records = files::read_measurements::<f64>(&meas)?;
            let cfg = recovery_config(&method, set.dim(), epsilon, tol_abs, tol_rel, max_iter)?;
            let result = recovery::recover(&set, &records, &cfg)?;
            files::write_density(&out, result.rho.matrix())?;
            if let Some(path) = telemetry {
                files::write_json(&path, &files::Telemetry::from_result(&result))?;
            }
            eprintln!(
                "{} iterations, objective {:.6e}, converged: {}",
                result.iterations, result.objective, result.converged
            );
            if !result.converged {
                eprintln!("warning: solver hit the iteration cap before the tolerances");
            }
        }
        Command::Metrics {
            rho,
            reference,
            out,
            plot,
        } => {
            let raw = files::read_density::<f64>(&rho)?;
            let state = files::validate_density(&raw)?;
            let n = qubits_of_dim(state.dim())?;
            let reference = match reference {
                Some(path) => files::validate_density(&files::read_density::<f64>(&path)?)?,
                None => states::ideal_density::<f64>(n)?,
            };
            let report = metrics::full_report(&state, &reference, n)?;
            if let Some(path) = plot {
                files::write_visibility_csv(&path, &report)?;
            }
            match out {
                Some(path) => files::write_json(&path, &report)?,
                None => println!("{}", serde_json::to_string_pretty(&report).unwrap()),
            }
        }
        Command::Sweep {
            ops,
            meas,
            method,
            epsilon,
            sizes,
            reps,
            seed,
            reference,
            tol_abs,
            tol_rel,
            max_iter,
            out,
            plot,
        } => {
            let pool = files::read_operator_set::<f64>(&ops)?;
            let records = files::read_measurements::<f64>(&meas)?;
            let reference = match reference.as_str() {
                "ideal" => Reference::Ideal,
                "full" => Reference::FullRecovery,
                other => {
                    return Err(Error::invalid(format!(
                        "unknown reference {other:?}; expected ideal or full"
                    )))
                }
            };
            let cfg = SweepConfig {
                sizes,
                repetitions: reps,
                master_seed: seed,
                reference,
                recovery: recovery_config(&method, pool.dim(), epsilon, tol_abs, tol_rel, max_iter)?,
            };
            let report = run_sweep(&cfg, &pool, &records)?;
            files::write_json(&out, &report)?;
            if let Some(path) = plot {
                files::write_sweep_csv(&path, &report)?;
            }
            for s in &report.summaries {
                eprintln!(
                    "size {:>6}: mean F = {:.4}, mean MSE = {:.3e} ({} cells, {} failed)",
                    s.size, s.mean_fidelity, s.mean_mse, s.cells, s.failures
                );
            }
        }
    }
    Ok(())
}

/// Usage mistakes exit 1; bad data or failed numerics exit 2.
fn exit_code(err: &Error) -> u8 {
    match err {
        Error::InvalidArgument(_) => 1,
        _ => 2,
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // Help and version requests are not errors.
            if e.use_stderr() {
                eprint!("{e}");
                return ExitCode::from(1);
            }
            print!("{e}");
            return ExitCode::SUCCESS;
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
