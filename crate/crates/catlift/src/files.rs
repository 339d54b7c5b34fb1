//! File formats: JSONL operator sets, CSV measurement records, JSON density
//! matrices and reports. Values are written with 17 significant digits so
//! round-trips are byte-exact for f64 data.

use std::fs;
use std::io::{BufRead, BufReader};
use std::path::Path;

use num_complex::Complex;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{ComplexMatrix, DensityMatrix};
use crate::operators::{OperatorDescriptor, OperatorSet, Sign};
use crate::recovery::RecoveryResult;
use crate::scalar::{lit, Real};
use crate::states::MeasurementRecord;

fn io_err(path: &Path, source: std::io::Error) -> Error {
    Error::Io {
        path: path.display().to_string(),
        source,
    }
}

/// One JSONL line of an operator-set file.
#[derive(Debug, Serialize, Deserialize)]
struct OperatorLine {
    id: usize,
    kind: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    bits: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    theta: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    signs: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    n: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    re: Option<Vec<Vec<f64>>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    im: Option<Vec<Vec<f64>>>,
    setting: usize,
}

fn matrix_to_parts<T: Real>(m: &ComplexMatrix<T>) -> (Vec<Vec<f64>>, Vec<Vec<f64>>) {
    let re = (0..m.rows())
        .map(|j| (0..m.cols()).map(|k| m[(j, k)].re.to_f64().unwrap()).collect())
        .collect();
    let im = (0..m.rows())
        .map(|j| (0..m.cols()).map(|k| m[(j, k)].im.to_f64().unwrap()).collect())
        .collect();
    (re, im)
}

fn matrix_from_parts<T: Real>(re: &[Vec<f64>], im: &[Vec<f64>]) -> Result<ComplexMatrix<T>> {
    let rows = re.len();
    if rows == 0 || im.len() != rows {
        return Err(Error::invalid("re/im blocks must be nonempty and congruent"));
    }
    let cols = re[0].len();
    if re.iter().any(|r| r.len() != cols) || im.iter().any(|r| r.len() != cols) {
        return Err(Error::invalid("ragged re/im blocks"));
    }
    let mut m = ComplexMatrix::zeros(rows, cols);
    for j in 0..rows {
        for k in 0..cols {
            if !re[j][k].is_finite() || !im[j][k].is_finite() {
                return Err(Error::invalid(format!("non-finite entry at ({j},{k})")));
            }
            m[(j, k)] = Complex::new(lit(re[j][k]), lit(im[j][k]));
        }
    }
    Ok(m)
}

/// Writes an operator set as JSON Lines, one descriptor per line.
pub fn write_operator_set<T: Real>(path: &Path, set: &OperatorSet<T>) -> Result<()> {
    let mut out = Vec::new();
    for (id, desc) in set.descriptors.iter().enumerate() {
        let mut line = OperatorLine {
            id,
            kind: String::new(),
            bits: None,
            theta: None,
            signs: None,
            n: None,
            re: None,
            im: None,
            setting: set.settings[id],
        };
        match desc {
            OperatorDescriptor::Computational { bits } => {
                line.kind = "computational".into();
                line.bits = Some(bits.iter().map(|b| if *b == 0 { '0' } else { '1' }).collect());
            }
            OperatorDescriptor::ThetaPattern { theta, signs } => {
                line.kind = "theta_pattern".into();
                line.theta = Some(theta.to_f64().unwrap());
                line.signs = Some(signs.iter().map(|s| s.as_char()).collect());
            }
            OperatorDescriptor::MThetaPower { theta, n } => {
                line.kind = "m_theta_power".into();
                line.theta = Some(theta.to_f64().unwrap());
                line.n = Some(*n);
            }
            OperatorDescriptor::Dense { matrix } => {
                line.kind = "dense".into();
                let (re, im) = matrix_to_parts(matrix);
                line.re = Some(re);
                line.im = Some(im);
            }
        }
        out.extend_from_slice(serde_json::to_string(&line).unwrap().as_bytes());
        out.push(b'\n');
    }
    fs::write(path, out).map_err(|e| io_err(path, e))
}

/// Reads an operator-set file; format errors name the offending line.
pub fn read_operator_set<T: Real>(path: &Path) -> Result<OperatorSet<T>> {
    let file = fs::File::open(path).map_err(|e| io_err(path, e))?;
    let reader = BufReader::new(file);
    let display = path.display().to_string();
    let mut entries: Vec<(usize, OperatorDescriptor<T>, usize)> = Vec::new();
    for (line_no, line) in reader.lines().enumerate() {
        let line = line.map_err(|e| io_err(path, e))?;
        if line.trim().is_empty() {
            continue;
        }
        let parsed: OperatorLine = serde_json::from_str(&line)
            .map_err(|e| Error::format(&display, line_no + 1, e.to_string()))?;
        let desc = descriptor_from_line(&parsed)
            .map_err(|e| Error::format(&display, line_no + 1, e.to_string()))?;
        entries.push((parsed.id, desc, parsed.setting));
    }
    if entries.is_empty() {
        return Err(Error::format(&display, 1, "empty operator file"));
    }
    entries.sort_by_key(|(id, _, _)| *id);
    for (want, (id, _, _)) in entries.iter().enumerate() {
        if *id != want {
            return Err(Error::format(
                &display,
                0,
                format!("operator ids are not dense from 0: missing id {want}"),
            ));
        }
    }
    let n = entries
        .iter()
        .find_map(|(_, d, _)| d.qubits())
        .ok_or_else(|| Error::format(&display, 0, "cannot infer qubit count"))?;
    let dim = 1usize << n;
    for (id, d, _) in &entries {
        if d.dim() != dim {
            return Err(Error::format(
                &display,
                0,
                format!("operator {id} has dimension {} but the set uses {dim}", d.dim()),
            ));
        }
    }
    Ok(OperatorSet {
        name: path
            .file_stem()
            .map(|s| s.to_string_lossy().into_owned())
            .unwrap_or_else(|| "operators".into()),
        n,
        settings: entries.iter().map(|(_, _, s)| *s).collect(),
        descriptors: entries.into_iter().map(|(_, d, _)| d).collect(),
    })
}

fn descriptor_from_line<T: Real>(line: &OperatorLine) -> Result<OperatorDescriptor<T>> {
    match line.kind.as_str() {
        "computational" => {
            let bits = line
                .bits
                .as_ref()
                .ok_or_else(|| Error::invalid("computational operator requires bits"))?;
            let bits: Result<Vec<u8>> = bits
                .chars()
                .map(|c| match c {
                    '0' => Ok(0),
                    '1' => Ok(1),
                    other => Err(Error::invalid(format!("invalid bit {other:?}"))),
                })
                .collect();
            Ok(OperatorDescriptor::Computational { bits: bits? })
        }
        "theta_pattern" => {
            let theta = line
                .theta
                .ok_or_else(|| Error::invalid("theta_pattern requires theta"))?;
            let signs = line
                .signs
                .as_ref()
                .ok_or_else(|| Error::invalid("theta_pattern requires signs"))?;
            let signs: Result<Vec<Sign>> = signs.chars().map(Sign::from_char).collect();
            Ok(OperatorDescriptor::ThetaPattern {
                theta: lit(theta),
                signs: signs?,
            })
        }
        "m_theta_power" => {
            let theta = line
                .theta
                .ok_or_else(|| Error::invalid("m_theta_power requires theta"))?;
            let n = line
                .n
                .ok_or_else(|| Error::invalid("m_theta_power requires n"))?;
            if n == 0 {
                return Err(Error::invalid("m_theta_power requires n >= 1"));
            }
            Ok(OperatorDescriptor::MThetaPower { theta: lit(theta), n })
        }
        "dense" => {
            let re = line
                .re
                .as_ref()
                .ok_or_else(|| Error::invalid("dense operator requires re"))?;
            let im = line
                .im
                .as_ref()
                .ok_or_else(|| Error::invalid("dense operator requires im"))?;
            let matrix = matrix_from_parts::<T>(re, im)?;
            matrix.check_hermitian(lit(1e-9))?;
            Ok(OperatorDescriptor::Dense { matrix })
        }
        other => Err(Error::invalid(format!("unknown operator kind {other:?}"))),
    }
}

/// Writes measurement records as CSV with header
/// `operator_id,value,setting_id,shots`.
pub fn write_measurements<T: Real>(path: &Path, records: &[MeasurementRecord<T>]) -> Result<()> {
    let mut out = String::from("operator_id,value,setting_id,shots\n");
    for r in records {
        let setting = r.setting_id.map(|s| s.to_string()).unwrap_or_default();
        let shots = r.shots.map(|s| s.to_string()).unwrap_or_default();
        out.push_str(&format!(
            "{},{:.16e},{},{}\n",
            r.operator_id,
            r.value.to_f64().unwrap(),
            setting,
            shots
        ));
    }
    fs::write(path, out).map_err(|e| io_err(path, e))
}

/// Reads a measurement CSV; schema violations name the offending line.
pub fn read_measurements<T: Real>(path: &Path) -> Result<Vec<MeasurementRecord<T>>> {
    let content = fs::read_to_string(path).map_err(|e| io_err(path, e))?;
    let display = path.display().to_string();
    let mut lines = content.lines().enumerate();
    match lines.next() {
        Some((_, header)) if header.trim() == "operator_id,value,setting_id,shots" => {}
        Some((_, header)) => {
            return Err(Error::format(
                &display,
                1,
                format!("bad header {header:?}; expected operator_id,value,setting_id,shots"),
            ))
        }
        None => return Err(Error::format(&display, 1, "empty measurement file")),
    }
    let mut records = Vec::new();
    for (idx, line) in lines {
        let line_no = idx + 1;
        if line.trim().is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != 4 {
            return Err(Error::format(
                &display,
                line_no,
                format!("expected 4 fields, found {}", fields.len()),
            ));
        }
        let operator_id: usize = fields[0]
            .trim()
            .parse()
            .map_err(|_| Error::format(&display, line_no, format!("bad operator_id {:?}", fields[0])))?;
        let value: f64 = fields[1]
            .trim()
            .parse()
            .map_err(|_| Error::format(&display, line_no, format!("bad value {:?}", fields[1])))?;
        if !value.is_finite() {
            return Err(Error::format(&display, line_no, "non-finite value"));
        }
        let setting_id = match fields[2].trim() {
            "" => None,
            s => Some(s.parse::<usize>().map_err(|_| {
                Error::format(&display, line_no, format!("bad setting_id {s:?}"))
            })?),
        };
        let shots = match fields[3].trim() {
            "" => None,
            s => Some(s.parse::<u64>().map_err(|_| {
                Error::format(&display, line_no, format!("bad shots {s:?}"))
            })?),
        };
        records.push(MeasurementRecord {
            operator_id,
            value: lit(value),
            setting_id,
            shots,
        });
    }
    if records.is_empty() {
        return Err(Error::format(&display, 1, "no measurement records"));
    }
    Ok(records)
}

/// Density-matrix JSON: {"d":64,"re":[[...]],"im":[[...]]}.
#[derive(Debug, Serialize, Deserialize)]
struct DensityFile {
    d: usize,
    re: Vec<Vec<f64>>,
    im: Vec<Vec<f64>>,
}

pub fn write_density<T: Real>(path: &Path, rho: &ComplexMatrix<T>) -> Result<()> {
    let (re, im) = matrix_to_parts(rho);
    let file = DensityFile { d: rho.dim(), re, im };
    fs::write(path, serde_json::to_string(&file).unwrap()).map_err(|e| io_err(path, e))
}

/// Reads a density-matrix file without enforcing the state invariants;
/// callers validate and report deviations.
pub fn read_density<T: Real>(path: &Path) -> Result<ComplexMatrix<T>> {
    let content = fs::read_to_string(path).map_err(|e| io_err(path, e))?;
    let display = path.display().to_string();
    let file: DensityFile = serde_json::from_str(&content)
        .map_err(|e| Error::format(&display, 1, e.to_string()))?;
    let m = matrix_from_parts::<T>(&file.re, &file.im)
        .map_err(|e| Error::format(&display, 1, e.to_string()))?;
    if m.rows() != file.d || m.cols() != file.d {
        return Err(Error::format(
            &display,
            1,
            format!("declared d={} does not match {}×{} block", file.d, m.rows(), m.cols()),
        ));
    }
    Ok(m)
}

/// Solver telemetry JSON.
#[derive(Debug, Serialize, Deserialize)]
pub struct Telemetry {
    pub objective: f64,
    pub primal_residual: f64,
    pub dual_residual: f64,
    pub iterations: usize,
    pub converged: bool,
}

impl Telemetry {
    pub fn from_result<T: Real>(r: &RecoveryResult<T>) -> Self {
        Self {
            objective: r.objective.to_f64().unwrap(),
            primal_residual: r.primal_residual.to_f64().unwrap(),
            dual_residual: r.dual_residual.to_f64().unwrap(),
            iterations: r.iterations,
            converged: r.converged,
        }
    }
}

/// θ/value CSV of the visibility curve, for external plotting.
pub fn write_visibility_csv(path: &Path, report: &crate::metrics::MetricsReport) -> Result<()> {
    let mut out = String::from("theta,value\n");
    for (t, v) in report.visibility_theta.iter().zip(&report.visibility_value) {
        out.push_str(&format!("{t:.16e},{v:.16e}\n"));
    }
    fs::write(path, out).map_err(|e| io_err(path, e))
}

/// size/fidelity/error CSV of the per-size sweep means, for external plotting.
pub fn write_sweep_csv(path: &Path, report: &crate::sweep::SweepReport) -> Result<()> {
    let mut out = String::from("size,mean_fidelity,mean_frobenius_error,mean_mse\n");
    for s in &report.summaries {
        out.push_str(&format!(
            "{},{:.16e},{:.16e},{:.16e}\n",
            s.size, s.mean_fidelity, s.mean_frobenius_error, s.mean_mse
        ));
    }
    fs::write(path, out).map_err(|e| io_err(path, e))
}

pub fn write_json<S: Serialize>(path: &Path, value: &S) -> Result<()> {
    fs::write(path, serde_json::to_string_pretty(value).unwrap()).map_err(|e| io_err(path, e))
}

/// Validates density-matrix invariants, reporting measured deviations.
pub fn validate_density<T: Real>(m: &ComplexMatrix<T>) -> Result<DensityMatrix<T>> {
    DensityMatrix::new(m.clone())
}
