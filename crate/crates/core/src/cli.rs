//! State files, JSON reports and the command implementations behind the
//! `quantumness` binary.
//!
//! A state file is UTF-8 JSON holding the full square matrix as `[re, im]`
//! pairs:
//!
//! ```json
//! {"dims": [2, 2], "matrix": [[[0.5, 0], [0, 0], [0, 0], [0.5, 0]], ...]}
//! ```
//!
//! Exit codes: 0 ok, 2 parse, 3 validation, 4 unsupported dimensions,
//! 5 argument out of range, 6 no feasible quantumness witness.

use std::fmt::Write as _;
use std::path::Path;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::Error;
use crate::linalg::{c, hermitian_eig, ComplexMatrix};
use crate::maps::{apply_amap, build_measurement_maps, classify, example_system_state, AssignmentMap};
use crate::measurement::extension_projectors;
use crate::measures::{measure_report, OptimizerConfig};
use crate::quantumness::quantumness_upper_bound;
use crate::states::{validate_density, DensityMatrix};

/// A command failure, carrying its process exit code.
#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Parse(String),
    #[error("{0}")]
    Validation(String),
    #[error("unsupported dimensions {0:?}; this command needs a two-qubit state (dims [2, 2])")]
    UnsupportedDims(Vec<usize>),
    #[error("{0}")]
    ArgumentRange(String),
    #[error("{0}")]
    NoFeasibleWitness(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Parse(_) => 2,
            CliError::Validation(_) => 3,
            CliError::UnsupportedDims(_) => 4,
            CliError::ArgumentRange(_) => 5,
            CliError::NoFeasibleWitness(_) => 6,
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::UnsupportedDimension(dims) => CliError::UnsupportedDims(dims),
            Error::OutOfRange(_) | Error::InvalidConfig(_) => CliError::ArgumentRange(e.to_string()),
            Error::NoFeasibleWitness { .. } => CliError::NoFeasibleWitness(e.to_string()),
            Error::DimensionMismatch(_) => CliError::Parse(e.to_string()),
            other => CliError::Validation(other.to_string()),
        }
    }
}

/// On-disk representation of a density matrix.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StateFile {
    pub dims: Vec<usize>,
    pub matrix: Vec<Vec<[f64; 2]>>,
}

impl StateFile {
    pub fn parse(text: &str) -> Result<Self, CliError> {
        serde_json::from_str(text).map_err(|e| {
            CliError::Parse(format!(
                "line {}, column {}: {}",
                e.line(),
                e.column(),
                strip_position(&e.to_string())
            ))
        })
    }

    pub fn from_density(rho: &DensityMatrix) -> Self {
        Self {
            dims: rho.dims().to_vec(),
            matrix: rows(rho.matrix()),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("plain data serializes")
    }

    /// The raw matrix, checked for shape only.
    pub fn matrix(&self) -> Result<ComplexMatrix, CliError> {
        let n = self.matrix.len();
        if let Some((i, row)) = self.matrix.iter().enumerate().find(|(_, r)| r.len() != n) {
            return Err(CliError::Parse(format!(
                "row {i} has {} entries; a {n}×{n} matrix needs {n}",
                row.len()
            )));
        }
        let product: usize = self.dims.iter().product();
        if self.dims.is_empty() || self.dims.contains(&0) || product != n {
            return Err(CliError::Parse(format!(
                "dims {:?} do not multiply to the matrix size {n}",
                self.dims
            )));
        }
        let rows: Vec<Vec<_>> = self.matrix.iter().map(|r| r.iter().map(|z| c(z[0], z[1])).collect()).collect();
        ComplexMatrix::from_rows(&rows).map_err(|e| CliError::Parse(e.to_string()))
    }

    pub fn density(&self) -> Result<DensityMatrix, CliError> {
        Ok(validate_density(&self.matrix()?, &self.dims)?)
    }
}

/// serde_json appends " at line L column C"; the position is reported separately.
fn strip_position(message: &str) -> &str {
    message.rsplit_once(" at line ").map_or(message, |(head, _)| head)
}

fn rows(m: &ComplexMatrix) -> Vec<Vec<[f64; 2]>> {
    m.rows().iter().map(|r| r.iter().map(|z| [z.re, z.im]).collect()).collect()
}

/// A state file read from disk, with the SHA-256 of its bytes.
pub struct LoadedState {
    pub sha256: String,
    pub file: StateFile,
}

pub fn load_state(path: &Path) -> Result<LoadedState, CliError> {
    let bytes = std::fs::read(path).map_err(|e| CliError::Parse(format!("{}: {e}", path.display())))?;
    let text = std::str::from_utf8(&bytes)
        .map_err(|e| CliError::Parse(format!("{}: not UTF-8: {e}", path.display())))?;
    let file = StateFile::parse(text).map_err(|e| CliError::Parse(format!("{}: {e}", path.display())))?;
    Ok(LoadedState {
        sha256: hex::encode(Sha256::digest(&bytes)),
        file,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MeasureValues {
    pub mutual_information: f64,
    pub discord: f64,
    pub classical_correlation: f64,
    pub oneway_deficit: f64,
    pub quantum_deficit: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BlochAngles {
    pub theta: f64,
    pub phi: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BmapSection {
    pub p: f64,
    pub matrix: Vec<Vec<[f64; 2]>>,
    pub eigenvalues: Vec<f64>,
    pub verdict: String,
    pub insensitivity_residual: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct QuantumnessSection {
    pub upper_bound: f64,
    pub marginal_residual: f64,
    pub restarts_used: usize,
    pub terms: usize,
    pub seed: u64,
    pub witness_source: String,
}

/// Machine-readable command output.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Report {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub input_sha256: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dims: Option<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub measures: Option<MeasureValues>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub optimal_measurement: Option<BlochAngles>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bmap: Option<BmapSection>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub quantumness: Option<QuantumnessSection>,
    #[serde(default)]
    pub warnings: Vec<String>,
}

impl Report {
    fn empty() -> Self {
        Self {
            input_sha256: None,
            dims: None,
            measures: None,
            optimal_measurement: None,
            bmap: None,
            quantumness: None,
            warnings: Vec::new(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("finite report fields serialize")
    }

    pub fn from_json(text: &str) -> Result<Self, CliError> {
        serde_json::from_str(text).map_err(|e| CliError::Parse(e.to_string()))
    }

    /// Human-readable table with 12 significant digits.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        if let Some(dims) = &self.dims {
            let _ = writeln!(out, "dims                    {dims:?}");
        }
        if let Some(digest) = &self.input_sha256 {
            let _ = writeln!(out, "input sha256            {digest}");
        }
        if let Some(m) = &self.measures {
            for (label, v) in [
                ("mutual information", m.mutual_information),
                ("quantum discord", m.discord),
                ("classical correlation", m.classical_correlation),
                ("one-way deficit", m.oneway_deficit),
                ("quantum deficit", m.quantum_deficit),
            ] {
                let _ = writeln!(out, "{label:<24}{} bits", sig12(v));
            }
        }
        if let Some(a) = &self.optimal_measurement {
            let _ = writeln!(out, "optimal theta           {}", sig12(a.theta));
            let _ = writeln!(out, "optimal phi             {}", sig12(a.phi));
        }
        if let Some(b) = &self.bmap {
            let _ = writeln!(out, "p                       {}", sig12(b.p));
            let _ = writeln!(out, "B matrix (rows/cols 00, 01, 10, 11):");
            for row in &b.matrix {
                let cells: Vec<String> = row.iter().map(|z| format!("{:>20}", complex12(z))).collect();
                let _ = writeln!(out, "  {}", cells.join(""));
            }
            let eig: Vec<String> = b.eigenvalues.iter().map(|&v| sig12(v)).collect();
            let _ = writeln!(out, "eigenvalues             {}", eig.join(", "));
            let _ = writeln!(out, "verdict                 {}", b.verdict);
            let _ = writeln!(out, "insensitivity residual  {}", sig12(b.insensitivity_residual));
        }
        if let Some(q) = &self.quantumness {
            let _ = writeln!(out, "quantumness upper bound {} bits", sig12(q.upper_bound));
            let _ = writeln!(out, "marginal residual       {}", sig12(q.marginal_residual));
            let _ = writeln!(out, "restarts                {}", q.restarts_used);
            let _ = writeln!(out, "terms                   {}", q.terms);
            let _ = writeln!(out, "seed                    {}", q.seed);
            let _ = writeln!(out, "witness source          {}", q.witness_source);
        }
        for w in &self.warnings {
            let _ = writeln!(out, "warning: {w}");
        }
        out
    }
}

/// `v` with 12 significant digits.
pub fn sig12(v: f64) -> String {
    if v == 0.0 || !v.is_finite() {
        return format!("{}", if v == 0.0 { 0.0 } else { v });
    }
    let exponent = v.abs().log10().floor() as i32;
    if (-5..12).contains(&exponent) {
        let decimals = (11 - exponent).max(0) as usize;
        format!("{v:.decimals$}")
    } else {
        format!("{v:.11e}")
    }
}

fn complex12(z: &[f64; 2]) -> String {
    if z[1] == 0.0 {
        sig12(z[0])
    } else {
        format!("{}{:+}i", sig12(z[0]), sig12(z[1]))
    }
}

fn two_qubits(file: &StateFile) -> Result<(), CliError> {
    if file.dims != [2, 2] {
        return Err(CliError::UnsupportedDims(file.dims.clone()));
    }
    Ok(())
}

/// All correlation measures of a two-qubit state file.
pub fn cmd_measures(path: &Path, cfg: &OptimizerConfig) -> Result<Report, CliError> {
    cfg.validate()?;
    let loaded = load_state(path)?;
    let rho = loaded.file.density()?;
    two_qubits(&loaded.file)?;
    let r = measure_report(&rho, cfg)?;
    Ok(Report {
        input_sha256: Some(loaded.sha256),
        dims: Some(rho.dims().to_vec()),
        measures: Some(MeasureValues {
            mutual_information: r.mutual_information,
            discord: r.discord,
            classical_correlation: r.classical_correlation,
            oneway_deficit: r.oneway_deficit,
            quantum_deficit: r.quantum_deficit,
        }),
        optimal_measurement: Some(BlochAngles {
            theta: r.theta,
            phi: r.phi,
        }),
        warnings: r.warnings.iter().map(ToString::to_string).collect(),
        ..Report::empty()
    })
}

/// B map of the worked extension example and its action on
/// `p|0⟩⟨0| + (1−p)|+⟩⟨+|`.
pub fn cmd_bmap_demo(p: f64) -> Result<Report, CliError> {
    if !(0.0..=1.0).contains(&p) {
        return Err(CliError::ArgumentRange(format!("p = {p} is outside [0, 1]")));
    }
    let maps = build_measurement_maps(&AssignmentMap::example(), &extension_projectors())?;
    let class = classify(&maps.b)?;
    let eigenvalues = hermitian_eig(maps.b.tensor(), f64::INFINITY)?.eigenvalues;
    let rho = example_system_state(p);
    let residual = apply_amap(&maps.a, &rho)?.distance(&rho);
    Ok(Report {
        bmap: Some(BmapSection {
            p,
            matrix: rows(maps.b.tensor()),
            eigenvalues,
            verdict: class.verdict.to_string(),
            insensitivity_residual: residual,
        }),
        ..Report::empty()
    })
}

/// Settings of the quantumness search.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct QuantumnessArgs {
    pub terms: usize,
    pub restarts: usize,
    pub seed: u64,
}

pub fn cmd_quantumness(path: &Path, args: &QuantumnessArgs) -> Result<Report, CliError> {
    let loaded = load_state(path)?;
    let rho = loaded.file.density()?;
    two_qubits(&loaded.file)?;
    let est = quantumness_upper_bound(&rho, args.terms, args.restarts, args.seed)?;
    Ok(Report {
        input_sha256: Some(loaded.sha256),
        dims: Some(rho.dims().to_vec()),
        quantumness: Some(QuantumnessSection {
            upper_bound: est.upper_bound,
            marginal_residual: est.marginal_residual,
            restarts_used: est.restarts_used,
            terms: args.terms,
            seed: args.seed,
            witness_source: format!("{:?}", est.source),
        }),
        ..Report::empty()
    })
}

/// Summary printed by `validate`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ValidationSummary {
    pub dims: Vec<usize>,
    pub trace: f64,
    pub min_eigenvalue: f64,
}

impl ValidationSummary {
    pub fn to_text(&self) -> String {
        format!(
            "valid density matrix\ndims                    {:?}\ntrace                   {}\nmin eigenvalue          {}\n",
            self.dims,
            sig12(self.trace),
            sig12(self.min_eigenvalue)
        )
    }
}

pub fn cmd_validate(path: &Path) -> Result<ValidationSummary, CliError> {
    let loaded = load_state(path)?;
    let raw = loaded.file.matrix()?;
    let rho = loaded.file.density()?;
    let min_eigenvalue = hermitian_eig(&raw.hermitian_part(), f64::INFINITY)?.eigenvalues[0];
    Ok(ValidationSummary {
        dims: rho.dims().to_vec(),
        trace: raw.trace().re,
        min_eigenvalue,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::states::bell_state;

    #[test]
    fn parse_reports_position() {
        let err = StateFile::parse("{\"dims\": [2, 2],\n \"matrix\": [[[1, 0]]]\n").unwrap_err();
        let msg = err.to_string();
        assert!(msg.starts_with("line 3, column"), "{msg}");
        assert_eq!(err.exit_code(), 2);
    }

    #[test]
    fn shape_errors_are_parse_errors() {
        let ragged = StateFile {
            dims: vec![2],
            matrix: vec![vec![[1.0, 0.0], [0.0, 0.0]], vec![[0.0, 0.0]]],
        };
        assert_eq!(ragged.matrix().unwrap_err().exit_code(), 2);
        let wrong_dims = StateFile {
            dims: vec![2, 2],
            matrix: vec![vec![[1.0, 0.0], [0.0, 0.0]], vec![[0.0, 0.0], [0.0, 0.0]]],
        };
        assert_eq!(wrong_dims.density().unwrap_err().exit_code(), 2);
    }

    #[test]
    fn validation_errors() {
        let negative = StateFile {
            dims: vec![2],
            matrix: vec![vec![[1.2, 0.0], [0.0, 0.0]], vec![[0.0, 0.0], [-0.2, 0.0]]],
        };
        let err = negative.density().unwrap_err();
        assert_eq!(err.exit_code(), 3);
        assert!(err.to_string().contains("negative eigenvalue -2.0"), "{err}");
    }

    #[test]
    fn state_file_round_trip() {
        let file = StateFile::from_density(&bell_state());
        let back = StateFile::parse(&file.to_json()).unwrap();
        assert_eq!(back, file);
        assert!(back.density().unwrap().distance(&bell_state()) == 0.0);
    }

    #[test]
    fn significant_digits() {
        assert_eq!(sig12(0.0), "0");
        assert_eq!(sig12(1.0), "1.00000000000");
        assert_eq!(sig12(-0.5), "-0.500000000000");
        assert_eq!(sig12(123.456), "123.456000000");
        assert_eq!(sig12(1e-9), "1.00000000000e-9");
    }

    #[test]
    fn bmap_demo_report() {
        let r = cmd_bmap_demo(1.0).unwrap();
        let b = r.bmap.as_ref().unwrap();
        assert_eq!(b.verdict, "NCP");
        assert!(b.insensitivity_residual < 1e-13);
        assert_eq!(b.matrix[0][3], [0.5, 0.0]);
        assert_eq!(cmd_bmap_demo(1.5).unwrap_err().exit_code(), 5);
        let text = r.to_text();
        assert!(text.contains("verdict                 NCP"));
        assert_eq!(Report::from_json(&r.to_json()).unwrap(), r);
    }
}
