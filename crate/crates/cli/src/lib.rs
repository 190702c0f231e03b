//! Pipelines behind the `nilflat` command line tool.
//!
//! Each `cmd_*` function reads its inputs, runs one pipeline and returns the
//! rendered outputs; writing files and choosing exit codes is left to the
//! binary. Exit codes: 0 success, 1 I/O or parse error, 2 invalid
//! mathematics, 3 curvature bound violated or budget not met.

// `!(x > 0.0)` style checks are meant to reject NaN as well
#![allow(clippy::neg_cmp_op_on_partial_ord)]

use std::fs;
use std::path::{Path, PathBuf};

use nilflat::formats::{self, FormatError};
use nilflat::geometry::{
    certify_almost_flat, geometric_grid, lemma_scan, CertifyOptions, CircleFibration, DecayReport, FlatnessCertificate,
    GeometryError, LeftInvariantMetric,
};
use nilflat::malcev::{JacobiReport, NilAlgebra};
use nilflat::tower::NilLattice;
use serde::Serialize;
use thiserror::Error;

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("{path}: {source}")]
    Input { path: PathBuf, source: FormatError },
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("{0}")]
    Invalid(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Io { .. } | CliError::Config(_) => 1,
            CliError::Invalid(_) => 2,
            CliError::Input { source, .. } => match source {
                FormatError::Geometry(GeometryError::BoundViolated { .. } | GeometryError::BudgetNotMet { .. }) => 3,
                e if e.is_mathematical() => 2,
                _ => 1,
            },
        }
    }
}

fn read(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|source| CliError::Io { path: path.to_path_buf(), source })
}

fn at<T, E: Into<FormatError>>(path: &Path, r: Result<T, E>) -> Result<T, CliError> {
    r.map_err(|e| CliError::Input { path: path.to_path_buf(), source: e.into() })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    Csv,
    Json,
}

/// Geometric grid `t_max, …, t_min` with `points` entries.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TGrid {
    pub t_max: f64,
    pub t_min: f64,
    pub points: usize,
}

impl Default for TGrid {
    fn default() -> Self {
        TGrid { t_max: 1.0, t_min: 1e-6, points: 7 }
    }
}

/// Everything a run depends on; embedded in every report.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunConfig {
    pub command: String,
    pub inputs: Vec<PathBuf>,
    pub metric: Option<PathBuf>,
    pub t_grid: TGrid,
    pub eps: Option<f64>,
    pub n_samples: usize,
    pub seed: u64,
    pub out: Option<PathBuf>,
    pub format: OutputFormat,
}

impl RunConfig {
    pub fn new(command: &str, inputs: Vec<PathBuf>) -> Self {
        RunConfig {
            command: command.to_string(),
            inputs,
            metric: None,
            t_grid: TGrid::default(),
            eps: None,
            n_samples: 10_000,
            seed: 0,
            out: None,
            format: OutputFormat::Csv,
        }
    }

    pub fn check(&self) -> Result<(), CliError> {
        let g = &self.t_grid;
        if !(g.t_min > 0.0 && g.t_max >= g.t_min && g.t_max.is_finite()) {
            return Err(CliError::Config(format!("need t_max >= t_min > 0, got t_max = {}, t_min = {}", g.t_max, g.t_min)));
        }
        if g.points == 0 {
            return Err(CliError::Config("t-points must be at least 1".into()));
        }
        if self.n_samples == 0 {
            return Err(CliError::Config("samples must be at least 1".into()));
        }
        match (self.command.as_str(), self.eps) {
            ("certify", None) => Err(CliError::Config("certify needs --eps".into())),
            (_, Some(e)) if !(e > 0.0) => Err(CliError::Config(format!("eps must be positive, got {e}"))),
            _ => Ok(()),
        }
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("config serializes")
    }
}

/// Summary of a file that passed every `validate` check.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ValidateReport {
    pub dim: usize,
    pub class: usize,
    pub lcs_dims: Vec<usize>,
}

impl std::fmt::Display for ValidateReport {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "ok: dimension {}, nilpotency class {}, lower central series dims {:?}, Jacobi holds, basis adapted, integer points form a lattice",
            self.dim, self.class, self.lcs_dims
        )
    }
}

pub fn load_algebra(path: &Path) -> Result<NilAlgebra, CliError> {
    let text = read(path)?;
    at(path, formats::parse_algebra(&text).and_then(|f| f.into_algebra()))
}

pub fn load_lattice(path: &Path) -> Result<NilLattice, CliError> {
    let alg = load_algebra(path)?;
    at(path, NilLattice::new(alg))
}

fn load_metric(path: Option<&Path>, dim: usize) -> Result<LeftInvariantMetric, CliError> {
    match path {
        None => Ok(LeftInvariantMetric::identity(dim)),
        Some(p) => {
            let g = at(p, formats::parse_metric(&read(p)?))?;
            if g.dim() != dim {
                return Err(CliError::Invalid(format!("{}: metric has dimension {}, algebra has {dim}", p.display(), g.dim())));
            }
            Ok(g)
        }
    }
}

/// Runs the Jacobi identity, the lower central series, the adaptedness
/// check and the lattice closure check, stopping at the first failure.
pub fn cmd_validate(path: &Path) -> Result<ValidateReport, CliError> {
    let text = read(path)?;
    let file = at(path, formats::parse_algebra(&text))?;
    let s = at(path, file.structure())?;
    if let JacobiReport::Violation { triple, defect } = s.check_jacobi() {
        return Err(CliError::Input {
            path: path.to_path_buf(),
            source: nilflat::malcev::AlgebraError::Jacobi { triple, defect }.into(),
        });
    }
    let lcs = at(path, s.lower_central_series())?;
    let alg = at(path, file.into_algebra())?;
    let lattice = at(path, NilLattice::new(alg))?;
    Ok(ValidateReport { dim: lattice.dim(), class: lattice.algebra().class(), lcs_dims: lcs.dims() })
}

/// The bundle tower of a lattice file, in the tower format.
pub fn cmd_peel(path: &Path) -> Result<String, CliError> {
    let lattice = load_lattice(path)?;
    at(path, formats::tower_to_json(&lattice.peel_tower()))
}

/// The central extension of a base lattice by a cocycle file, in the
/// algebra format.
pub fn cmd_extend(base_path: &Path, cocycle_path: &Path) -> Result<String, CliError> {
    let base = load_lattice(base_path)?;
    let w = at(cocycle_path, formats::parse_cocycle(&read(cocycle_path)?))?;
    if w.dim() != base.dim() {
        return Err(CliError::Invalid(format!(
            "{}: cocycle base_dim {} does not match base dimension {}",
            cocycle_path.display(),
            w.dim(),
            base.dim()
        )));
    }
    let total = at(cocycle_path, base.extend_by_cocycle(&w))?;
    at(base_path, formats::algebra_to_json(total.algebra()))
}

pub struct CurvatureOutput {
    pub report: DecayReport,
    pub csv: String,
    pub summary: String,
}

/// Scans `sup |K^t|` for the top circle fibration (fiber `e_n`) of the
/// algebra in `config.inputs[0]`.
pub fn cmd_curvature(config: &RunConfig) -> Result<CurvatureOutput, CliError> {
    config.check()?;
    let path = config.inputs.first().ok_or_else(|| CliError::Config("missing input file".into()))?;
    let alg = load_algebra(path)?;
    if alg.dim() == 0 {
        return Err(CliError::Invalid(format!("{}: the point has no circle fibration", path.display())));
    }
    let g = load_metric(config.metric.as_deref(), alg.dim())?;
    let fib = at(path, CircleFibration::top_of(&alg, g))?;
    let grid = geometric_grid(config.t_grid.t_max, config.t_grid.t_min, config.t_grid.points)
        .map_err(|e| CliError::Config(e.to_string()))?;
    let report = at(path, lemma_scan(&fib, &grid, config.n_samples, config.seed))?;
    let csv = at(path, formats::decay_csv(&report))?;
    let summary = formats::decay_summary(&report, VERSION, config.to_json());
    let summary = at(path, formats::to_pretty_json(&summary))?;
    Ok(CurvatureOutput { report, csv, summary })
}

pub struct CertifyOutput {
    pub certificate: FlatnessCertificate,
    pub json: String,
}

/// Collapsing schedule for the tower of the lattice in `config.inputs[0]`.
pub fn cmd_certify(config: &RunConfig) -> Result<CertifyOutput, CliError> {
    config.check()?;
    let path = config.inputs.first().ok_or_else(|| CliError::Config("missing input file".into()))?;
    let eps = config.eps.ok_or_else(|| CliError::Config("certify needs --eps".into()))?;
    let lattice = load_lattice(path)?;
    let g = load_metric(config.metric.as_deref(), lattice.dim())?;
    let opts = CertifyOptions { n_samples: config.n_samples, seed: config.seed, ..CertifyOptions::default() };
    let certificate = at(path, certify_almost_flat(&lattice.peel_tower(), &g, eps, &opts))?;
    let value = serde_json::json!({
        "version": VERSION,
        "config": config.to_json(),
        "certificate": certificate,
        "notes": "achieved_sup is a sampled supremum; diam_bound sums 0.5*l*sqrt(t) over the levels",
    });
    let json = at(path, formats::to_pretty_json(&value))?;
    Ok(CertifyOutput { certificate, json })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn input(e: impl Into<FormatError>) -> CliError {
        CliError::Input { path: PathBuf::from("x"), source: e.into() }
    }

    #[test]
    fn exit_code_contract() {
        let parse = FormatError::Parse { line: 1, column: 1, message: String::new() };
        assert_eq!(input(parse).exit_code(), 1);
        assert_eq!(input(FormatError::Schema(String::new())).exit_code(), 1);
        assert_eq!(input(nilflat::malcev::AlgebraError::NotNilpotent { stable_dim: 3 }).exit_code(), 2);
        assert_eq!(input(GeometryError::NotPositiveDefinite).exit_code(), 2);
        assert_eq!(input(GeometryError::BoundViolated { t: 1.0, sample: 0, k: 1.0, bound: 0.5 }).exit_code(), 3);
        assert_eq!(input(GeometryError::BudgetNotMet { eps: 1e-3, achieved: 1.0, rounds: 20 }).exit_code(), 3);
        assert_eq!(CliError::Config(String::new()).exit_code(), 1);
    }

    #[test]
    fn config_invariants() {
        let mut c = RunConfig::new("curvature", vec![]);
        assert!(c.check().is_ok());
        c.t_grid.t_min = 0.0;
        assert!(c.check().is_err());
        let mut c = RunConfig::new("certify", vec![]);
        assert!(c.check().is_err());
        c.eps = Some(1e-3);
        assert!(c.check().is_ok());
        c.n_samples = 0;
        assert!(c.check().is_err());
    }
}
