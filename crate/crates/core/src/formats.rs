//! Text formats read and written by the command line tool.
//!
//! All indices in files are one-based; rationals are written as reduced
//! `num`/`den` pairs with `den > 0`. Writers produce a canonical layout
//! (sorted entries, two-space indentation, trailing newline), so reading a
//! file and writing it back is the identity on canonical files.
//!
//! ```
//! use nilflat::formats::{algebra_to_json, parse_algebra};
//!
//! let text = r#"{"dim": 3, "class": 2,
//!   "brackets": [{"i": 1, "j": 2, "terms": [{"k": 3, "num": 1, "den": 1}]}]}"#;
//! let h3 = parse_algebra(text).unwrap().into_algebra().unwrap();
//! assert_eq!(h3.class(), 2);
//! let canonical = algebra_to_json(&h3).unwrap();
//! assert_eq!(parse_algebra(&canonical).unwrap().into_algebra().unwrap(), h3);
//! ```

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::geometry::{DecayReport, GeometryError, LeftInvariantMetric};
use crate::malcev::{AlgebraError, NilAlgebra, Rational, StructureConstants};
use crate::tower::{BundleTower, CentralCocycle, NilLattice, TowerError};

#[derive(Debug, Error)]
pub enum FormatError {
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse { line: usize, column: usize, message: String },
    #[error("invalid file contents: {0}")]
    Schema(String),
    #[error("value does not fit in a 64-bit integer: {0}")]
    Overflow(BigInt),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error(transparent)]
    Tower(#[from] TowerError),
    #[error(transparent)]
    Geometry(#[from] GeometryError),
}

impl From<serde_json::Error> for FormatError {
    fn from(e: serde_json::Error) -> Self {
        let message = e.to_string();
        // serde_json appends " at line L column C"; keep the bare message
        let message = message.split(" at line ").next().unwrap_or(&message).to_string();
        FormatError::Parse { line: e.line(), column: e.column(), message }
    }
}

impl FormatError {
    /// True for failures of the mathematics rather than of the file.
    pub fn is_mathematical(&self) -> bool {
        matches!(self, FormatError::Algebra(_) | FormatError::Tower(_) | FormatError::Geometry(_))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TermEntry {
    pub k: usize,
    pub num: i64,
    pub den: i64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BracketEntry {
    pub i: usize,
    pub j: usize,
    pub terms: Vec<TermEntry>,
}

/// `{"dim": n, "class": c, "brackets": [...]}`; omitted pairs bracket to
/// zero. `class` may be omitted, in which case it is inferred.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AlgebraFile {
    pub dim: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub class: Option<usize>,
    #[serde(default)]
    pub brackets: Vec<BracketEntry>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CocycleEntry {
    pub i: usize,
    pub j: usize,
    pub num: i64,
    pub den: i64,
}

/// One tower step, also used on its own as a cocycle file:
/// `{"base_dim": k, "cocycle": [{"i", "j", "num", "den"}]}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StepFile {
    pub base_dim: usize,
    pub cocycle: Vec<CocycleEntry>,
}

/// `{"dim": n, "entries": [g11, g12, ..., gnn]}`, row-major.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MetricFile {
    pub dim: usize,
    pub entries: Vec<f64>,
}

fn rational(num: i64, den: i64, at: &str) -> Result<Rational, FormatError> {
    if den == 0 {
        return Err(FormatError::Schema(format!("{at}: zero denominator")));
    }
    Ok(Rational::new(BigInt::from(num), BigInt::from(den)))
}

fn small(x: &BigInt) -> Result<i64, FormatError> {
    x.to_i64().ok_or_else(|| FormatError::Overflow(x.clone()))
}

fn num_den(c: &Rational) -> Result<(i64, i64), FormatError> {
    Ok((small(c.numer())?, small(c.denom())?))
}

fn index(x: usize, dim: usize, at: &str) -> Result<usize, FormatError> {
    if x == 0 || x > dim {
        return Err(FormatError::Schema(format!("{at}: index {x} outside 1..={dim}")));
    }
    Ok(x - 1)
}

fn pretty<T: Serialize>(value: &T) -> Result<String, FormatError> {
    let mut s = serde_json::to_string_pretty(value)?;
    s.push('\n');
    Ok(s)
}

impl AlgebraFile {
    /// Structure constants as written, before any Lie-theoretic check.
    pub fn structure(&self) -> Result<StructureConstants, FormatError> {
        let n = self.dim;
        let mut seen = BTreeSet::new();
        let mut entries = Vec::new();
        for (b, br) in self.brackets.iter().enumerate() {
            let at = format!("brackets[{b}]");
            let (i, j) = (index(br.i, n, &at)?, index(br.j, n, &at)?);
            if i >= j {
                return Err(FormatError::Schema(format!("{at}: need i < j, got i = {}, j = {}", br.i, br.j)));
            }
            if !seen.insert((i, j)) {
                return Err(FormatError::Schema(format!("{at}: pair ({}, {}) listed twice", br.i, br.j)));
            }
            let mut ks = BTreeSet::new();
            for (t, term) in br.terms.iter().enumerate() {
                let at = format!("{at}.terms[{t}]");
                let k = index(term.k, n, &at)?;
                if !ks.insert(k) {
                    return Err(FormatError::Schema(format!("{at}: k = {} listed twice", term.k)));
                }
                entries.push((i, j, k, rational(term.num, term.den, &at)?));
            }
        }
        Ok(StructureConstants::new(n, entries)?)
    }

    /// Full validation: Jacobi, nilpotency, adaptedness and class.
    pub fn into_algebra(self) -> Result<NilAlgebra, FormatError> {
        let s = self.structure()?;
        Ok(match self.class {
            Some(c) => NilAlgebra::new(s, c)?,
            None => NilAlgebra::with_inferred_class(s)?,
        })
    }

    pub fn from_algebra(alg: &NilAlgebra) -> Result<Self, FormatError> {
        let n = alg.dim();
        let mut brackets = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                let b = alg.basis_bracket(i, j);
                let terms = (0..n)
                    .filter(|&k| !b[k].is_zero())
                    .map(|k| {
                        let (num, den) = num_den(&b[k])?;
                        Ok(TermEntry { k: k + 1, num, den })
                    })
                    .collect::<Result<Vec<_>, FormatError>>()?;
                if !terms.is_empty() {
                    brackets.push(BracketEntry { i: i + 1, j: j + 1, terms });
                }
            }
        }
        Ok(AlgebraFile { dim: n, class: Some(alg.class()), brackets })
    }
}

pub fn parse_algebra(text: &str) -> Result<AlgebraFile, FormatError> {
    Ok(serde_json::from_str(text)?)
}

pub fn algebra_to_json(alg: &NilAlgebra) -> Result<String, FormatError> {
    pretty(&AlgebraFile::from_algebra(alg)?)
}

/// Parses and validates a lattice file: an algebra whose integer
/// second-kind points are closed under multiplication.
pub fn parse_lattice(text: &str) -> Result<NilLattice, FormatError> {
    Ok(NilLattice::new(parse_algebra(text)?.into_algebra()?)?)
}

impl StepFile {
    pub fn from_cocycle(w: &CentralCocycle) -> Result<Self, FormatError> {
        let cocycle = w
            .entries()
            .map(|(i, j, c)| {
                let (num, den) = num_den(c)?;
                Ok(CocycleEntry { i: i + 1, j: j + 1, num, den })
            })
            .collect::<Result<Vec<_>, FormatError>>()?;
        Ok(StepFile { base_dim: w.dim(), cocycle })
    }

    /// The skew form; skewness holds by construction, closedness is left to
    /// the caller.
    pub fn cocycle(&self) -> Result<CentralCocycle, FormatError> {
        let n = self.base_dim;
        let mut seen = BTreeSet::new();
        let mut entries = Vec::new();
        for (e, c) in self.cocycle.iter().enumerate() {
            let at = format!("cocycle[{e}]");
            let (i, j) = (index(c.i, n, &at)?, index(c.j, n, &at)?);
            if i == j {
                return Err(FormatError::Schema(format!("{at}: diagonal entry ({}, {})", c.i, c.j)));
            }
            let (i, j, sign) = if i < j { (i, j, 1) } else { (j, i, -1) };
            if !seen.insert((i, j)) {
                return Err(FormatError::Schema(format!("{at}: pair ({}, {}) listed twice", i + 1, j + 1)));
            }
            entries.push((i, j, rational(sign * c.num, c.den, &at)?));
        }
        Ok(CentralCocycle::from_entries(n, entries))
    }
}

pub fn parse_cocycle(text: &str) -> Result<CentralCocycle, FormatError> {
    serde_json::from_str::<StepFile>(text)?.cocycle()
}

pub fn cocycle_to_json(w: &CentralCocycle) -> Result<String, FormatError> {
    pretty(&StepFile::from_cocycle(w)?)
}

pub fn tower_to_json(tower: &BundleTower) -> Result<String, FormatError> {
    let steps = tower.steps.iter().map(|s| StepFile::from_cocycle(&s.cocycle)).collect::<Result<Vec<_>, _>>()?;
    pretty(&steps)
}

/// Reads a top-down list of steps and rebuilds the tower from the point.
pub fn parse_tower(text: &str) -> Result<BundleTower, FormatError> {
    let steps: Vec<StepFile> = serde_json::from_str(text)?;
    let n = steps.len();
    for (s, step) in steps.iter().enumerate() {
        if step.base_dim != n - 1 - s {
            return Err(FormatError::Schema(format!(
                "steps[{s}]: base_dim {} but {} steps remain below",
                step.base_dim,
                n - 1 - s
            )));
        }
    }
    let mut lattice = NilLattice::point();
    for step in steps.iter().rev() {
        lattice = lattice.extend_by_cocycle(&step.cocycle()?)?;
    }
    Ok(lattice.peel_tower())
}

impl MetricFile {
    pub fn into_metric(self) -> Result<LeftInvariantMetric, FormatError> {
        if self.entries.len() != self.dim * self.dim {
            return Err(FormatError::Schema(format!(
                "metric of dimension {} needs {} entries, got {}",
                self.dim,
                self.dim * self.dim,
                self.entries.len()
            )));
        }
        Ok(LeftInvariantMetric::from_row_major(self.dim, &self.entries)?)
    }
}

pub fn parse_metric(text: &str) -> Result<LeftInvariantMetric, FormatError> {
    serde_json::from_str::<MetricFile>(text)?.into_metric()
}

pub fn metric_to_json(g: &LeftInvariantMetric) -> Result<String, FormatError> {
    let n = g.dim();
    let entries = (0..n).flat_map(|i| (0..n).map(move |j| (i, j))).map(|(i, j)| g.matrix()[(i, j)]).collect();
    pretty(&MetricFile { dim: n, entries })
}

pub const DECAY_CSV_HEADER: &str = "t,sup_abs_K,base_sup_K,bound,diam_bound";

/// One row of the decay CSV.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DecayRow {
    pub t: f64,
    #[serde(rename = "sup_abs_K")]
    pub sup_abs_k: f64,
    #[serde(rename = "base_sup_K")]
    pub base_sup_k: f64,
    pub bound: f64,
    pub diam_bound: f64,
}

pub fn decay_rows(report: &DecayReport) -> Vec<DecayRow> {
    (0..report.t_grid.len())
        .map(|i| DecayRow {
            t: report.t_grid[i],
            sup_abs_k: report.sup_abs_k[i],
            base_sup_k: report.base_sup_k,
            bound: report.bound[i],
            diam_bound: report.diam_bound[i],
        })
        .collect()
}

fn csv_error(e: csv::Error) -> FormatError {
    let (line, message) = match e.position() {
        Some(p) => (p.line() as usize, e.to_string()),
        None => (0, e.to_string()),
    };
    FormatError::Parse { line, column: 1, message }
}

/// One row per grid point.
pub fn decay_csv(report: &DecayReport) -> Result<String, FormatError> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for row in decay_rows(report) {
        w.serialize(row).map_err(csv_error)?;
    }
    let bytes = w.into_inner().map_err(|e| FormatError::Schema(e.to_string()))?;
    Ok(String::from_utf8(bytes).expect("csv output is ASCII"))
}

pub fn parse_decay_csv(text: &str) -> Result<Vec<DecayRow>, FormatError> {
    let mut r = csv::Reader::from_reader(text.as_bytes());
    let header = r.headers().map_err(csv_error)?.iter().collect::<Vec<_>>().join(",");
    if header != DECAY_CSV_HEADER {
        return Err(FormatError::Parse { line: 1, column: 1, message: format!("expected header {DECAY_CSV_HEADER}") });
    }
    r.deserialize().map(|row| row.map_err(csv_error)).collect()
}

/// JSON summary of a scan. `config` records how the run was invoked.
pub fn decay_summary(report: &DecayReport, version: &str, config: serde_json::Value) -> serde_json::Value {
    serde_json::json!({
        "version": version,
        "config": config,
        "C": report.constant.c,
        "constant": report.constant,
        "exponent_fit": report.exponent_fit,
        "base_sup_K": report.base_sup_k,
        "deviation": report.deviation,
        "deviation_exponent_fit": report.deviation_exponent_fit,
        "seed": report.seed,
        "sample_count": report.sample_count,
        "notes": "C and the diameter term 0.5*l*sqrt(t) are explicit constructions of this tool; C uses sampled sups with a 2x safety factor",
    })
}

pub fn to_pretty_json(value: &serde_json::Value) -> Result<String, FormatError> {
    pretty(value)
}
