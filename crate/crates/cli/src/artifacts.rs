//! On-disk formats. Every CSV starts with a `#` line holding the JSON
//! configuration it was produced with.

use std::io::{BufRead, Write};
use std::path::{Path, PathBuf};

use linewalker::driver::Incumbent;
use linewalker::{Algorithm, Fit, Grid, Reason, RunConfig, RunTrace};
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::error::{CliError, Result};

/// What was optimized.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Target {
    Function { name: String },
    Oracle { command: String, from: Vec<f64>, to: Vec<f64> },
}

impl Target {
    pub fn label(&self) -> &str {
        match self {
            Target::Function { name } => name,
            Target::Oracle { .. } => "oracle",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvalRecord {
    pub index: usize,
    pub t: f64,
    pub x: Vec<f64>,
    pub f: f64,
    pub iteration: usize,
    pub reason: Reason,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub candidate: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TraceFile {
    pub target: Target,
    pub algorithm: Algorithm,
    pub config: RunConfig,
    pub iterations: usize,
    pub evaluations: Vec<EvalRecord>,
    pub incumbents: Vec<Incumbent>,
    pub best: Option<EvalRecord>,
    pub solved: Option<bool>,
    pub solved_by_value: Option<bool>,
    pub tase: Option<f64>,
}

impl TraceFile {
    pub fn new(target: Target, grid: &Grid, trace: &RunTrace) -> Self {
        let evaluations: Vec<EvalRecord> = trace
            .evaluations
            .iter()
            .map(|e| EvalRecord {
                index: e.index,
                t: grid.param(e.index),
                x: grid.point(e.index),
                f: e.value,
                iteration: e.iteration,
                reason: e.reason,
                candidate: e.candidate,
            })
            .collect();
        let best = trace
            .best()
            .and_then(|b| evaluations.iter().find(|e| e.index == b.index).cloned());
        Self {
            target,
            algorithm: trace.algorithm,
            config: trace.config.clone(),
            iterations: trace.iterations,
            evaluations,
            incumbents: trace.incumbents.clone(),
            best,
            solved: None,
            solved_by_value: None,
            tase: None,
        }
    }
}

/// Header echoed at the top of fit CSVs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FitHeader {
    pub target: Target,
    pub algorithm: Algorithm,
    pub config: RunConfig,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FitRow {
    pub index: usize,
    pub t: f64,
    pub f_hat: f64,
    pub f_true: Option<f64>,
    pub sampled: bool,
}

/// One row per grid point. `truth` fills `f_true` everywhere when known;
/// otherwise only sampled points carry a true value.
pub fn fit_rows(grid: &Grid, fit: &Fit, trace: &RunTrace, truth: Option<&[f64]>) -> Vec<FitRow> {
    let mut sampled = vec![None; grid.len()];
    for e in &trace.evaluations {
        sampled[e.index - 1] = Some(e.value);
    }
    (1..=grid.len())
        .map(|i| FitRow {
            index: i,
            t: grid.param(i),
            f_hat: fit.at(i),
            f_true: truth.map(|v| v[i - 1]).or(sampled[i - 1]),
            sampled: sampled[i - 1].is_some(),
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SnapshotRow {
    pub iteration: usize,
    pub index: usize,
    pub t: f64,
    pub f_hat: f64,
}

pub fn snapshot_rows(grid: &Grid, snapshots: &[Fit]) -> Vec<SnapshotRow> {
    snapshots
        .iter()
        .flat_map(|fit| {
            (1..=grid.len()).map(move |i| SnapshotRow {
                iteration: fit.iteration(),
                index: i,
                t: grid.param(i),
                f_hat: fit.at(i),
            })
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SuiteHeader {
    pub functions: Vec<String>,
    pub budgets: Vec<usize>,
    pub algorithms: Vec<Algorithm>,
    /// Configuration at the smallest budget; only the budget and grid size vary.
    pub config: RunConfig,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SuiteRow {
    pub function: String,
    pub algorithm: Algorithm,
    pub budget: usize,
    pub n_points: usize,
    pub evals_used: usize,
    pub solved: Option<bool>,
    pub solved_by_value: Option<bool>,
    pub best_f: Option<f64>,
    pub f_star: f64,
    pub tase: Option<f64>,
    pub error: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FractionRow {
    pub algorithm: String,
    pub budget: usize,
    pub solved: usize,
    pub total: usize,
    pub fraction: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TaseRow {
    pub algorithm: String,
    pub budget: usize,
    pub count: usize,
    pub mean_tase: Option<f64>,
}

/// A file to be written, relative to the output directory.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Artifact {
    pub path: PathBuf,
    pub bytes: Vec<u8>,
}

pub fn json_artifact<T: Serialize>(path: impl Into<PathBuf>, value: &T) -> Result<Artifact> {
    let mut bytes = serde_json::to_vec_pretty(value)?;
    bytes.push(b'\n');
    Ok(Artifact {
        path: path.into(),
        bytes,
    })
}

pub fn csv_artifact<H: Serialize, R: Serialize>(
    path: impl Into<PathBuf>,
    header: &H,
    rows: &[R],
) -> Result<Artifact> {
    let mut bytes = b"# ".to_vec();
    serde_json::to_writer(&mut bytes, header)?;
    bytes.push(b'\n');
    {
        let mut w = csv::Writer::from_writer(&mut bytes);
        for r in rows {
            w.serialize(r)?;
        }
        w.flush().map_err(|e| CliError::io("<memory>", e))?;
    }
    Ok(Artifact {
        path: path.into(),
        bytes,
    })
}

pub fn write_all(dir: &Path, artifacts: &[Artifact]) -> Result<()> {
    for a in artifacts {
        let path = dir.join(&a.path);
        if let Some(parent) = path.parent() {
            std::fs::create_dir_all(parent).map_err(|e| CliError::io(parent, e))?;
        }
        let mut file = std::fs::File::create(&path).map_err(|e| CliError::io(&path, e))?;
        file.write_all(&a.bytes).map_err(|e| CliError::io(&path, e))?;
    }
    Ok(())
}

pub fn load_json<T: DeserializeOwned>(path: &Path) -> Result<T> {
    let bytes = std::fs::read(path).map_err(|e| CliError::io(path, e))?;
    Ok(serde_json::from_slice(&bytes)?)
}

/// Parse a CSV written by [`csv_artifact`] into its header and rows.
pub fn parse_csv<H: DeserializeOwned, R: DeserializeOwned>(bytes: &[u8]) -> Result<(H, Vec<R>)> {
    let mut reader = std::io::BufReader::new(bytes);
    let mut first = String::new();
    reader
        .read_line(&mut first)
        .map_err(|e| CliError::io("<csv>", e))?;
    let json = first
        .strip_prefix("# ")
        .ok_or_else(|| CliError::Malformed("missing `# ` configuration line".into()))?;
    let header = serde_json::from_str(json.trim_end())?;
    let rows = csv::Reader::from_reader(reader)
        .deserialize()
        .collect::<std::result::Result<Vec<R>, _>>()?;
    Ok((header, rows))
}

pub fn load_csv<H: DeserializeOwned, R: DeserializeOwned>(path: &Path) -> Result<(H, Vec<R>)> {
    let bytes = std::fs::read(path).map_err(|e| CliError::io(path, e))?;
    parse_csv(&bytes)
}
