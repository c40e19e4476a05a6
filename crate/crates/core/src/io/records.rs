use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::cost::CostBreakdown;
use crate::error::{Error, Result};
use crate::matrix::RawMatrix;
use crate::optimize::{OptimizerConfig, RunTrace};

pub const SWEEP_HEADER: &str =
    "beta,seed,final_cost_bits,map_row,map_col,n_nonempty_row_clusters,n_nonempty_col_clusters,wall_ms";

/// SHA-256 over the shape and the stored cells (indices and IEEE bit
/// patterns), hex encoded.
pub fn content_hash(raw: &RawMatrix) -> String {
    let mut h = Sha256::new();
    h.update((raw.n_rows() as u64).to_le_bytes());
    h.update((raw.n_cols() as u64).to_le_bytes());
    for (r, c, v) in raw.iter() {
        h.update((r as u64).to_le_bytes());
        h.update((c as u64).to_le_bytes());
        h.update(v.to_bits().to_le_bytes());
    }
    h.finalize().iter().map(|b| format!("{b:02x}")).collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TraceSummary {
    pub seed: u64,
    pub alphas: Vec<f64>,
    pub n_sweeps: usize,
    pub moves_applied: usize,
    pub final_cost: f64,
    pub wall_ms: f64,
}

impl From<&RunTrace> for TraceSummary {
    fn from(t: &RunTrace) -> Self {
        TraceSummary {
            seed: t.seed,
            alphas: t.stages.iter().map(|s| s.alpha).collect(),
            n_sweeps: t.n_sweeps(),
            moves_applied: t.moves_applied,
            final_cost: t.final_cost,
            wall_ms: t.wall_time.as_secs_f64() * 1e3,
        }
    }
}

/// Everything needed to reproduce and audit one optimizer run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunRecord {
    pub config: OptimizerConfig,
    pub dataset: String,
    pub content_hash: String,
    pub cost: CostBreakdown,
    pub phi: Vec<usize>,
    pub psi: Vec<usize>,
    pub map_row: Option<f64>,
    pub map_col: Option<f64>,
    pub trace: TraceSummary,
    pub started_unix_ms: u128,
    pub finished_unix_ms: u128,
}

pub fn write_run(path: &Path, record: &RunRecord) -> Result<()> {
    let text = serde_json::to_string_pretty(record).map_err(|e| Error::Serialization(e.to_string()))?;
    fs::write(path, text + "\n").map_err(|e| Error::io(path, e))
}

pub fn read_run(path: &Path) -> Result<RunRecord> {
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    serde_json::from_str(&text).map_err(|e| Error::Serialization(e.to_string()))
}

/// One `(β, seed)` row of a sweep table. Missing metrics are written as
/// empty fields.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub beta: f64,
    pub seed: u64,
    pub final_cost_bits: f64,
    pub map_row: Option<f64>,
    pub map_col: Option<f64>,
    pub n_nonempty_row_clusters: usize,
    pub n_nonempty_col_clusters: usize,
    pub wall_ms: f64,
}

pub fn write_sweep(path: &Path, rows: &[SweepRow]) -> Result<()> {
    let ser = |e: csv::Error| Error::Serialization(e.to_string());
    let mut w = csv::WriterBuilder::new().has_headers(false).from_path(path).map_err(ser)?;
    w.write_record(SWEEP_HEADER.split(',')).map_err(ser)?;
    for row in rows {
        w.serialize(row).map_err(ser)?;
    }
    w.flush().map_err(|e| Error::io(path, e))
}

pub fn read_sweep(path: &Path) -> Result<Vec<SweepRow>> {
    let ser = |e: csv::Error| Error::Serialization(e.to_string());
    let mut r = csv::Reader::from_path(path).map_err(ser)?;
    r.deserialize().collect::<std::result::Result<Vec<SweepRow>, _>>().map_err(ser)
}
