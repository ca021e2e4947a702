//! One run of one algorithm on one problem, as emitted on stdout.

use std::io::Write;

use psa_core::fixedpoint::Status;
use psa_core::numkernel::C64;
use serde::{Deserialize, Serialize};

use crate::error::CliError;
use crate::runner::Algorithm;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Complex {
    pub re: f64,
    pub im: f64,
}

impl From<C64> for Complex {
    fn from(z: C64) -> Self {
        Self { re: z.re, im: z.im }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RunStatus {
    Converged,
    MaxIter,
    Stagnated,
    Failed,
}

impl From<Status> for RunStatus {
    fn from(s: Status) -> Self {
        match s {
            Status::Converged => RunStatus::Converged,
            Status::MaxIter => RunStatus::MaxIter,
            Status::Stagnated => RunStatus::Stagnated,
            Status::Failed => RunStatus::Failed,
        }
    }
}

impl RunStatus {
    pub fn as_str(self) -> &'static str {
        match self {
            RunStatus::Converged => "converged",
            RunStatus::MaxIter => "max_iter",
            RunStatus::Stagnated => "stagnated",
            RunStatus::Failed => "failed",
        }
    }
}

/// How the starting point of an iteration was chosen.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Strategy {
    Hybrid,
    First,
    Second,
    /// Ranked starting points, one run each.
    Restarts,
    /// Not an iteration.
    None,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunRecord {
    pub problem: String,
    pub eps: f64,
    pub algorithm: Algorithm,
    pub strategy: Strategy,
    #[serde(rename = "N")]
    pub restarts: usize,
    /// `None` when the run produced no finite point.
    pub alpha: Option<f64>,
    pub z: Option<Complex>,
    pub iterations: usize,
    pub wall_time_ms: f64,
    pub status: RunStatus,
    pub oracle_alpha: Option<f64>,
    pub error_vs_oracle: Option<f64>,
}

pub const CSV_HEADER: [&str; 13] = [
    "problem",
    "eps",
    "algorithm",
    "strategy",
    "N",
    "alpha",
    "z_re",
    "z_im",
    "iterations",
    "wall_time_ms",
    "status",
    "oracle_alpha",
    "error_vs_oracle",
];

fn opt(v: Option<f64>) -> String {
    v.map(|x| format!("{x:?}")).unwrap_or_default()
}

impl RunRecord {
    pub fn to_json(&self) -> Result<String, CliError> {
        Ok(serde_json::to_string(self)?)
    }

    pub fn from_json(text: &str) -> Result<Self, CliError> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn converged(&self) -> bool {
        self.status == RunStatus::Converged
    }

    pub fn csv_row(&self) -> Vec<String> {
        vec![
            self.problem.clone(),
            format!("{:?}", self.eps),
            self.algorithm.as_str().to_string(),
            serde_json::to_value(self.strategy).ok().and_then(|v| v.as_str().map(String::from)).unwrap_or_default(),
            self.restarts.to_string(),
            opt(self.alpha),
            opt(self.z.map(|z| z.re)),
            opt(self.z.map(|z| z.im)),
            self.iterations.to_string(),
            format!("{:.3}", self.wall_time_ms),
            self.status.as_str().to_string(),
            opt(self.oracle_alpha),
            opt(self.error_vs_oracle),
        ]
    }
}

/// Writes records as CSV with a header row.
pub fn write_csv<W: Write>(out: W, records: &[RunRecord]) -> Result<(), CliError> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(CSV_HEADER)?;
    for r in records {
        w.write_record(r.csv_row())?;
    }
    w.flush()?;
    Ok(())
}

/// Writes one JSON object per line.
pub fn write_json_lines<W: Write>(mut out: W, records: &[RunRecord]) -> Result<(), CliError> {
    for r in records {
        writeln!(out, "{}", r.to_json()?)?;
    }
    Ok(())
}
