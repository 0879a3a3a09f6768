//! Trace CSV files: one row per iterate, floats with 17 significant digits.

use std::fs::File;
use std::io::{BufWriter, Read, Write};
use std::path::Path;

use anyhow::{Context, Result};
use flexkit::solvers::IterationTrace;
use serde::Deserialize;

pub const TRACE_HEADER: [&str; 13] = [
    "k",
    "f_evals",
    "prox_evals",
    "operator_evals",
    "V",
    "norm_R",
    "norm_F",
    "natural_residual",
    "tangent_residual",
    "objective_gap",
    "tau",
    "branch",
    "wall_ms",
];

/// 17 significant digits, enough to round-trip any `f64`.
pub fn fmt_float(x: f64) -> String {
    format!("{x:.16e}")
}

fn fmt_opt(x: Option<f64>) -> String {
    x.map(fmt_float).unwrap_or_default()
}

/// A parsed trace row; empty cells become `None`.
#[derive(Debug, Clone, PartialEq, Deserialize)]
pub struct TraceRow {
    pub k: usize,
    pub f_evals: u64,
    pub prox_evals: u64,
    pub operator_evals: u64,
    #[serde(rename = "V")]
    pub v: f64,
    #[serde(rename = "norm_R")]
    pub norm_r: f64,
    #[serde(rename = "norm_F")]
    pub norm_f: Option<f64>,
    pub natural_residual: f64,
    pub tangent_residual: Option<f64>,
    pub objective_gap: Option<f64>,
    pub tau: Option<f64>,
    pub branch: Option<String>,
    pub wall_ms: Option<f64>,
}

/// Writes `trace`; `reference` turns recorded objectives into gaps.
pub fn write_trace<W: Write>(trace: &IterationTrace<f64>, reference: Option<f64>, out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(TRACE_HEADER)?;
    for r in &trace.records {
        let gap = reference.and_then(|f| r.objective.map(|o| o - f));
        w.write_record([
            r.k.to_string(),
            r.f_evals.to_string(),
            r.prox_evals.to_string(),
            r.operator_evals().to_string(),
            fmt_float(r.v),
            fmt_float(r.norm_r),
            fmt_opt(r.norm_f),
            fmt_float(r.natural_residual),
            fmt_opt(r.tangent_residual),
            fmt_opt(gap),
            fmt_opt(r.tau),
            r.branch.map(|b| b.to_string()).unwrap_or_default(),
            fmt_opt(r.wall_ms),
        ])?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_trace_csv(trace: &IterationTrace<f64>, reference: Option<f64>, path: &Path) -> Result<()> {
    let file = File::create(path).with_context(|| format!("creating {}", path.display()))?;
    write_trace(trace, reference, BufWriter::new(file)).with_context(|| format!("writing {}", path.display()))
}

pub fn read_trace<R: Read>(input: R) -> Result<Vec<TraceRow>> {
    let mut rd = csv::Reader::from_reader(input);
    rd.deserialize().map(|r| r.map_err(Into::into)).collect()
}

pub fn read_trace_csv(path: &Path) -> Result<Vec<TraceRow>> {
    let file = File::open(path).with_context(|| format!("opening {}", path.display()))?;
    read_trace(file).with_context(|| format!("reading {}", path.display()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn float_format_round_trips() {
        for x in [0.1, 1.0 / 3.0, 1e-300, 6.02214076e23, -2.5, f64::MIN_POSITIVE, 0.0] {
            let s = fmt_float(x);
            assert_eq!(s.parse::<f64>().unwrap().to_bits(), x.to_bits(), "{s}");
        }
    }
}
