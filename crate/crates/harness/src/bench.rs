//! Benchmark orchestration from a TOML configuration file.
//!
//! ```toml
//! [benchmark]
//! problems = ["quadmm:n=20,omega=0,seed=1"]
//! methods = ["eg", "flex-aa2"]
//! budget = 50000
//! tolerance = 1e-8
//! output = "out"
//!
//! [flex-aa2]
//! method = "flex"
//! direction = "aa2"
//! memory = 20
//! ```
//!
//! Each entry of `methods` names a section; a missing section means the
//! method of that name with default parameters.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use flexkit::solvers::{BudgetMetric, Method};
use rayon::prelude::*;
use serde::Deserialize;

use crate::problem::ProblemSpec;
use crate::reference::reference_objective;
use crate::setup::{DirectionKind, MethodSetup};
use crate::trace_io::{fmt_float, write_trace_csv};

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BenchSection {
    #[serde(default)]
    pub problem: Option<String>,
    #[serde(default)]
    pub problems: Vec<String>,
    #[serde(default)]
    pub methods: Vec<String>,
    pub budget: u64,
    #[serde(default = "default_tolerance")]
    pub tolerance: f64,
    pub output: PathBuf,
    #[serde(default = "one")]
    pub repetitions: usize,
    #[serde(default = "one")]
    pub jobs: usize,
    #[serde(default)]
    pub seed: Option<u64>,
    #[serde(default)]
    pub max_iterations: Option<usize>,
    /// `operator` (F plus prox, the default) or `f`.
    #[serde(default)]
    pub budget_metric: Option<String>,
    #[serde(default)]
    pub timing: bool,
}

fn default_tolerance() -> f64 {
    1e-8
}

fn one() -> usize {
    1
}

/// Per-method overrides.
#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MethodSection {
    pub method: Option<String>,
    pub direction: Option<String>,
    pub memory: Option<usize>,
    pub gamma_frac: Option<f64>,
    pub rho: Option<f64>,
    pub sigma: Option<f64>,
    pub beta: Option<f64>,
    pub big_m: Option<usize>,
    pub newton_c: Option<f64>,
    pub safeguard: Option<f64>,
    pub strengthened: Option<bool>,
}

#[derive(Debug, Clone, Deserialize)]
pub struct BenchmarkConfig {
    pub benchmark: BenchSection,
    #[serde(flatten)]
    pub sections: BTreeMap<String, MethodSection>,
}

impl BenchmarkConfig {
    pub fn from_toml(text: &str) -> Result<Self> {
        let cfg: Self = toml::from_str(text).context("invalid benchmark configuration")?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        let mut cfg = Self::from_toml(&text).with_context(|| format!("in {}", path.display()))?;
        if cfg.benchmark.output.is_relative() {
            if let Some(dir) = path.parent() {
                cfg.benchmark.output = dir.join(&cfg.benchmark.output);
            }
        }
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        let b = &self.benchmark;
        if b.budget == 0 {
            bail!("budget must be positive");
        }
        if b.repetitions == 0 {
            bail!("repetitions must be at least 1");
        }
        if b.jobs == 0 {
            bail!("jobs must be at least 1");
        }
        if !(b.tolerance >= 0.0) {
            bail!("tolerance must be nonnegative");
        }
        self.budget_metric()?;
        self.problem_specs()?;
        for label in &b.methods {
            self.setup(label)?;
        }
        Ok(())
    }

    fn budget_metric(&self) -> Result<BudgetMetric> {
        match self.benchmark.budget_metric.as_deref() {
            None | Some("operator") => Ok(BudgetMetric::OperatorEvals),
            Some("f") => Ok(BudgetMetric::FEvals),
            Some(other) => bail!("unknown budget_metric `{other}` (expected operator or f)"),
        }
    }

    pub fn problem_specs(&self) -> Result<Vec<ProblemSpec>> {
        let b = &self.benchmark;
        let seed = b.seed.unwrap_or(0);
        b.problem
            .iter()
            .chain(&b.problems)
            .map(|s| Ok(s.parse::<ProblemSpec>().with_context(|| format!("problem `{s}`"))?.with_default_seed(seed)))
            .collect()
    }

    /// The fully resolved setup for a method label.
    pub fn setup(&self, label: &str) -> Result<MethodSetup> {
        let sec = self.sections.get(label).cloned().unwrap_or_default();
        let name = sec.method.as_deref().unwrap_or(label);
        let method: Method = name.parse().map_err(anyhow::Error::msg).with_context(|| format!("method `{label}`"))?;
        let mut s = MethodSetup::new(method);
        if let Some(d) = &sec.direction {
            s.direction = d.parse::<DirectionKind>()?;
        }
        s.memory = sec.memory.unwrap_or(s.memory);
        s.newton_c = sec.newton_c.unwrap_or(s.newton_c);
        let c = &mut s.config;
        c.gamma_fraction = sec.gamma_frac.unwrap_or(c.gamma_fraction);
        c.rho = sec.rho.unwrap_or(c.rho);
        c.sigma = sec.sigma.unwrap_or(c.sigma);
        c.beta = sec.beta.unwrap_or(c.beta);
        c.big_m = sec.big_m.unwrap_or(c.big_m);
        c.safeguard_d = sec.safeguard.or(c.safeguard_d);
        c.strengthened_proxflex = sec.strengthened.unwrap_or(c.strengthened_proxflex);
        c.max_operator_evals = self.benchmark.budget;
        c.residual_tolerance = self.benchmark.tolerance;
        c.budget_metric = self.budget_metric()?;
        c.timing = self.benchmark.timing;
        if let Some(m) = self.benchmark.max_iterations {
            c.max_iterations = m;
        }
        c.validate()?;
        s.provider()?;
        Ok(s)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SummaryRow {
    pub problem: String,
    pub method: String,
    pub repetition: usize,
    /// `ok`, or the error message of a failed cell.
    pub status: String,
    pub termination: Option<String>,
    pub iterations: usize,
    pub f_evals: u64,
    pub prox_evals: u64,
    pub final_norm_r: Option<f64>,
    pub final_natural_residual: Option<f64>,
    /// Operator evaluations recorded at the first iterate meeting the tolerance.
    pub evals_to_tolerance: Option<u64>,
    pub wall_ms: Option<f64>,
    pub trace_file: Option<String>,
}

pub const SUMMARY_HEADER: [&str; 14] = [
    "problem",
    "method",
    "repetition",
    "status",
    "termination",
    "iterations",
    "f_evals",
    "prox_evals",
    "operator_evals",
    "final_norm_R",
    "final_natural_residual",
    "evals_to_tolerance",
    "wall_ms",
    "trace_file",
];

#[derive(Debug, Clone, Default)]
pub struct Summary {
    pub rows: Vec<SummaryRow>,
}

impl Summary {
    pub fn failures(&self) -> impl Iterator<Item = &SummaryRow> {
        self.rows.iter().filter(|r| r.status != "ok")
    }

    pub fn write_csv(&self, path: &Path) -> Result<()> {
        let mut w = csv::Writer::from_path(path).with_context(|| format!("creating {}", path.display()))?;
        w.write_record(SUMMARY_HEADER)?;
        let opt = |x: Option<f64>| x.map(fmt_float).unwrap_or_default();
        for r in &self.rows {
            w.write_record([
                r.problem.clone(),
                r.method.clone(),
                r.repetition.to_string(),
                r.status.clone(),
                r.termination.clone().unwrap_or_default(),
                r.iterations.to_string(),
                r.f_evals.to_string(),
                r.prox_evals.to_string(),
                (r.f_evals + r.prox_evals).to_string(),
                opt(r.final_norm_r),
                opt(r.final_natural_residual),
                r.evals_to_tolerance.map(|e| e.to_string()).unwrap_or_default(),
                opt(r.wall_ms),
                r.trace_file.clone().unwrap_or_default(),
            ])?;
        }
        w.flush().with_context(|| format!("writing {}", path.display()))?;
        Ok(())
    }
}

struct Cell {
    problem: ProblemSpec,
    label: String,
    setup: MethodSetup,
    repetition: usize,
}

fn run_cell(cell: &Cell, out_dir: &Path, tolerance: f64, timing: bool) -> SummaryRow {
    let mut row = SummaryRow {
        problem: cell.problem.to_string(),
        method: cell.label.clone(),
        repetition: cell.repetition,
        status: "ok".into(),
        termination: None,
        iterations: 0,
        f_evals: 0,
        prox_evals: 0,
        final_norm_r: None,
        final_natural_residual: None,
        evals_to_tolerance: None,
        wall_ms: None,
        trace_file: None,
    };
    let started = std::time::Instant::now();
    let result = (|| -> Result<()> {
        let built = cell.problem.build()?;
        let reference = if cell.problem.is_logistic() { Some(reference_objective(&built)?) } else { None };
        let trace = cell.setup.run(&built)?;
        let file = format!("{}__{}__rep{}.csv", cell.problem.slug(), cell.label, cell.repetition);
        write_trace_csv(&trace, reference, &out_dir.join(&file))?;
        row.termination = Some(trace.termination.to_string());
        row.iterations = trace.records.len();
        row.f_evals = trace.counts.f_evals;
        row.prox_evals = trace.counts.prox_evals;
        row.final_norm_r = trace.last().map(|r| r.norm_r);
        row.final_natural_residual = trace.last().map(|r| r.natural_residual);
        row.evals_to_tolerance = trace.records.iter().find(|r| r.norm_r <= tolerance).map(|r| r.operator_evals());
        row.trace_file = Some(file);
        Ok(())
    })();
    if let Err(e) = result {
        row.status = format!("error: {e:#}");
    }
    if timing {
        row.wall_ms = Some(started.elapsed().as_secs_f64() * 1e3);
    }
    row
}

/// Runs every (problem, method, repetition) cell, writes one trace per cell
/// and `summary.csv` into the output directory. Failed cells are recorded in
/// the summary and do not stop the others. Outputs do not depend on `jobs`.
pub fn run_benchmark(config: &BenchmarkConfig) -> Result<Summary> {
    config.validate()?;
    let b = &config.benchmark;
    let out_dir = &b.output;
    fs::create_dir_all(out_dir).with_context(|| format!("creating {}", out_dir.display()))?;
    let mut cells = Vec::new();
    for problem in config.problem_specs()? {
        for label in &b.methods {
            for repetition in 0..b.repetitions {
                cells.push(Cell { problem: problem.clone(), label: label.clone(), setup: config.setup(label)?, repetition });
            }
        }
    }
    let pool = rayon::ThreadPoolBuilder::new().num_threads(b.jobs).build().context("building thread pool")?;
    let rows = pool.install(|| cells.par_iter().map(|c| run_cell(c, out_dir, b.tolerance, b.timing)).collect());
    let summary = Summary { rows };
    summary.write_csv(&out_dir.join("summary.csv"))?;
    Ok(summary)
}
