use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use super::SolverConfig;
use crate::lyapunov::{natural_residual_from, tangent_residual_from};
use crate::numeric::Point;
use crate::problems::{EvalCounts, ProblemInstance};
use crate::scalar::{Real, Scalar};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Method {
    Eg,
    Tseng,
    Flex,
    IFlex,
    ProxFlex,
}

impl Method {
    pub const ALL: [Method; 5] = [Method::Eg, Method::Tseng, Method::Flex, Method::IFlex, Method::ProxFlex];

    pub fn as_str(&self) -> &'static str {
        match self {
            Method::Eg => "eg",
            Method::Tseng => "tseng",
            Method::Flex => "flex",
            Method::IFlex => "iflex",
            Method::ProxFlex => "proxflex",
        }
    }

    /// Whether the method consults a direction provider.
    pub fn uses_directions(&self) -> bool {
        matches!(self, Method::Flex | Method::IFlex | Method::ProxFlex)
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Method {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Method::ALL
            .into_iter()
            .find(|m| m.as_str().eq_ignore_ascii_case(s))
            .ok_or_else(|| format!("unknown method `{s}` (expected eg, tseng, flex, iflex or proxflex)"))
    }
}

/// How the step leaving an iterate was chosen.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Branch {
    /// `zᵏ⁺¹ = zᵏ + dᵏ`.
    FullStep,
    /// `zᵏ⁺¹ = (1 − τ)wᵏ + τ(zᵏ + dᵏ)` with `0 < τ < 1`.
    LineSearch,
    /// The extragradient point `wᵏ`.
    Nominal,
}

impl Branch {
    pub fn as_str(&self) -> &'static str {
        match self {
            Branch::FullStep => "full-step",
            Branch::LineSearch => "line-search",
            Branch::Nominal => "nominal",
        }
    }
}

impl fmt::Display for Branch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Branch {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "full-step" => Ok(Branch::FullStep),
            "line-search" => Ok(Branch::LineSearch),
            "nominal" => Ok(Branch::Nominal),
            other => Err(format!("unknown branch `{other}`")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Termination {
    Tolerance,
    MaxIterations,
    Budget,
    NonFinite,
}

impl Termination {
    pub fn as_str(&self) -> &'static str {
        match self {
            Termination::Tolerance => "tolerance",
            Termination::MaxIterations => "max-iterations",
            Termination::Budget => "budget",
            Termination::NonFinite => "non-finite",
        }
    }
}

impl fmt::Display for Termination {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct IterationRecord {
    pub k: usize,
    /// Evaluations spent by the run when this record was written.
    pub f_evals: u64,
    pub prox_evals: u64,
    pub v: f64,
    pub norm_r: f64,
    /// `‖F(zᵏ)‖`, only when `g = 0`.
    pub norm_f: Option<f64>,
    pub natural_residual: f64,
    pub tangent_residual: Option<f64>,
    /// `‖F(zᵏ) + ξᵏ‖` for extragradient iterates after the first.
    pub tseng_residual: Option<f64>,
    pub objective: Option<f64>,
    pub tau: Option<f64>,
    pub branch: Option<Branch>,
    /// Trial-to-current merit ratio of the candidate direction.
    pub direction_ratio: Option<f64>,
    /// The direction provider fell back to `−R_γ`.
    pub fallback: bool,
    pub wall_ms: Option<f64>,
}

impl IterationRecord {
    pub fn operator_evals(&self) -> u64 {
        self.f_evals + self.prox_evals
    }
}

#[derive(Debug, Clone)]
pub struct IterationTrace<T> {
    pub method: Method,
    pub direction: String,
    pub gamma: f64,
    pub records: Vec<IterationRecord>,
    /// `zᵏ` per record, filled when the configuration asks for it.
    pub iterates: Vec<Point<T>>,
    /// The point the run ended on; for an iteration cap this is the
    /// unrecorded next iterate.
    pub final_point: Point<T>,
    pub termination: Termination,
    pub counts: EvalCounts,
}

impl<T> IterationTrace<T> {
    pub fn last(&self) -> Option<&IterationRecord> {
        self.records.last()
    }

    pub fn fallbacks(&self) -> usize {
        self.records.iter().filter(|r| r.fallback).count()
    }
}

/// Shared bookkeeping for one run.
pub(crate) struct Recorder<'a, T: Scalar> {
    pub inst: &'a ProblemInstance<T>,
    pub cfg: &'a SolverConfig,
    start: EvalCounts,
    clock: Instant,
    pub records: Vec<IterationRecord>,
    pub iterates: Vec<Point<T>>,
}

/// Measures at one iterate, in working precision.
pub(crate) struct Snapshot<T> {
    pub v: T,
    pub norm_r: T,
    pub tseng_residual: Option<T>,
}

impl<'a, T: Real> Recorder<'a, T> {
    pub fn new(inst: &'a ProblemInstance<T>, cfg: &'a SolverConfig) -> Self {
        Self { inst, cfg, start: inst.counts(), clock: Instant::now(), records: Vec::new(), iterates: Vec::new() }
    }

    pub fn counts(&self) -> EvalCounts {
        self.inst.counts().since(self.start)
    }

    pub fn exhausted(&self) -> bool {
        self.cfg.spent(self.counts()) >= self.cfg.max_operator_evals
    }

    /// Appends the record for iterate `z` with `F(z)` already known.
    pub fn push(&mut self, z: &Point<T>, fz: &Point<T>, snap: Snapshot<T>) {
        let counts = self.counts();
        let zero_g = self.inst.prox_spec().is_zero();
        let norm_f = zero_g.then(|| fz.norm().to_f64_lossy());
        self.records.push(IterationRecord {
            k: self.records.len(),
            f_evals: counts.f_evals,
            prox_evals: counts.prox_evals,
            v: snap.v.to_f64_lossy(),
            norm_r: snap.norm_r.to_f64_lossy(),
            norm_f,
            natural_residual: natural_residual_from(self.inst, z, fz).to_f64_lossy(),
            tangent_residual: tangent_residual_from(self.inst.prox_spec(), z, fz).map(|t| t.to_f64_lossy()),
            tseng_residual: snap.tseng_residual.map(|t| t.to_f64_lossy()),
            objective: self.inst.objective(z).map(|o| o.to_f64_lossy()),
            tau: None,
            branch: None,
            direction_ratio: None,
            fallback: false,
            wall_ms: self.cfg.timing.then(|| self.clock.elapsed().as_secs_f64() * 1e3),
        });
        if self.cfg.record_iterates {
            self.iterates.push(z.clone());
        }
    }

    pub fn converged(&self) -> bool {
        self.records.last().is_some_and(|r| r.norm_r <= self.cfg.residual_tolerance)
    }

    pub fn mark_step(&mut self, branch: Branch, tau: T, ratio: Option<T>, fallback: bool) {
        if let Some(r) = self.records.last_mut() {
            r.branch = Some(branch);
            r.tau = Some(tau.to_f64_lossy());
            r.direction_ratio = ratio.map(|x| x.to_f64_lossy());
            r.fallback = fallback;
        }
    }

    pub fn finish(self, method: Method, direction: &str, gamma: T, final_point: Point<T>, termination: Termination) -> IterationTrace<T> {
        let counts = self.counts();
        IterationTrace {
            method,
            direction: direction.to_string(),
            gamma: gamma.to_f64_lossy(),
            records: self.records,
            iterates: self.iterates,
            final_point,
            termination,
            counts,
        }
    }
}
