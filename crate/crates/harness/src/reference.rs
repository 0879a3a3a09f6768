//! Reference optimal values for objective-gap reporting, computed once per
//! problem and cached for the life of the process.

use std::collections::HashMap;
use std::sync::{Mutex, OnceLock};

use anyhow::{bail, Result};
use flexkit::solvers::{BudgetMetric, Method, SolverConfig};

use crate::problem::BuiltProblem;
use crate::setup::{DirectionKind, MethodSetup};

pub const REFERENCE_TOLERANCE: f64 = 1e-12;
const REFERENCE_BUDGET: u64 = 4_000_000;

fn cache() -> &'static Mutex<HashMap<String, f64>> {
    static CACHE: OnceLock<Mutex<HashMap<String, f64>>> = OnceLock::new();
    CACHE.get_or_init(Default::default)
}

/// Smallest objective seen by Prox-FLEX with AA-II run to residual 1e-12.
pub fn reference_objective(problem: &BuiltProblem) -> Result<f64> {
    if let Some(v) = cache().lock().expect("cache lock").get(&problem.label) {
        return Ok(*v);
    }
    if !problem.instance.has_objective() {
        bail!("problem `{}` exposes no objective", problem.label);
    }
    let setup = MethodSetup {
        direction: DirectionKind::Aa2,
        config: SolverConfig {
            residual_tolerance: REFERENCE_TOLERANCE,
            max_operator_evals: REFERENCE_BUDGET,
            max_iterations: usize::MAX,
            budget_metric: BudgetMetric::OperatorEvals,
            ..SolverConfig::default()
        },
        ..MethodSetup::new(Method::ProxFlex)
    };
    let trace = setup.run(problem)?;
    let best = trace
        .records
        .iter()
        .filter_map(|r| r.objective)
        .chain(problem.instance.objective(&trace.final_point))
        .fold(f64::INFINITY, f64::min);
    if !best.is_finite() {
        bail!("reference run for `{}` produced no finite objective", problem.label);
    }
    cache().lock().expect("cache lock").insert(problem.label.clone(), best);
    Ok(best)
}
