//! Iteration engines: extragradient, Tseng, and the line-search hybrids
//! FLEX, I-FLEX and Prox-FLEX.
//!
//! Every engine records one [`IterationRecord`] per visited iterate `zᵏ`.
//! The record carries the measures at `zᵏ` and, unless the run stopped there,
//! how the step leaving `zᵏ` was chosen.

mod classic;
mod config;
mod flex;
mod proxflex;
mod steps;
mod trace;

pub use classic::{run_eg, run_tseng};
pub use config::{BudgetMetric, SolverConfig};
pub use flex::{run_flex, run_iflex};
pub use proxflex::run_proxflex;
pub use steps::{eg_step, step_eg, step_resolvent_eg, step_tseng, tseng_step, StepOutput};
pub use trace::{Branch, IterationRecord, IterationTrace, Method, Termination};

use crate::directions::DirectionProvider;
use crate::error::SolverError;
use crate::numeric::Point;
use crate::problems::ProblemInstance;
use crate::scalar::Real;

/// Relative slack on the nominal (`τ = 0`) descent check.
pub const NOMINAL_SLACK: f64 = 1e-9;

/// Runs `method` from `z0`. The direction provider is ignored by EG and Tseng.
pub fn run<T: Real>(
    inst: &ProblemInstance<T>,
    config: &SolverConfig,
    method: Method,
    provider: &mut dyn DirectionProvider<T>,
    z0: &Point<T>,
) -> Result<IterationTrace<T>, SolverError> {
    match method {
        Method::Eg => run_eg(inst, config, z0),
        Method::Tseng => run_tseng(inst, config, z0),
        Method::Flex => run_flex(inst, config, provider, z0),
        Method::IFlex => run_iflex(inst, config, provider, z0),
        Method::ProxFlex => run_proxflex(inst, config, provider, z0),
    }
}

use crate::directions::{safeguard, Direction, DirectionRequest};
use crate::scalar::lit;

/// Feeds the accepted iterate to the provider and fetches the next direction,
/// clipped when a safeguard bound is configured.
pub(crate) fn next_direction<T: Real>(
    provider: &mut dyn DirectionProvider<T>,
    config: &SolverConfig,
    inst: &ProblemInstance<T>,
    gamma: T,
    iteration: usize,
    z: &Point<T>,
    r: &Point<T>,
) -> Direction<T> {
    provider.observe(z, r);
    let mut dir = provider.direction(&DirectionRequest { iteration, instance: inst, gamma, z, r });
    if dir.d.dim() != z.dim() || !dir.d.all_finite() {
        dir = Direction::fallback(r);
    }
    if let Some(bound) = config.safeguard_d {
        dir.d = safeguard(&dir.d, r, lit(bound));
    }
    dir
}

/// `lhs ≤ rhs` for squared merits, up to [`NOMINAL_SLACK`] relative to
/// `merit` plus rounding. Residuals are differences of vectors of size about
/// `magnitude`, so their norms carry an absolute error `e` of a few ulps of
/// it; the check is then `√lhs ≤ √rhs + e` in squared form.
pub(crate) fn within_slack<T: Real>(lhs: T, rhs: T, merit: T, magnitude: T) -> bool {
    let e = lit::<T>(64.0) * T::epsilon() * magnitude.abs();
    let merit = merit.abs();
    lhs <= rhs + lit::<T>(NOMINAL_SLACK) * merit + e * (lit::<T>(2.0) * merit.sqrt() + e)
}
