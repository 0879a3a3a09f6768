use crate::error::SolverError;
use crate::numeric::Point;
use crate::problems::{EvalCounts, ProblemInstance};
use crate::scalar::{lit, Real};

/// What the evaluation budget counts.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum BudgetMetric {
    /// `F` plus prox evaluations.
    #[default]
    OperatorEvals,
    FEvals,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SolverConfig {
    /// `γ = gamma_fraction / L_F`.
    pub gamma_fraction: f64,
    pub rho: f64,
    pub sigma: f64,
    pub beta: f64,
    /// Number of nonzero line-search trials `β¹, …, β^M`.
    pub big_m: usize,
    pub max_iterations: usize,
    pub max_operator_evals: u64,
    pub budget_metric: BudgetMetric,
    /// Stop once `‖R_γ(zᵏ)‖` is at most this.
    pub residual_tolerance: f64,
    /// Clip directions to `‖d‖ ≤ D‖R_γ‖`.
    pub safeguard_d: Option<f64>,
    pub strengthened_proxflex: bool,
    /// Overrides the instance's strong-monotonicity modulus.
    pub mu_f: Option<f64>,
    pub iflex_backtrack_cap: usize,
    pub record_iterates: bool,
    /// Fill `wall_ms`; off keeps traces reproducible byte for byte.
    pub timing: bool,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self {
            gamma_fraction: 0.9,
            rho: 0.99,
            sigma: 0.1,
            beta: 0.3,
            big_m: 2,
            max_iterations: 100_000,
            max_operator_evals: 1_000_000,
            budget_metric: BudgetMetric::OperatorEvals,
            residual_tolerance: 1e-8,
            safeguard_d: None,
            strengthened_proxflex: false,
            mu_f: None,
            iflex_backtrack_cap: 200,
            record_iterates: false,
            timing: false,
        }
    }
}

impl SolverConfig {
    /// Defaults tuned for I-FLEX (`β = 0.01`).
    pub fn iflex() -> Self {
        Self { beta: 0.01, ..Self::default() }
    }

    pub fn validate(&self) -> Result<(), SolverError> {
        let open_unit = |name: &str, v: f64| {
            if v > 0.0 && v < 1.0 {
                Ok(())
            } else {
                Err(SolverError::Config(format!("{name} must lie in (0, 1), got {v}")))
            }
        };
        open_unit("gamma_fraction", self.gamma_fraction)?;
        open_unit("rho", self.rho)?;
        open_unit("sigma", self.sigma)?;
        open_unit("beta", self.beta)?;
        if !(self.residual_tolerance >= 0.0) {
            return Err(SolverError::Config(format!("residual_tolerance must be nonnegative, got {}", self.residual_tolerance)));
        }
        if let Some(d) = self.safeguard_d {
            if !(d > 0.0 && d.is_finite()) {
                return Err(SolverError::Config(format!("safeguard bound must be positive, got {d}")));
            }
        }
        if let Some(mu) = self.mu_f {
            if !(mu > 0.0 && mu.is_finite()) {
                return Err(SolverError::Config(format!("mu_f must be positive, got {mu}")));
            }
        }
        if self.iflex_backtrack_cap == 0 {
            return Err(SolverError::Config("iflex_backtrack_cap must be positive".into()));
        }
        Ok(())
    }

    pub fn gamma<T: Real>(&self, inst: &ProblemInstance<T>) -> T {
        lit::<T>(self.gamma_fraction) / *inst.lipschitz()
    }

    pub(crate) fn spent(&self, counts: EvalCounts) -> u64 {
        match self.budget_metric {
            BudgetMetric::OperatorEvals => counts.total(),
            BudgetMetric::FEvals => counts.f_evals,
        }
    }

    pub(crate) fn check_start<T: Real>(&self, inst: &ProblemInstance<T>, z0: &Point<T>) -> Result<(), SolverError> {
        self.validate()?;
        if z0.dim() != inst.dim() {
            return Err(SolverError::Config(format!("start point has dimension {}, instance has {}", z0.dim(), inst.dim())));
        }
        if !z0.all_finite() {
            return Err(SolverError::Config("start point has non-finite entries".into()));
        }
        Ok(())
    }

    pub(crate) fn require_unconstrained<T: Real>(&self, inst: &ProblemInstance<T>, method: &str) -> Result<(), SolverError> {
        if inst.prox_spec().is_zero() {
            Ok(())
        } else {
            Err(SolverError::Config(format!("{method} requires g = 0; use proxflex for instance `{}`", inst.name())))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_validate() {
        SolverConfig::default().validate().unwrap();
        assert_eq!(SolverConfig::iflex().beta, 0.01);
        let bad = SolverConfig { rho: 1.0, ..SolverConfig::default() };
        assert!(bad.validate().is_err());
        let bad = SolverConfig { gamma_fraction: 0.0, ..SolverConfig::default() };
        assert!(bad.validate().is_err());
    }
}
