use super::trace::{Branch, IterationTrace, Method, Recorder, Snapshot, Termination};
use super::{next_direction, within_slack, SolverConfig};
use crate::directions::DirectionProvider;
use crate::error::SolverError;
use crate::lyapunov::{lyapunov_value, residual_from};
use crate::numeric::Point;
use crate::problems::ProblemInstance;
use crate::scalar::{lit, Real};

/// `z` with `z̄ = T₁ᵞ(z)`, `w = T₂ᵞ(z)`, the two operator values and `𝒱(z, z̄, w)`.
///
/// With `g = 0` the merit is stored as `‖F(z)‖²` and the residual as `F(z)`,
/// which is what `𝒱` and `R_γ` reduce to; this keeps the run identical to FLEX.
struct State<T> {
    z: Point<T>,
    zbar: Point<T>,
    w: Point<T>,
    fz: Point<T>,
    fzbar: Point<T>,
    v: T,
}

impl<T: Real> State<T> {
    /// Costs two operator and two prox evaluations.
    fn at(inst: &ProblemInstance<T>, gamma: T, z: Point<T>) -> Self {
        let ng = -gamma;
        let fz = inst.eval_f(&z);
        let zbar = inst.prox(&z.axpy(&ng, &fz), &gamma);
        let fzbar = inst.eval_f(&zbar);
        let w = inst.prox(&z.axpy(&ng, &fzbar), &gamma);
        let v = if inst.prox_spec().is_zero() {
            fz.norm_sq()
        } else {
            lyapunov_value(&gamma, &z, &zbar, &w, &fz, &fzbar)
        };
        Self { z, zbar, w, fz, fzbar, v }
    }

    fn residual(&self, inst: &ProblemInstance<T>, gamma: T) -> Point<T> {
        if inst.prox_spec().is_zero() {
            self.fz.clone()
        } else {
            residual_from(&gamma, &self.z, &self.zbar)
        }
    }

    /// `γ⁻²‖w − z̄‖²`.
    fn nominal_gap(&self, inst: &ProblemInstance<T>, gamma: T) -> T {
        if inst.prox_spec().is_zero() {
            self.fz.dist_sq(&self.fzbar)
        } else {
            self.w.dist_sq(&self.zbar) / (gamma * gamma)
        }
    }

    fn finite(&self) -> bool {
        self.z.all_finite() && self.fz.all_finite() && self.fzbar.all_finite() && self.w.all_finite() && self.v.is_finite()
    }
}

/// Prox-FLEX: FLEX with the Lyapunov function `𝒱` as merit, valid for any
/// prox-friendly `g`. Every trial point costs two operator and two prox
/// evaluations, and the accepted trial's `T₁`, `T₂` are reused.
pub fn run_proxflex<T: Real>(
    inst: &ProblemInstance<T>,
    config: &SolverConfig,
    provider: &mut dyn DirectionProvider<T>,
    z0: &Point<T>,
) -> Result<IterationTrace<T>, SolverError> {
    config.check_start(inst, z0)?;
    let gamma = config.gamma(inst);
    let gl = gamma * *inst.lipschitz();
    let sigma = lit::<T>(config.sigma);
    let kappa = sigma * (T::one() - gl * gl);
    let rho_sq = lit::<T>(config.rho) * lit::<T>(config.rho);
    let beta = lit::<T>(config.beta);
    let mu = if config.strengthened_proxflex {
        let mu = config.mu_f.map(lit::<T>).or_else(|| inst.strong_monotonicity().copied());
        if mu.is_none() {
            return Err(SolverError::Config("strengthened line search needs a strong-monotonicity modulus".into()));
        }
        mu
    } else {
        None
    };
    let name = provider.name().to_string();

    let mut rec = Recorder::new(inst, config);
    if rec.exhausted() {
        return Ok(rec.finish(Method::ProxFlex, &name, gamma, z0.clone(), Termination::Budget));
    }
    let mut st = State::at(inst, gamma, z0.clone());
    if !st.finite() {
        return Ok(rec.finish(Method::ProxFlex, &name, gamma, st.z, Termination::NonFinite));
    }
    let mut termination = Termination::MaxIterations;
    for k in 0..config.max_iterations {
        let r = st.residual(inst, gamma);
        rec.push(&st.z, &st.fz, Snapshot { v: st.v, norm_r: r.norm(), tseng_residual: None });
        if rec.converged() {
            termination = Termination::Tolerance;
            break;
        }
        if rec.exhausted() {
            termination = Termination::Budget;
            break;
        }
        let dir = next_direction(provider, config, inst, gamma, k, &st.z, &r);
        let mut rhs = st.v - kappa * st.nominal_gap(inst, gamma);
        if let Some(mu) = mu {
            rhs = rhs - lit::<T>(2.0) / gamma * sigma * mu * st.w.dist_sq(&st.z);
        }
        let mut ratio = None;
        let mut accepted = None;
        if !dir.d.is_zero() {
            let zd = st.z.add(&dir.d);
            let trial = State::at(inst, gamma, zd.clone());
            ratio = (st.v > T::zero()).then(|| (trial.v / st.v).max(T::zero()));
            if trial.v <= rho_sq * st.v {
                accepted = Some((trial, Branch::FullStep, T::one()));
            } else {
                let mut tau = T::one();
                for _ in 0..config.big_m {
                    tau = tau * beta;
                    let trial = State::at(inst, gamma, st.w.lerp(&tau, &zd));
                    if trial.v <= rhs {
                        accepted = Some((trial, Branch::LineSearch, tau));
                        break;
                    }
                }
            }
        }
        let (next, branch, tau) = match accepted {
            Some(a) => a,
            None => {
                let next = State::at(inst, gamma, st.w.clone());
                if next.v.is_finite() && !within_slack(next.v, rhs, st.v, st.z.norm() / gamma + st.fz.norm()) {
                    return Err(SolverError::DescentViolated { iteration: k, lhs: next.v.to_f64_lossy(), rhs: rhs.to_f64_lossy() });
                }
                (next, Branch::Nominal, T::zero())
            }
        };
        rec.mark_step(branch, tau, ratio, dir.fallback);
        if !next.finite() {
            termination = Termination::NonFinite;
            break;
        }
        st = next;
    }
    Ok(rec.finish(Method::ProxFlex, &name, gamma, st.z, termination))
}
