use super::steps::{eg_step, tseng_step, StepOutput};
use super::trace::{Branch, IterationTrace, Method, Recorder, Snapshot, Termination};
use super::SolverConfig;
use crate::error::SolverError;
use crate::lyapunov::{lyapunov_value, xi_witness};
use crate::numeric::Point;
use crate::problems::ProblemInstance;
use crate::scalar::Real;

pub fn run_eg<T: Real>(inst: &ProblemInstance<T>, config: &SolverConfig, z0: &Point<T>) -> Result<IterationTrace<T>, SolverError> {
    run_two_stage(inst, config, z0, Method::Eg, eg_step)
}

pub fn run_tseng<T: Real>(inst: &ProblemInstance<T>, config: &SolverConfig, z0: &Point<T>) -> Result<IterationTrace<T>, SolverError> {
    run_two_stage(inst, config, z0, Method::Tseng, tseng_step)
}

fn run_two_stage<T: Real>(
    inst: &ProblemInstance<T>,
    config: &SolverConfig,
    z0: &Point<T>,
    method: Method,
    step: fn(&ProblemInstance<T>, &T, &Point<T>) -> StepOutput<T>,
) -> Result<IterationTrace<T>, SolverError> {
    config.check_start(inst, z0)?;
    let gamma = config.gamma(inst);
    let mut rec = Recorder::new(inst, config);
    let mut z = z0.clone();
    // ξᵏ from the step that produced the current iterate.
    let mut xi: Option<Point<T>> = None;
    let mut termination = Termination::MaxIterations;
    for _ in 0..config.max_iterations {
        if rec.exhausted() {
            termination = Termination::Budget;
            break;
        }
        let s = step(inst, &gamma, &z);
        if !(s.fz.all_finite() && s.fzbar.all_finite() && s.z_next.all_finite()) {
            termination = Termination::NonFinite;
            break;
        }
        let v = lyapunov_value(&gamma, &z, &s.zbar, &s.z_next, &s.fz, &s.fzbar);
        let norm_r = z.dist(&s.zbar) / gamma;
        let tseng_residual = xi.as_ref().map(|x| s.fz.add(x).norm());
        rec.push(&z, &s.fz, Snapshot { v, norm_r, tseng_residual });
        if rec.converged() {
            termination = Termination::Tolerance;
            break;
        }
        rec.mark_step(Branch::Nominal, T::zero(), None, false);
        xi = Some(xi_witness(&gamma, &z, &s.z_next, &s.zbar, &s.fzbar));
        z = s.z_next;
    }
    Ok(rec.finish(method, "none", gamma, z, termination))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::DenseMatrix;
    use crate::problems::ProxSpec;

    fn rotation() -> ProblemInstance<f64> {
        let m = DenseMatrix::from_f64_rows(&[&[0.0, 1.0], &[-1.0, 0.0]]).unwrap();
        ProblemInstance::affine("rot", m, Point::zeros(2), ProxSpec::Zero, 1.0).unwrap()
    }

    #[test]
    fn counts_two_per_iteration() {
        let inst = rotation();
        let cfg = SolverConfig { max_iterations: 7, residual_tolerance: 0.0, ..SolverConfig::default() };
        let t = run_eg(&inst, &cfg, &Point::new(vec![1.0, 1.0]).unwrap()).unwrap();
        assert_eq!(t.termination, Termination::MaxIterations);
        assert_eq!(t.records.len(), 7);
        assert_eq!(t.counts.f_evals, 14);
        assert_eq!(t.counts.prox_evals, 14);
    }

    #[test]
    fn zero_budget_is_empty() {
        let inst = rotation();
        let cfg = SolverConfig { max_operator_evals: 0, ..SolverConfig::default() };
        let t = run_eg(&inst, &cfg, &Point::new(vec![1.0, 1.0]).unwrap()).unwrap();
        assert!(t.records.is_empty());
        assert_eq!(t.termination, Termination::Budget);
    }

    #[test]
    fn converges_on_rotation() {
        let inst = rotation();
        let cfg = SolverConfig { residual_tolerance: 1e-6, ..SolverConfig::default() };
        let t = run_eg(&inst, &cfg, &Point::new(vec![1.0, 1.0]).unwrap()).unwrap();
        assert_eq!(t.termination, Termination::Tolerance);
        assert!(t.final_point.norm() < 1e-6);
        for w in t.records.windows(2) {
            assert!(w[1].v <= w[0].v * (1.0 + 1e-12));
        }
    }

    #[test]
    fn eg_and_tseng_agree_without_g() {
        let inst = rotation();
        let cfg = SolverConfig { max_iterations: 50, record_iterates: true, ..SolverConfig::default() };
        let z0 = Point::new(vec![0.4, -2.0]).unwrap();
        let a = run_eg(&inst, &cfg, &z0).unwrap();
        let b = run_tseng(&inst, &cfg, &z0).unwrap();
        assert_eq!(a.iterates, b.iterates);
        assert_eq!(a.final_point, b.final_point);
    }
}
