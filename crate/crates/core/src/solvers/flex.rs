use super::trace::{Branch, IterationTrace, Method, Recorder, Snapshot, Termination};
use super::{next_direction, within_slack, SolverConfig};
use crate::directions::DirectionProvider;
use crate::error::SolverError;
use crate::numeric::Point;
use crate::problems::ProblemInstance;
use crate::scalar::{lit, Real};

struct Accepted<T> {
    z: Point<T>,
    fz: Point<T>,
    branch: Branch,
    tau: T,
}

/// The extragradient point `w = z − γF(z − γF(z))` with its descent bound.
struct Nominal<T> {
    w: Point<T>,
    fzbar: Point<T>,
    rhs: T,
}

fn nominal<T: Real>(inst: &ProblemInstance<T>, gamma: T, kappa: T, z: &Point<T>, fz: &Point<T>) -> Nominal<T> {
    let ng = -gamma;
    let zbar = z.axpy(&ng, fz);
    let fzbar = inst.eval_f(&zbar);
    let w = z.axpy(&ng, &fzbar);
    let rhs = fz.norm_sq() - kappa * fz.dist_sq(&fzbar);
    Nominal { w, fzbar, rhs }
}

/// Takes `w` after checking the descent inequality it is guaranteed to satisfy.
fn accept_nominal<T: Real>(
    inst: &ProblemInstance<T>,
    nom: Nominal<T>,
    fsq: T,
    magnitude: T,
    iteration: usize,
) -> Result<Accepted<T>, SolverError> {
    let fw = inst.eval_f(&nom.w);
    let lhs = fw.norm_sq();
    if !within_slack(lhs, nom.rhs, fsq, magnitude) && lhs.is_finite() {
        return Err(SolverError::DescentViolated { iteration, lhs: lhs.to_f64_lossy(), rhs: nom.rhs.to_f64_lossy() });
    }
    Ok(Accepted { z: nom.w, fz: fw, branch: Branch::Nominal, tau: T::zero() })
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Variant {
    Flex,
    IFlex,
}

/// FLEX: contraction test on `‖F(zᵏ + dᵏ)‖`, else a short line search
/// between `wᵏ` and `zᵏ + dᵏ` over `τ ∈ {β, …, β^M, 0}`.
pub fn run_flex<T: Real>(
    inst: &ProblemInstance<T>,
    config: &SolverConfig,
    provider: &mut dyn DirectionProvider<T>,
    z0: &Point<T>,
) -> Result<IterationTrace<T>, SolverError> {
    run_variant(inst, config, provider, z0, Variant::Flex)
}

/// I-FLEX: backtracking from `τ = 1` over `βⁱ` on the descent test alone.
/// Finite termination needs `F` injective; the backtracking cap turns a
/// stalled search into an error.
pub fn run_iflex<T: Real>(
    inst: &ProblemInstance<T>,
    config: &SolverConfig,
    provider: &mut dyn DirectionProvider<T>,
    z0: &Point<T>,
) -> Result<IterationTrace<T>, SolverError> {
    run_variant(inst, config, provider, z0, Variant::IFlex)
}

fn run_variant<T: Real>(
    inst: &ProblemInstance<T>,
    config: &SolverConfig,
    provider: &mut dyn DirectionProvider<T>,
    z0: &Point<T>,
    variant: Variant,
) -> Result<IterationTrace<T>, SolverError> {
    let method = match variant {
        Variant::Flex => Method::Flex,
        Variant::IFlex => Method::IFlex,
    };
    config.check_start(inst, z0)?;
    config.require_unconstrained(inst, method.as_str())?;
    let gamma = config.gamma(inst);
    let gl = gamma * *inst.lipschitz();
    let sigma = lit::<T>(config.sigma);
    let kappa = sigma * (T::one() - gl * gl);
    let rho_sq = lit::<T>(config.rho) * lit::<T>(config.rho);
    let beta = lit::<T>(config.beta);
    let name = provider.name().to_string();

    let mut rec = Recorder::new(inst, config);
    if rec.exhausted() {
        return Ok(rec.finish(method, &name, gamma, z0.clone(), Termination::Budget));
    }
    let mut z = z0.clone();
    let mut fz = inst.eval_f(&z);
    if !fz.all_finite() {
        return Ok(rec.finish(method, &name, gamma, z, Termination::NonFinite));
    }
    let mut termination = Termination::MaxIterations;
    for k in 0..config.max_iterations {
        let fsq = fz.norm_sq();
        let fnorm = fsq.sqrt();
        let magnitude = z.norm() / gamma + fnorm;
        rec.push(&z, &fz, Snapshot { v: fsq, norm_r: fnorm, tseng_residual: None });
        if rec.converged() {
            termination = Termination::Tolerance;
            break;
        }
        if rec.exhausted() {
            termination = Termination::Budget;
            break;
        }
        let dir = next_direction(provider, config, inst, gamma, k, &z, &fz);
        let mut ratio = None;
        let acc = if dir.d.is_zero() {
            accept_nominal(inst, nominal(inst, gamma, kappa, &z, &fz), fsq, magnitude, k)?
        } else {
            let zd = z.add(&dir.d);
            match variant {
                Variant::Flex => {
                    let fzd = inst.eval_f(&zd);
                    ratio = (fnorm > T::zero()).then(|| fzd.norm() / fnorm);
                    if fzd.norm_sq() <= rho_sq * fsq {
                        Accepted { z: zd, fz: fzd, branch: Branch::FullStep, tau: T::one() }
                    } else {
                        let nom = nominal(inst, gamma, kappa, &z, &fz);
                        let mut found = None;
                        let mut tau = T::one();
                        for _ in 0..config.big_m {
                            tau = tau * beta;
                            let zt = nom.w.lerp(&tau, &zd);
                            let ft = inst.eval_f(&zt);
                            if ft.norm_sq() <= nom.rhs {
                                found = Some(Accepted { z: zt, fz: ft, branch: Branch::LineSearch, tau });
                                break;
                            }
                        }
                        match found {
                            Some(a) => a,
                            None => accept_nominal(inst, nom, fsq, magnitude, k)?,
                        }
                    }
                }
                Variant::IFlex => {
                    let nom = nominal(inst, gamma, kappa, &z, &fz);
                    let fzd = inst.eval_f(&zd);
                    ratio = (fnorm > T::zero()).then(|| fzd.norm() / fnorm);
                    if fzd.norm_sq() <= nom.rhs {
                        Accepted { z: zd, fz: fzd, branch: Branch::FullStep, tau: T::one() }
                    } else {
                        let mut found = None;
                        let mut tau = T::one();
                        for _ in 0..config.iflex_backtrack_cap {
                            tau = tau * beta;
                            if tau.is_zero() {
                                break;
                            }
                            let zt = nom.w.lerp(&tau, &zd);
                            let ft = inst.eval_f(&zt);
                            if ft.norm_sq() <= nom.rhs {
                                found = Some(Accepted { z: zt, fz: ft, branch: Branch::LineSearch, tau });
                                break;
                            }
                        }
                        match found {
                            Some(a) => a,
                            None => {
                                let stalled = fz.dist(&nom.fzbar) > lit::<T>(config.residual_tolerance);
                                if !tau.is_zero() && stalled {
                                    return Err(SolverError::BacktrackCap { iteration: k, cap: config.iflex_backtrack_cap });
                                }
                                accept_nominal(inst, nom, fsq, magnitude, k)?
                            }
                        }
                    }
                }
            }
        };
        rec.mark_step(acc.branch, acc.tau, ratio, dir.fallback);
        if !(acc.z.all_finite() && acc.fz.all_finite()) {
            termination = Termination::NonFinite;
            break;
        }
        z = acc.z;
        fz = acc.fz;
    }
    Ok(rec.finish(method, &name, gamma, z, termination))
}
