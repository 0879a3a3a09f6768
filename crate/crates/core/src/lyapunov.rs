//! The Lyapunov function `𝒱`, the algorithmic operators `T₁ᵞ`, `T₂ᵞ`, the
//! residual `R_γ`, and the optimality measures used to report progress.
//!
//! Functions taking a [`ProblemInstance`] use its counted evaluators unless
//! their name ends in `_quiet`; residual measures meant for reporting are
//! always quiet.

use crate::numeric::Point;
use crate::problems::{ProblemInstance, ProxSpec};
use crate::scalar::{lit, Real, Scalar};

/// `prox_{γg}(z − γF(z))`.
pub fn t1<T: Scalar>(inst: &ProblemInstance<T>, gamma: &T, z: &Point<T>) -> Point<T> {
    let fz = inst.eval_f(z);
    t1_from(inst, gamma, z, &fz)
}

/// `T₁ᵞ(z)` with `F(z)` already known.
pub fn t1_from<T: Scalar>(inst: &ProblemInstance<T>, gamma: &T, z: &Point<T>, fz: &Point<T>) -> Point<T> {
    inst.prox(&z.axpy(&-gamma.clone(), fz), gamma)
}

/// `prox_{γg}(z − γF(z̄))` with `z̄ = T₁ᵞ(z)`, computed when not supplied.
pub fn t2<T: Scalar>(inst: &ProblemInstance<T>, gamma: &T, z: &Point<T>, zbar: Option<&Point<T>>) -> Point<T> {
    let owned;
    let zbar = match zbar {
        Some(zb) => zb,
        None => {
            owned = t1(inst, gamma, z);
            &owned
        }
    };
    let fzbar = inst.eval_f(zbar);
    inst.prox(&z.axpy(&-gamma.clone(), &fzbar), gamma)
}

/// `R_γ(z) = (z − T₁ᵞ(z)) / γ`.
pub fn residual_r<T: Scalar>(inst: &ProblemInstance<T>, gamma: &T, z: &Point<T>) -> Point<T> {
    let zbar = t1(inst, gamma, z);
    residual_from(gamma, z, &zbar)
}

/// `(z − z̄) / γ` for a known `z̄ = T₁ᵞ(z)`.
pub fn residual_from<T: Scalar>(gamma: &T, z: &Point<T>, zbar: &Point<T>) -> Point<T> {
    z.sub(zbar).scale(&(T::one() / gamma.clone()))
}

/// `2γ⁻¹⟨z − z⁺, F(z) − F(z̄)⟩ + γ⁻²‖z⁺ − z̄‖² + γ⁻²‖z − z⁺‖²` from the two
/// operator values.
pub fn lyapunov_value<T: Scalar>(
    gamma: &T,
    z: &Point<T>,
    zbar: &Point<T>,
    zplus: &Point<T>,
    fz: &Point<T>,
    fzbar: &Point<T>,
) -> T {
    let inv = T::one() / gamma.clone();
    let inv2 = inv.clone() * inv.clone();
    let two = T::one() + T::one();
    let cross = z.sub(zplus).dot(&fz.sub(fzbar));
    two * inv * cross + inv2.clone() * zplus.dist_sq(zbar) + inv2 * z.dist_sq(zplus)
}

/// `𝒱(z, z̄, z⁺)`, evaluating `F(z)` and `F(z̄)` through the counted path.
///
/// Returns the raw value, which may be marginally negative from rounding.
pub fn lyapunov_v<T: Scalar>(inst: &ProblemInstance<T>, gamma: &T, z: &Point<T>, zbar: &Point<T>, zplus: &Point<T>) -> T {
    let fz = inst.eval_f(z);
    let fzbar = inst.eval_f(zbar);
    lyapunov_value(gamma, z, zbar, zplus, &fz, &fzbar)
}

/// `(γ²/2)(√(5 − 4γ²L²) − 1)`.
pub fn alpha_coeff<T: Real>(gamma: T, lipschitz: T) -> T {
    let g2 = gamma * gamma;
    let inner = lit::<T>(5.0) - lit::<T>(4.0) * g2 * lipschitz * lipschitz;
    g2 / lit(2.0) * (inner.sqrt() - T::one())
}

/// `ξ = γ⁻¹(z − z_next) − F(z̄) ∈ ∂g(z_next)` from one extragradient step.
pub fn xi_witness<T: Scalar>(gamma: &T, z: &Point<T>, z_next: &Point<T>, zbar: &Point<T>, f_zbar: &Point<T>) -> Point<T> {
    let _ = zbar;
    z.sub(z_next).scale(&(T::one() / gamma.clone())).sub(f_zbar)
}

/// `‖z − prox_g(z − F(z))‖` with unit prox step.
pub fn natural_residual<T: Real>(inst: &ProblemInstance<T>, z: &Point<T>) -> T {
    let fz = inst.eval_f_quiet(z);
    natural_residual_from(inst, z, &fz)
}

pub fn natural_residual_from<T: Real>(inst: &ProblemInstance<T>, z: &Point<T>, fz: &Point<T>) -> T {
    z.sub(&inst.prox_quiet(&z.sub(fz), &T::one())).norm()
}

/// `inf_{ξ∈∂g(z)} ‖F(z) + ξ‖`, available for `g = 0` and `g = λ‖·‖₁`.
pub fn tangent_residual<T: Real>(inst: &ProblemInstance<T>, z: &Point<T>) -> Option<T> {
    let fz = inst.eval_f_quiet(z);
    tangent_residual_from(inst.prox_spec(), z, &fz)
}

pub fn tangent_residual_from<T: Real>(prox: &ProxSpec<T>, z: &Point<T>, fz: &Point<T>) -> Option<T> {
    match prox {
        ProxSpec::Zero => Some(fz.norm()),
        ProxSpec::L1 { weight } => {
            let lam = *weight;
            let sq = z.iter().zip(fz.iter()).fold(T::zero(), |acc, (&zi, &fi)| {
                let r = if zi.is_zero() { (fi.abs() - lam).max(T::zero()) } else { (fi + lam * zi.signum()).abs() };
                acc + r * r
            });
            Some(sq.sqrt())
        }
        _ => None,
    }
}

/// Progress measures at one iterate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MeasureRecord<T> {
    pub v: T,
    pub norm_r: T,
    pub natural_residual: T,
    pub tangent_residual: Option<T>,
    /// `‖F(z) + ξ‖` with `ξ` the subgradient produced by the step into `z`.
    pub tseng_residual: Option<T>,
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::DenseMatrix;

    fn linear(m: &[&[f64]]) -> ProblemInstance<f64> {
        let mat = DenseMatrix::from_f64_rows(m).unwrap();
        let n = mat.rows();
        ProblemInstance::affine("lin", mat, Point::zeros(n), ProxSpec::Zero, 1.0).unwrap()
    }

    #[test]
    fn alpha_examples() {
        assert_eq!(alpha_coeff(1.0, 1.0), 0.0);
        assert!((alpha_coeff(0.5f64, 1.0) - 0.125).abs() < 1e-15);
        for l in [0.3, 1.0, 9.25] {
            let g = 0.9 / l;
            let expected = 0.81 / (2.0 * l * l) * ((5.0f64 - 3.24).sqrt() - 1.0);
            assert!((alpha_coeff(g, l) - expected).abs() < 1e-14 * expected.max(1.0));
        }
    }

    #[test]
    fn zero_g_collapses() {
        let inst = linear(&[&[0.0, 1.0], &[-1.0, 0.5]]);
        let z = Point::new(vec![0.7, -1.3]).unwrap();
        let g = 0.4;
        let fz = inst.eval_f_quiet(&z);
        assert_eq!(t1(&inst, &g, &z), z.axpy(&-g, &fz));
        assert_eq!(residual_r(&inst, &g, &z).as_slice().len(), 2);
        let r = residual_r(&inst, &g, &z);
        assert!(r.dist(&fz) < 1e-15);
        let zbar = t1(&inst, &g, &z);
        let zplus = t2(&inst, &g, &z, Some(&zbar));
        let v = lyapunov_v(&inst, &g, &z, &zbar, &zplus);
        assert!((v - fz.norm_sq()).abs() < 1e-12);
        let xi = xi_witness(&g, &z, &zplus, &zbar, &inst.eval_f_quiet(&zbar));
        assert!(xi.max_abs() < 1e-15);
        assert!((natural_residual(&inst, &z) - fz.norm()).abs() < 1e-15);
        assert_eq!(tangent_residual(&inst, &z), Some(fz.norm()));
    }

    #[test]
    fn t2_of_linear_map() {
        let inst = linear(&[&[1.0, 2.0], &[-2.0, 0.0]]);
        let m = DenseMatrix::<f64>::from_f64_rows(&[&[1.0, 2.0], &[-2.0, 0.0]]).unwrap();
        let z = Point::new(vec![0.5, 1.0]).unwrap();
        let g = 0.25;
        let inner = z.axpy(&-g, &m.matvec(&z));
        let expected = z.axpy(&-g, &m.matvec(&inner));
        assert!(t2(&inst, &g, &z, None).dist(&expected) < 1e-15);
    }

    #[test]
    fn xi_at_fixed_point() {
        let z = Point::new(vec![1.0, 2.0]).unwrap();
        let f = Point::new(vec![-3.0, 0.5]).unwrap();
        assert_eq!(xi_witness(&0.1, &z, &z, &z, &f), f.neg());
    }

    #[test]
    fn tangent_residual_l1() {
        let spec = ProxSpec::l1(1.0).unwrap();
        let t = |z: f64, f: f64| tangent_residual_from(&spec, &Point::new(vec![z]).unwrap(), &Point::new(vec![f]).unwrap());
        assert_eq!(t(0.0, 0.5), Some(0.0));
        assert_eq!(t(2.0, 3.0), Some(4.0));
        assert_eq!(t(-2.0, 3.0), Some(2.0));
        assert_eq!(t(0.0, -3.0), Some(2.0));
        let boxed = ProxSpec::boxed(vec![0.0], vec![1.0]).unwrap();
        assert_eq!(tangent_residual_from(&boxed, &Point::new(vec![0.5]).unwrap(), &Point::new(vec![1.0]).unwrap()), None);
    }
}
