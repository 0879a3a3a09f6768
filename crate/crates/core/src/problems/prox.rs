use std::cmp::Ordering;
use std::fmt;
use std::sync::Arc;

use crate::error::ProblemError;
use crate::numeric::Point;
use crate::scalar::Scalar;

pub type ProxFn<T> = Arc<dyn Fn(&Point<T>, &T) -> Point<T> + Send + Sync>;

/// The nonsmooth part `g` of the inclusion, described by its proximal map.
#[derive(Clone)]
pub enum ProxSpec<T> {
    /// `g = 0`; the proximal map is the identity.
    Zero,
    /// `g = weight · ‖·‖₁`.
    L1 { weight: T },
    /// Indicator of `[lower, upper]` coordinatewise.
    Box { lower: Vec<T>, upper: Vec<T> },
    /// Indicator of a product of probability simplices, one per block.
    SimplexProduct { blocks: Vec<usize> },
    /// User-supplied `(v, t) ↦ prox_{t g}(v)`.
    Custom { name: String, eval: ProxFn<T> },
}

impl<T: Scalar> fmt::Debug for ProxSpec<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ProxSpec::Zero => write!(f, "Zero"),
            ProxSpec::L1 { weight } => write!(f, "L1({weight})"),
            ProxSpec::Box { lower, .. } => write!(f, "Box(dim={})", lower.len()),
            ProxSpec::SimplexProduct { blocks } => write!(f, "SimplexProduct({blocks:?})"),
            ProxSpec::Custom { name, .. } => write!(f, "Custom({name})"),
        }
    }
}

impl<T: Scalar> ProxSpec<T> {
    pub fn l1(weight: T) -> Result<Self, ProblemError> {
        if weight < T::zero() {
            return Err(ProblemError::Invalid("L1 weight must be nonnegative".into()));
        }
        Ok(ProxSpec::L1 { weight })
    }

    pub fn boxed(lower: Vec<T>, upper: Vec<T>) -> Result<Self, ProblemError> {
        if lower.len() != upper.len() {
            return Err(ProblemError::Invalid("box bounds differ in length".into()));
        }
        if let Some(i) = lower.iter().zip(&upper).position(|(l, u)| l > u) {
            return Err(ProblemError::Invalid(format!("box lower bound exceeds upper bound at {i}")));
        }
        Ok(ProxSpec::Box { lower, upper })
    }

    pub fn simplex_product(blocks: Vec<usize>) -> Result<Self, ProblemError> {
        if blocks.iter().any(|&b| b == 0) {
            return Err(ProblemError::Invalid("simplex blocks must be nonempty".into()));
        }
        Ok(ProxSpec::SimplexProduct { blocks })
    }

    pub fn custom(name: impl Into<String>, eval: impl Fn(&Point<T>, &T) -> Point<T> + Send + Sync + 'static) -> Self {
        ProxSpec::Custom { name: name.into(), eval: Arc::new(eval) }
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, ProxSpec::Zero)
    }

    /// Checks the variant against an ambient dimension.
    pub fn check_dim(&self, n: usize) -> Result<(), ProblemError> {
        match self {
            ProxSpec::Box { lower, .. } if lower.len() != n => {
                Err(ProblemError::Invalid(format!("box has dimension {}, expected {n}", lower.len())))
            }
            ProxSpec::SimplexProduct { blocks } if blocks.iter().sum::<usize>() != n => {
                Err(ProblemError::Invalid(format!("simplex blocks sum to {}, expected {n}", blocks.iter().sum::<usize>())))
            }
            _ => Ok(()),
        }
    }

    /// `argmin_z g(z) + ‖v − z‖² / (2t)`.
    pub fn eval(&self, v: &Point<T>, t: &T) -> Point<T> {
        assert!(*t > T::zero(), "prox step must be positive");
        match self {
            ProxSpec::Zero => v.clone(),
            ProxSpec::L1 { weight } => {
                let thr = t.clone() * weight.clone();
                Point::from_vec_unchecked(v.iter().map(|x| soft_threshold(x, &thr)).collect())
            }
            ProxSpec::Box { lower, upper } => {
                assert_eq!(lower.len(), v.dim(), "dimension mismatch");
                Point::from_vec_unchecked(
                    v.iter()
                        .zip(lower.iter().zip(upper))
                        .map(|(x, (l, u))| T::min_of(T::max_of(x.clone(), l.clone()), u.clone()))
                        .collect(),
                )
            }
            ProxSpec::SimplexProduct { blocks } => {
                assert_eq!(blocks.iter().sum::<usize>(), v.dim(), "dimension mismatch");
                let mut out = Vec::with_capacity(v.dim());
                let mut start = 0;
                for &b in blocks {
                    out.extend(project_simplex(&v.as_slice()[start..start + b]));
                    start += b;
                }
                Point::from_vec_unchecked(out)
            }
            ProxSpec::Custom { eval, .. } => eval(v, t),
        }
    }

    /// `g(z)` for the variants with a closed form; indicators give `None`
    /// outside their set.
    pub fn value(&self, z: &Point<T>) -> Option<T> {
        match self {
            ProxSpec::Zero => Some(T::zero()),
            ProxSpec::L1 { weight } => Some(weight.clone() * z.iter().fold(T::zero(), |s, x| s + x.abs())),
            ProxSpec::Box { lower, upper } => {
                z.iter().zip(lower.iter().zip(upper)).all(|(x, (l, u))| x >= l && x <= u).then(T::zero)
            }
            ProxSpec::SimplexProduct { .. } => Some(T::zero()),
            ProxSpec::Custom { .. } => None,
        }
    }
}

/// `sign(x) · max(|x| − thr, 0)`.
pub fn soft_threshold<T: Scalar>(x: &T, thr: &T) -> T {
    if *x > thr.clone() {
        x.clone() - thr.clone()
    } else if *x < -thr.clone() {
        x.clone() + thr.clone()
    } else {
        T::zero()
    }
}

/// Euclidean projection onto the probability simplex by sorting: find the
/// threshold θ with `Σ max(vᵢ − θ, 0) = 1` and shift.
pub fn project_simplex<T: Scalar>(v: &[T]) -> Vec<T> {
    let mut u = v.to_vec();
    u.sort_by(|a, b| b.partial_cmp(a).unwrap_or(Ordering::Equal));
    let mut cumsum = T::zero();
    let mut theta = T::zero();
    for (j, uj) in u.iter().enumerate() {
        cumsum = cumsum + uj.clone();
        let count = T::from_usize(j + 1).expect("count");
        let candidate = (cumsum.clone() - T::one()) / count;
        if uj.clone() - candidate.clone() > T::zero() {
            theta = candidate;
        }
    }
    v.iter().map(|x| T::max_of(x.clone() - theta.clone(), T::zero())).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::BigRational;

    fn p(v: &[f64]) -> Point<f64> {
        Point::new(v.to_vec()).unwrap()
    }

    #[test]
    fn l1_soft_threshold() {
        let spec = ProxSpec::l1(1.0).unwrap();
        assert_eq!(spec.eval(&p(&[3.0, -0.5, 0.0]), &1.0).as_slice(), &[2.0, 0.0, 0.0]);
        assert_eq!(spec.eval(&p(&[3.0, -2.5]), &0.5).as_slice(), &[2.5, -2.0]);
    }

    #[test]
    fn box_clamp_counterexample_point() {
        let r = BigRational::from_ratio;
        let spec = ProxSpec::boxed(
            vec![r(-7, 1), r(-7, 1), r(1, 1), r(1, 1)],
            vec![r(6, 1), r(6, 1), r(8, 1), r(8, 1)],
        )
        .unwrap();
        let v = Point::new(vec![r(-9, 2), r(-69, 10), r(1, 5), r(32, 5)]).unwrap();
        let out = spec.eval(&v, &r(1, 10));
        assert_eq!(out.as_slice(), &[r(-9, 2), r(-69, 10), r(1, 1), r(32, 5)]);
    }

    #[test]
    fn simplex_example() {
        let spec = ProxSpec::<f64>::simplex_product(vec![3]).unwrap();
        assert_eq!(spec.eval(&p(&[0.5, 0.5, 2.0]), &1.0).as_slice(), &[0.0, 0.0, 1.0]);
        // already on the simplex
        assert_eq!(spec.eval(&p(&[0.2, 0.3, 0.5]), &1.0).as_slice(), &[0.2, 0.3, 0.5]);
    }

    #[test]
    fn invalid_specs() {
        assert!(ProxSpec::l1(-1.0).is_err());
        assert!(ProxSpec::boxed(vec![1.0], vec![0.0]).is_err());
        assert!(ProxSpec::<f64>::simplex_product(vec![2, 0]).is_err());
        assert!(ProxSpec::<f64>::simplex_product(vec![2, 2]).unwrap().check_dim(5).is_err());
    }
}
