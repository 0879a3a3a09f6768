use std::fmt;
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::Arc;

use crate::error::ProblemError;
use crate::numeric::{DenseMatrix, Point};
use crate::problems::ProxSpec;
use crate::scalar::{lit, Real, Scalar};

pub type OperatorFn<T> = Arc<dyn Fn(&Point<T>) -> Point<T> + Send + Sync>;
pub type JacobianFn<T> = Arc<dyn Fn(&Point<T>) -> DenseMatrix<T> + Send + Sync>;
pub type ObjectiveFn<T> = Arc<dyn Fn(&Point<T>) -> T + Send + Sync>;

/// Counts of operator and proximal evaluations.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct EvalCounts {
    pub f_evals: u64,
    pub prox_evals: u64,
}

impl EvalCounts {
    pub fn total(&self) -> u64 {
        self.f_evals + self.prox_evals
    }

    pub fn since(&self, start: EvalCounts) -> EvalCounts {
        EvalCounts { f_evals: self.f_evals - start.f_evals, prox_evals: self.prox_evals - start.prox_evals }
    }
}

#[derive(Debug, Default)]
struct Counters {
    f: AtomicU64,
    prox: AtomicU64,
}

/// A monotone inclusion `0 ∈ F(z) + ∂g(z)`.
///
/// [`eval_f`](Self::eval_f) and [`prox`](Self::prox) are the counted entry
/// points used by solvers. The `*_quiet` variants serve diagnostics that must
/// not show up in evaluation budgets. Cloning an instance shares the
/// evaluators and starts fresh counters.
pub struct ProblemInstance<T: Scalar> {
    name: String,
    dim: usize,
    operator: OperatorFn<T>,
    prox: ProxSpec<T>,
    lipschitz: T,
    strong_monotonicity: Option<T>,
    known_solution: Option<Point<T>>,
    jacobian: Option<JacobianFn<T>>,
    objective: Option<ObjectiveFn<T>>,
    counters: Counters,
}

impl<T: Scalar> Clone for ProblemInstance<T> {
    fn clone(&self) -> Self {
        Self {
            name: self.name.clone(),
            dim: self.dim,
            operator: Arc::clone(&self.operator),
            prox: self.prox.clone(),
            lipschitz: self.lipschitz.clone(),
            strong_monotonicity: self.strong_monotonicity.clone(),
            known_solution: self.known_solution.clone(),
            jacobian: self.jacobian.clone(),
            objective: self.objective.clone(),
            counters: Counters::default(),
        }
    }
}

impl<T: Scalar> fmt::Debug for ProblemInstance<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ProblemInstance")
            .field("name", &self.name)
            .field("dim", &self.dim)
            .field("prox", &self.prox)
            .field("lipschitz", &self.lipschitz)
            .field("counts", &self.counts())
            .finish_non_exhaustive()
    }
}

impl<T: Scalar> ProblemInstance<T> {
    pub fn new(
        name: impl Into<String>,
        dim: usize,
        operator: impl Fn(&Point<T>) -> Point<T> + Send + Sync + 'static,
        prox: ProxSpec<T>,
        lipschitz: T,
    ) -> Result<Self, ProblemError> {
        if lipschitz <= T::zero() || !lipschitz.is_finite_value() {
            return Err(ProblemError::Invalid(format!("Lipschitz constant must be positive, got {lipschitz}")));
        }
        prox.check_dim(dim)?;
        Ok(Self {
            name: name.into(),
            dim,
            operator: Arc::new(operator),
            prox,
            lipschitz,
            strong_monotonicity: None,
            known_solution: None,
            jacobian: None,
            objective: None,
            counters: Counters::default(),
        })
    }

    /// `F(z) = M z + b` with constant Jacobian `M`.
    pub fn affine(
        name: impl Into<String>,
        matrix: DenseMatrix<T>,
        offset: Point<T>,
        prox: ProxSpec<T>,
        lipschitz: T,
    ) -> Result<Self, ProblemError> {
        if !matrix.is_square() || matrix.rows() != offset.dim() {
            return Err(ProblemError::Invalid("affine operator needs a square matrix matching the offset".into()));
        }
        let dim = offset.dim();
        let m = Arc::new(matrix);
        let m_op = Arc::clone(&m);
        let inst = Self::new(name, dim, move |z: &Point<T>| m_op.matvec(z).add(&offset), prox, lipschitz)?;
        Ok(inst.with_jacobian(move |_| (*m).clone()))
    }

    pub fn with_jacobian(mut self, jac: impl Fn(&Point<T>) -> DenseMatrix<T> + Send + Sync + 'static) -> Self {
        self.jacobian = Some(Arc::new(jac));
        self
    }

    pub fn with_objective(mut self, obj: impl Fn(&Point<T>) -> T + Send + Sync + 'static) -> Self {
        self.objective = Some(Arc::new(obj));
        self
    }

    pub fn with_strong_monotonicity(mut self, mu: T) -> Self {
        self.strong_monotonicity = Some(mu);
        self
    }

    /// Attaches a solution without checking it.
    pub fn with_solution_unchecked(mut self, z: Point<T>) -> Self {
        self.known_solution = Some(z);
        self
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn prox_spec(&self) -> &ProxSpec<T> {
        &self.prox
    }

    pub fn lipschitz(&self) -> &T {
        &self.lipschitz
    }

    pub fn strong_monotonicity(&self) -> Option<&T> {
        self.strong_monotonicity.as_ref()
    }

    pub fn known_solution(&self) -> Option<&Point<T>> {
        self.known_solution.as_ref()
    }

    pub fn has_jacobian(&self) -> bool {
        self.jacobian.is_some()
    }

    pub fn jacobian(&self, z: &Point<T>) -> Option<DenseMatrix<T>> {
        self.jacobian.as_ref().map(|j| j(z))
    }

    pub fn objective(&self, z: &Point<T>) -> Option<T> {
        self.objective.as_ref().map(|f| f(z))
    }

    pub fn has_objective(&self) -> bool {
        self.objective.is_some()
    }

    /// Counted evaluation of `F`.
    pub fn eval_f(&self, z: &Point<T>) -> Point<T> {
        self.counters.f.fetch_add(1, Ordering::Relaxed);
        self.eval_f_quiet(z)
    }

    /// Counted evaluation of `prox_{t g}`.
    pub fn prox(&self, v: &Point<T>, t: &T) -> Point<T> {
        self.counters.prox.fetch_add(1, Ordering::Relaxed);
        self.prox_quiet(v, t)
    }

    pub fn eval_f_quiet(&self, z: &Point<T>) -> Point<T> {
        assert_eq!(z.dim(), self.dim, "dimension mismatch");
        (self.operator)(z)
    }

    pub fn prox_quiet(&self, v: &Point<T>, t: &T) -> Point<T> {
        self.prox.eval(v, t)
    }

    pub fn counts(&self) -> EvalCounts {
        EvalCounts { f_evals: self.counters.f.load(Ordering::Relaxed), prox_evals: self.counters.prox.load(Ordering::Relaxed) }
    }

    pub fn reset_counts(&self) {
        self.counters.f.store(0, Ordering::Relaxed);
        self.counters.prox.store(0, Ordering::Relaxed);
    }
}

impl<T: Real> ProblemInstance<T> {
    /// Attaches a known solution. For `g = 0` the residual must satisfy
    /// `‖F(z★)‖ ≤ 1e-8 (1 + ‖F(0)‖)`.
    pub fn with_known_solution(self, z: Point<T>) -> Result<Self, ProblemError> {
        if z.dim() != self.dim {
            return Err(ProblemError::Invalid("solution has the wrong dimension".into()));
        }
        if self.prox.is_zero() {
            let r = self.eval_f_quiet(&z).norm();
            let f0 = self.eval_f_quiet(&Point::zeros(self.dim)).norm();
            if r > lit::<T>(1e-8) * (T::one() + f0) {
                return Err(ProblemError::Invalid(format!("‖F(z★)‖ = {r} is not small")));
            }
        }
        Ok(self.with_solution_unchecked(z))
    }
}
