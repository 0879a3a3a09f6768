use super::{Direction, DirectionProvider, DirectionRequest};
use crate::error::{NumericError, SolverError};
use crate::numeric::linalg::Lu;
use crate::numeric::{DenseMatrix, Point};
use crate::problems::ProblemInstance;
use crate::scalar::{lit, Real};

#[derive(Debug, Clone, PartialEq)]
pub struct NewtonStep<T> {
    pub d: Point<T>,
    /// `F(z) = 0`: no regularization is possible and `d = 0`.
    pub at_solution: bool,
}

/// Solves `(c‖F(z)‖ I + DF(z)) d = −F(z)`, evaluating `F(z)` once.
pub fn newton_reg_direction<T: Real>(inst: &ProblemInstance<T>, z: &Point<T>, c: T) -> Result<NewtonStep<T>, SolverError> {
    let jac = inst
        .jacobian(z)
        .ok_or_else(|| SolverError::Config(format!("instance `{}` has no Jacobian", inst.name())))?;
    let fz = inst.eval_f(z);
    Ok(newton_step_from(&jac, &fz, c)?)
}

/// The regularized Newton step for a known Jacobian and operator value.
pub fn newton_step_from<T: Real>(jac: &DenseMatrix<T>, fz: &Point<T>, c: T) -> Result<NewtonStep<T>, NumericError> {
    assert!(c > T::zero(), "regularization constant must be positive");
    let nf = fz.norm();
    if nf.is_zero() {
        return Ok(NewtonStep { d: Point::zeros(fz.dim()), at_solution: true });
    }
    let shift = DenseMatrix::identity(fz.dim()).scale(&(c * nf));
    let lu = Lu::factor(&jac.add(&shift))?;
    let d = Point::new(lu.solve(fz.neg().as_slice()))?;
    Ok(NewtonStep { d, at_solution: false })
}

/// Regularized Newton directions with `rₖ = c‖F(zᵏ)‖`.
///
/// Uses the residual handed to it as `F(zᵏ)`, so it is meant for `g = 0`.
#[derive(Debug, Clone)]
pub struct NewtonDirections {
    c: f64,
    fallbacks: usize,
}

impl NewtonDirections {
    pub fn new(c: f64) -> Self {
        assert!(c > 0.0, "regularization constant must be positive");
        Self { c, fallbacks: 0 }
    }

    pub fn fallbacks(&self) -> usize {
        self.fallbacks
    }
}

impl Default for NewtonDirections {
    fn default() -> Self {
        Self::new(1.0)
    }
}

impl<T: Real> DirectionProvider<T> for NewtonDirections {
    fn name(&self) -> &str {
        "newton"
    }

    fn direction(&mut self, request: &DirectionRequest<'_, T>) -> Direction<T> {
        let step = request
            .instance
            .jacobian(request.z)
            .ok_or(NumericError::Singular)
            .and_then(|jac| newton_step_from(&jac, request.r, lit::<T>(self.c)));
        match step {
            Ok(s) => Direction::plain(s.d),
            Err(_) => {
                self.fallbacks += 1;
                Direction::fallback(request.r)
            }
        }
    }

    fn reset(&mut self) {
        self.fallbacks = 0;
    }
}
