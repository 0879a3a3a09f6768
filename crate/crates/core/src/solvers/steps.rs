use crate::error::NumericError;
use crate::numeric::linalg::Lu;
use crate::numeric::{DenseMatrix, Point};
use crate::problems::ProblemInstance;
use crate::scalar::Scalar;

/// One two-stage step together with the operator values it used.
#[derive(Debug, Clone, PartialEq)]
pub struct StepOutput<T> {
    pub zbar: Point<T>,
    pub z_next: Point<T>,
    pub fz: Point<T>,
    pub fzbar: Point<T>,
}

/// `z̄ = prox_{γg}(z − γF(z))`, `z⁺ = prox_{γg}(z − γF(z̄))`.
pub fn eg_step<T: Scalar>(inst: &ProblemInstance<T>, gamma: &T, z: &Point<T>) -> StepOutput<T> {
    let ng = -gamma.clone();
    let fz = inst.eval_f(z);
    let zbar = inst.prox(&z.axpy(&ng, &fz), gamma);
    let fzbar = inst.eval_f(&zbar);
    let z_next = inst.prox(&z.axpy(&ng, &fzbar), gamma);
    StepOutput { zbar, z_next, fz, fzbar }
}

pub fn step_eg<T: Scalar>(inst: &ProblemInstance<T>, gamma: &T, z: &Point<T>) -> (Point<T>, Point<T>) {
    let s = eg_step(inst, gamma, z);
    (s.zbar, s.z_next)
}

/// `z̄ = prox_{γg}(z − γF(z))`, `z⁺ = z̄ + γ(F(z) − F(z̄))`.
///
/// With `g = 0` the second stage is evaluated as `z − γF(z̄)`, the same
/// expression the extragradient step uses, so both methods agree bit for bit.
pub fn tseng_step<T: Scalar>(inst: &ProblemInstance<T>, gamma: &T, z: &Point<T>) -> StepOutput<T> {
    let ng = -gamma.clone();
    let fz = inst.eval_f(z);
    let zbar = inst.prox(&z.axpy(&ng, &fz), gamma);
    let fzbar = inst.eval_f(&zbar);
    let z_next = if inst.prox_spec().is_zero() {
        z.axpy(&ng, &fzbar)
    } else {
        zbar.axpy(gamma, &fz.sub(&fzbar))
    };
    StepOutput { zbar, z_next, fz, fzbar }
}

pub fn step_tseng<T: Scalar>(inst: &ProblemInstance<T>, gamma: &T, z: &Point<T>) -> (Point<T>, Point<T>) {
    let s = tseng_step(inst, gamma, z);
    (s.zbar, s.z_next)
}

/// Extragradient with the linear resolvent `(I + γT)⁻¹` in place of a prox,
/// for linear `F(z) = F_mat z`.
pub fn step_resolvent_eg<T: Scalar>(
    f_mat: &DenseMatrix<T>,
    t_mat: &DenseMatrix<T>,
    gamma: &T,
    z: &Point<T>,
) -> Result<(Point<T>, Point<T>), NumericError> {
    let n = z.dim();
    let lu = Lu::factor(&DenseMatrix::identity(n).add(&t_mat.scale(gamma)))?;
    let ng = -gamma.clone();
    let resolve = |v: Point<T>| Point::new(lu.solve(v.as_slice()));
    let zbar = resolve(z.axpy(&ng, &f_mat.matvec(z)))?;
    let z_next = resolve(z.axpy(&ng, &f_mat.matvec(&zbar)))?;
    Ok((zbar, z_next))
}
