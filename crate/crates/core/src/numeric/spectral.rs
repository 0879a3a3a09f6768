use crate::error::NumericError;
use crate::numeric::{DenseMatrix, LinearOperator, Point};
use crate::scalar::Real;

/// Default stopping tolerance for the power iterations.
pub const POWER_TOL: f64 = 1e-10;
/// Default iteration cap for the power iterations.
pub const POWER_MAX_ITER: usize = 10_000;

fn unit_start<T: Real>(n: usize, variant: usize) -> Point<T> {
    let raw: Vec<T> = match variant {
        0 => vec![T::one(); n],
        1 => (0..n).map(|i| T::from_usize(i + 1).unwrap()).collect(),
        v => (0..n).map(|i| if i == (v - 2) % n { T::one() } else { T::zero() }).collect(),
    };
    let p = Point::from_vec_unchecked(raw);
    let nrm = p.norm();
    p.scale(&(T::one() / nrm))
}

/// Largest singular value of `m` by power iteration on `MᵀM`.
///
/// Starts from the normalized all-ones vector so repeated calls agree bit for
/// bit. If that start lies in the null space the iteration restarts from a
/// ramp and then from the coordinate vectors.
pub fn spectral_norm<T: Real, M: LinearOperator<T> + ?Sized>(
    m: &M,
    tol: T,
    max_iter: usize,
) -> Result<T, NumericError> {
    let n = m.ncols();
    if n == 0 || m.nrows() == 0 {
        return Err(NumericError::ZeroMatrix);
    }
    let mut start = None;
    for variant in 0..n + 2 {
        let v = unit_start::<T>(n, variant);
        if !m.apply(&v).is_zero() {
            start = Some(v);
            break;
        }
    }
    let mut v = start.ok_or(NumericError::ZeroMatrix)?;
    let mut lambda = m.apply(&v).norm_sq();
    for _ in 0..max_iter {
        let w = m.apply_transpose(&m.apply(&v));
        let wn = w.norm();
        if wn.is_zero() {
            return Err(NumericError::ZeroMatrix);
        }
        v = w.scale(&(T::one() / wn));
        let next = m.apply(&v).norm_sq();
        if (next - lambda).abs() <= tol * next {
            return Ok(next.sqrt());
        }
        lambda = next;
    }
    Err(NumericError::NoConvergence(max_iter))
}

/// Smallest eigenvalue of a symmetric matrix by the shifted power method:
/// with `c = ‖S‖`, the dominant eigenvalue of `cI − S` is `c − λ_min(S)`.
pub fn symmetric_min_eigenvalue<T: Real>(s: &DenseMatrix<T>, tol: T, max_iter: usize) -> Result<T, NumericError> {
    assert!(s.is_square(), "symmetric matrix expected");
    let n = s.rows();
    let c = match spectral_norm(s, tol, max_iter) {
        Ok(c) => c,
        Err(NumericError::ZeroMatrix) => return Ok(T::zero()),
        Err(e) => return Err(e),
    };
    let shifted = |v: &Point<T>| v.scale(&c).sub(&s.matvec(v));
    let mut v = unit_start::<T>(n, 0);
    let mut mu = v.dot(&shifted(&v));
    for _ in 0..max_iter {
        let w = shifted(&v);
        let wn = w.norm();
        if wn.is_zero() {
            // S = cI on the current subspace.
            return Ok(c - mu);
        }
        v = w.scale(&(T::one() / wn));
        let next = v.dot(&shifted(&v));
        if (next - mu).abs() <= tol * c.max(next.abs()) {
            return Ok(c - next);
        }
        mu = next;
    }
    Err(NumericError::NoConvergence(max_iter))
}

/// Largest singular value of a dense matrix from a full singular value
/// decomposition.
///
/// Power iteration stalls when the top singular values cluster, as they do
/// for nearly skew block operators; this path has no such failure mode.
pub fn dense_spectral_norm(m: &DenseMatrix<f64>) -> f64 {
    to_nalgebra(m).singular_values().max()
}

/// Eigenvalues of a symmetric dense matrix in increasing order.
pub fn symmetric_eigenvalues(s: &DenseMatrix<f64>) -> Vec<f64> {
    assert!(s.is_square(), "symmetric matrix expected");
    let mut ev: Vec<f64> = to_nalgebra(s).symmetric_eigenvalues().iter().copied().collect();
    ev.sort_by(f64::total_cmp);
    ev
}

fn to_nalgebra(m: &DenseMatrix<f64>) -> nalgebra::DMatrix<f64> {
    nalgebra::DMatrix::from_row_slice(m.rows(), m.cols(), m.data())
}
