//! Dense and sparse linear algebra used throughout the crate.

mod dense;
pub mod linalg;
mod point;
mod sparse;
pub mod spectral;

pub use dense::DenseMatrix;
pub use point::Point;
pub use sparse::SparseMatrix;
pub use spectral::{dense_spectral_norm, spectral_norm, symmetric_eigenvalues, symmetric_min_eigenvalue};

use crate::scalar::Scalar;

/// Anything that can be applied to a vector together with its adjoint.
pub trait LinearOperator<T: Scalar> {
    fn nrows(&self) -> usize;
    fn ncols(&self) -> usize;
    fn apply(&self, v: &Point<T>) -> Point<T>;
    fn apply_transpose(&self, v: &Point<T>) -> Point<T>;
}
