//! Extragradient-type solvers for monotone inclusions `0 ∈ F(z) + ∂g(z)`,
//! with Lyapunov-guided line searches that accept arbitrary candidate
//! directions while keeping the extragradient convergence guarantees.
//!
//! Numeric kernels are generic over [`Scalar`], which covers `f32`, `f64`
//! and exact rationals. Solvers that take square roots require [`Real`].

pub mod directions;
pub mod error;
pub mod lyapunov;
pub mod numeric;
pub mod problems;
pub mod scalar;
pub mod solvers;
pub mod verify;

pub use error::{NumericError, ProblemError, SolverError, VerifyError};
pub use numeric::{DenseMatrix, LinearOperator, Point, SparseMatrix};
pub use problems::{EvalCounts, ProblemInstance, ProxSpec};
pub use scalar::{Real, Scalar};

/// Exact arbitrary-precision rational.
pub type Rational = num_rational::BigRational;

pub type Point64 = Point<f64>;
pub type Point32 = Point<f32>;
pub type RationalPoint = Point<Rational>;
pub type Matrix64 = DenseMatrix<f64>;
pub type RationalMatrix = DenseMatrix<Rational>;
pub type Instance64 = ProblemInstance<f64>;
pub type RationalInstance = ProblemInstance<Rational>;
