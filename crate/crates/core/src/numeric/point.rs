use std::ops::{Index, IndexMut};

use crate::error::NumericError;
use crate::scalar::{Real, Scalar};

/// A vector in the finite-dimensional ambient space.
///
/// Constructors reject non-finite entries. Arithmetic between points of
/// different dimension is a contract violation and panics.
#[derive(Debug, Clone, PartialEq)]
pub struct Point<T>(Vec<T>);

impl<T: Scalar> Point<T> {
    pub fn new(entries: Vec<T>) -> Result<Self, NumericError> {
        if let Some(i) = entries.iter().position(|v| !v.is_finite_value()) {
            return Err(NumericError::NonFinite(i));
        }
        Ok(Self(entries))
    }

    /// Wraps entries produced by arithmetic without the finiteness scan.
    pub(crate) fn from_vec_unchecked(entries: Vec<T>) -> Self {
        Self(entries)
    }

    pub fn zeros(n: usize) -> Self {
        Self(vec![T::zero(); n])
    }

    pub fn from_f64(entries: &[f64]) -> Result<Self, NumericError> {
        Self::new(entries.iter().map(|&v| T::from_f64_lossy(v)).collect())
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn as_slice(&self) -> &[T] {
        &self.0
    }

    pub fn as_mut_slice(&mut self) -> &mut [T] {
        &mut self.0
    }

    pub fn into_vec(self) -> Vec<T> {
        self.0
    }

    pub fn iter(&self) -> std::slice::Iter<'_, T> {
        self.0.iter()
    }

    pub fn all_finite(&self) -> bool {
        self.0.iter().all(Scalar::is_finite_value)
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|v| v.is_zero())
    }

    #[inline]
    fn check_dim(&self, other: &Self) {
        assert_eq!(self.dim(), other.dim(), "dimension mismatch");
    }

    pub fn add(&self, other: &Self) -> Self {
        self.check_dim(other);
        Self(self.0.iter().zip(&other.0).map(|(a, b)| a.clone() + b.clone()).collect())
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.check_dim(other);
        Self(self.0.iter().zip(&other.0).map(|(a, b)| a.clone() - b.clone()).collect())
    }

    pub fn scale(&self, c: &T) -> Self {
        Self(self.0.iter().map(|a| a.clone() * c.clone()).collect())
    }

    pub fn neg(&self) -> Self {
        Self(self.0.iter().map(|a| -a.clone()).collect())
    }

    /// `self + c * other`
    pub fn axpy(&self, c: &T, other: &Self) -> Self {
        self.check_dim(other);
        Self(self.0.iter().zip(&other.0).map(|(a, b)| a.clone() + c.clone() * b.clone()).collect())
    }

    /// `(1 - t) * self + t * other`
    pub fn lerp(&self, t: &T, other: &Self) -> Self {
        self.check_dim(other);
        let s = T::one() - t.clone();
        Self(self.0.iter().zip(&other.0).map(|(a, b)| s.clone() * a.clone() + t.clone() * b.clone()).collect())
    }

    pub fn dot(&self, other: &Self) -> T {
        self.check_dim(other);
        self.0.iter().zip(&other.0).fold(T::zero(), |acc, (a, b)| acc + a.clone() * b.clone())
    }

    pub fn norm_sq(&self) -> T {
        self.dot(self)
    }

    pub fn dist_sq(&self, other: &Self) -> T {
        self.check_dim(other);
        self.0.iter().zip(&other.0).fold(T::zero(), |acc, (a, b)| {
            let d = a.clone() - b.clone();
            acc + d.clone() * d
        })
    }

    pub fn concat(&self, other: &Self) -> Self {
        let mut v = self.0.clone();
        v.extend_from_slice(&other.0);
        Self(v)
    }

    pub fn to_f64(&self) -> Point<f64> {
        Point(self.0.iter().map(Scalar::to_f64_lossy).collect())
    }
}

impl<T: Real> Point<T> {
    pub fn norm(&self) -> T {
        self.norm_sq().sqrt()
    }

    pub fn dist(&self, other: &Self) -> T {
        self.dist_sq(other).sqrt()
    }

    pub fn max_abs(&self) -> T {
        self.0.iter().fold(T::zero(), |m, v| m.max(v.abs()))
    }
}

impl<T> Index<usize> for Point<T> {
    type Output = T;

    fn index(&self, i: usize) -> &T {
        &self.0[i]
    }
}

impl<T> IndexMut<usize> for Point<T> {
    fn index_mut(&mut self, i: usize) -> &mut T {
        &mut self.0[i]
    }
}

impl<T> AsRef<[T]> for Point<T> {
    fn as_ref(&self) -> &[T] {
        &self.0
    }
}
