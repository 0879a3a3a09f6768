//! Scalar abstraction shared by the float and exact-rational paths.
//!
//! [`Scalar`] is an ordered field: everything the extragradient steps, the
//! proximal maps in the library and the Lyapunov function need. [`Real`] adds
//! square roots and the rest of [`num_traits::Float`], which the norms,
//! spectral estimates and line searches require.

use std::fmt::{Debug, Display};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Float, FromPrimitive, Num, Signed, ToPrimitive};

pub trait Scalar:
    Clone + PartialOrd + Debug + Display + Num + Signed + FromPrimitive + ToPrimitive + Send + Sync + 'static
{
    /// `false` for NaN and infinities; exact types are always finite.
    fn is_finite_value(&self) -> bool;

    fn from_f64_lossy(v: f64) -> Self;

    fn to_f64_lossy(&self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }

    fn from_ratio(num: i64, den: i64) -> Self {
        Self::from_i64(num).expect("integer conversion") / Self::from_i64(den).expect("integer conversion")
    }

    fn max_of(a: Self, b: Self) -> Self {
        if b > a {
            b
        } else {
            a
        }
    }

    fn min_of(a: Self, b: Self) -> Self {
        if b < a {
            b
        } else {
            a
        }
    }
}

macro_rules! impl_float_scalar {
    ($t:ty) => {
        impl Scalar for $t {
            fn is_finite_value(&self) -> bool {
                <$t>::is_finite(*self)
            }

            fn from_f64_lossy(v: f64) -> Self {
                v as $t
            }
        }
    };
}

impl_float_scalar!(f32);
impl_float_scalar!(f64);

impl Scalar for BigRational {
    fn is_finite_value(&self) -> bool {
        true
    }

    /// Exact binary expansion of `v`; panics on non-finite input.
    fn from_f64_lossy(v: f64) -> Self {
        BigRational::from_float(v).expect("finite float")
    }

    fn from_ratio(num: i64, den: i64) -> Self {
        BigRational::new(BigInt::from(num), BigInt::from(den))
    }
}

/// Floating-point scalars.
pub trait Real: Scalar + Float + Copy {}

impl<T: Scalar + Float + Copy> Real for T {}

/// Converts an `f64` literal into `T`.
#[inline]
pub fn lit<T: Scalar>(v: f64) -> T {
    T::from_f64_lossy(v)
}
