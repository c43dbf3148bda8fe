//! Floating-point scalar abstraction shared by the dense linear algebra and
//! the norm engines.

use std::fmt::{Debug, Display};
use std::iter::Sum;
use std::ops::{AddAssign, DivAssign, MulAssign, SubAssign};

use num_traits::{Float, FromPrimitive, ToPrimitive};

/// Real scalar usable by [`DenseMatrix`](crate::DenseMatrix) and the norm
/// engines: `f32` or `f64`.
pub trait Scalar:
    Float
    + FromPrimitive
    + ToPrimitive
    + AddAssign
    + SubAssign
    + MulAssign
    + DivAssign
    + Sum
    + Debug
    + Display
    + Default
    + Send
    + Sync
    + 'static
{
    /// Lossy conversion from `f64`; panics only on NaN-producing types, which
    /// neither implementation is.
    #[inline]
    fn of(x: f64) -> Self {
        Self::from_f64(x).expect("f64 is representable")
    }

    #[inline]
    fn of_usize(n: usize) -> Self {
        Self::from_usize(n).expect("usize is representable")
    }

    #[inline]
    fn as_f64(self) -> f64 {
        self.to_f64().expect("scalar converts to f64")
    }

    /// `sign(x) * |x|^e`, with the convention `sign(0) = 0`.
    #[inline]
    fn signed_pow(self, e: Self) -> Self {
        if self == Self::zero() {
            Self::zero()
        } else {
            self.signum() * self.abs().powf(e)
        }
    }
}

impl Scalar for f32 {}
impl Scalar for f64 {}
