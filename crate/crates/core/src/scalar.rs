//! Scalar abstraction shared by the channel, decoders and MI analysis.

use std::fmt::{Debug, Display};

use num_traits::{Float, FromPrimitive, ToPrimitive};

/// Floating-point type usable for LLR arithmetic.
///
/// Implemented for `f32` and `f64`. Constants are exposed through
/// [`Real::lit`] so generic code can write `T::lit(30.0)`.
pub trait Real:
    Float + FromPrimitive + ToPrimitive + Debug + Display + Default + Send + Sync + 'static
{
    /// Converts an `f64` literal, panicking only if the type cannot represent it at all.
    #[inline]
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("literal representable in scalar type")
    }

    #[inline]
    fn as_f64(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

impl Real for f32 {}

impl Real for f64 {}

/// Saturation bound applied to every LLR in the channel and decoders.
pub const LLR_CLAMP: f64 = 30.0;

/// Clamps `x` into `[-LLR_CLAMP, LLR_CLAMP]`; NaN maps to zero.
#[inline]
pub fn clamp_llr<T: Real>(x: T) -> T {
    let bound = T::lit(LLR_CLAMP);
    if x.is_nan() {
        T::zero()
    } else if x > bound {
        bound
    } else if x < -bound {
        -bound
    } else {
        x
    }
}
