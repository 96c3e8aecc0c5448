//! Scalar abstraction for the lattice machinery.
//!
//! All core math is generic over the real scalar; `f64` is the working
//! precision for everything quantitative (the tolerances in the test suite
//! only make sense there), `f32` compiles and is occasionally handy for
//! memory-bound experiments.

use std::fmt::{Debug, Display, LowerExp};
use std::iter::{Product, Sum};

use num_traits::{Float, FloatConst, FromPrimitive, ToPrimitive};
use rustfft::FftNum;

/// Real floating-point scalar: `f32` or `f64`.
pub trait Real:
    Float
    + FloatConst
    + FromPrimitive
    + ToPrimitive
    + FftNum
    + Display
    + LowerExp
    + Debug
    + Sum<Self>
    + Product<Self>
    + 'static
{
}

impl Real for f32 {}
impl Real for f64 {}

/// Shorthand for converting an `f64` literal into the working scalar.
#[inline]
pub fn cast<T: Real>(x: f64) -> T {
    T::from_f64(x).expect("f64 literal representable in scalar type")
}

/// Convert a usize (grid extent, index) into the working scalar.
#[inline]
pub fn cast_usize<T: Real>(n: usize) -> T {
    T::from_usize(n).expect("usize representable in scalar type")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn casts_round_trip() {
        let x: f64 = cast::<f64>(0.5);
        assert_eq!(x, 0.5);
        let y: f32 = cast::<f32>(1.25);
        assert_eq!(y, 1.25f32);
        assert_eq!(cast_usize::<f64>(63), 63.0);
    }
}
