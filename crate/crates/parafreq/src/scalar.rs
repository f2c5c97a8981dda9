//! Scalar abstraction for the numerical core.
//!
//! Everything downstream is generic over [`Real`], so the same code runs in
//! `f32` or `f64`. The crate root exports `f64` aliases, which is what the
//! CLI and the acceptance tolerances assume.

use std::fmt;
use std::iter::Sum;

/// Floating-point scalar: `f32` or `f64`.
pub trait Real:
    num_traits::Float
    + num_traits::FloatConst
    + num_traits::FromPrimitive
    + Sum
    + fmt::Debug
    + fmt::Display
    + fmt::LowerExp
    + Send
    + Sync
    + 'static
{
    /// Lift an `f64` literal into the scalar type.
    fn of(x: f64) -> Self {
        Self::from_f64(x).expect("finite literal")
    }

    /// Lift a count into the scalar type.
    fn of_usize(n: usize) -> Self {
        Self::from_usize(n).expect("count fits in scalar")
    }

    fn two() -> Self {
        Self::one() + Self::one()
    }

    fn half() -> Self {
        Self::one() / Self::two()
    }
}

impl Real for f32 {}
impl Real for f64 {}
