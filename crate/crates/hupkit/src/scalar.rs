//! Generic floating-point scalar used by the whole crate.
//!
//! All numerical kernels are written against [`Real`] so they work for
//! `f32` and `f64` alike; concrete aliases at the crate root fix `f64`
//! as the default precision.

use std::fmt::{Debug, Display};
use std::iter::Sum;
use std::ops::{AddAssign, DivAssign, MulAssign, SubAssign};

use num_traits::{Float, FloatConst, FromPrimitive, ToPrimitive};

/// Floating-point scalar: `f32` or `f64`.
pub trait Real:
    Float
    + FloatConst
    + FromPrimitive
    + ToPrimitive
    + AddAssign
    + SubAssign
    + MulAssign
    + DivAssign
    + Sum<Self>
    + Debug
    + Display
    + Send
    + Sync
    + 'static
{
    /// Convert a literal, panicking only for non-representable values
    /// (every literal used in this crate fits both `f32` and `f64`).
    fn of(x: f64) -> Self {
        Self::from_f64(x).expect("literal not representable in scalar type")
    }

    /// Convert a count.
    fn of_usize(n: usize) -> Self {
        Self::from_usize(n).expect("count not representable in scalar type")
    }

    /// Convert a small signed integer.
    fn of_i64(n: i64) -> Self {
        Self::from_i64(n).expect("integer not representable in scalar type")
    }

    /// Lossy view as `f64`, used only for diagnostics.
    fn as_f64(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

impl Real for f32 {}
impl Real for f64 {}
