//! Scalar abstraction: every numerical routine in this crate is generic over
//! the real field, with [`Complex<T>`](num_complex::Complex) amplitudes on top.
//!
//! `f64` is the type the CLI and the concrete aliases at the crate root use;
//! `f32` is supported for memory-constrained experimentation.

use std::fmt::{Debug, Display};

use num_traits::{Float, FloatConst, FromPrimitive, NumAssign};

/// Real scalar: f32 or f64.
pub trait Real:
    Float + FloatConst + NumAssign + FromPrimitive + Debug + Display + Send + Sync + 'static
{
}

impl Real for f32 {}
impl Real for f64 {}

/// Shorthand for lifting an `f64` literal into the working scalar type.
#[inline]
pub fn lit<T: Real>(x: f64) -> T {
    T::from_f64(x).expect("literal representable in scalar type")
}
