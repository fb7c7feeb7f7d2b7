//! Scalar abstraction: the numeric kernels are generic over the floating
//! point type via `Real`, with `f64` as the workhorse instantiation.

use num_traits::float::FloatConst;
use num_traits::{Float, FromPrimitive, ToPrimitive};

/// Floating point scalar usable by every numeric routine in this crate.
///
/// `f64` is the intended production type; `f32` is supported for the
/// dimensionless kernels but underflows on nanometre-scale pressure
/// prefactors (`s^4` reaches the subnormal range below ~1e-9 m).
pub trait Real:
    Float + FloatConst + FromPrimitive + ToPrimitive + core::fmt::Debug + core::fmt::Display + Send + Sync + 'static
{
}

impl Real for f32 {}
impl Real for f64 {}

/// Converts an `f64` literal into the working scalar type.
#[inline]
pub fn real<S: Real>(x: f64) -> S {
    S::from_f64(x).expect("f64 constant must convert into the scalar type")
}

/// Lossy view of a scalar as `f64`, used for diagnostics and output.
#[inline]
pub fn as_f64<S: Real>(x: S) -> f64 {
    x.to_f64().unwrap_or(f64::NAN)
}
