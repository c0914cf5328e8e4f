//! Scalar abstraction shared by every module.

use nalgebra as na;
use num_traits as nt;

/// Real scalar usable by the geometry and linear-algebra code.
///
/// Implemented for `f32` and `f64`. Numerical tolerances quoted in the docs
/// are for `f64`; [`tol`] widens them to the working precision of `T`.
pub trait Real:
    na::RealField
    + Copy
    + nt::FromPrimitive
    + nt::ToPrimitive
    + nt::FloatConst
    + Default
    + std::fmt::Display
    + Send
    + Sync
{
}

impl Real for f32 {}
impl Real for f64 {}

/// Complex scalar over `T`.
pub type Cx<T> = na::Complex<T>;

/// Convert an `f64` literal into `T`.
#[inline]
pub fn lit<T: Real>(x: f64) -> T {
    T::from_f64(x).expect("f64 literal representable in T")
}

/// Convert `T` back to `f64` (used for reporting and serialization).
#[inline]
pub fn to_f64<T: Real>(x: T) -> f64 {
    x.to_f64().unwrap_or(f64::NAN)
}

/// A tolerance stated for `f64`, floored at a few hundred ulps of `T`.
#[inline]
pub fn tol<T: Real>(x: f64) -> T {
    let floor = 500.0 * to_f64(T::default_epsilon());
    lit(x.max(floor))
}

#[inline]
pub fn cx<T: Real>(re: T, im: T) -> Cx<T> {
    Cx::new(re, im)
}

/// `|z|` for complex `z`.
#[inline]
pub fn cabs<T: Real>(z: Cx<T>) -> T {
    (z.re * z.re + z.im * z.im).sqrt()
}

/// Largest `|z_k|` of a complex vector or matrix.
pub fn camax<'a, T: Real + 'a>(it: impl IntoIterator<Item = &'a Cx<T>>) -> T {
    it.into_iter().fold(T::zero(), |m, z| m.max(cabs(*z)))
}
