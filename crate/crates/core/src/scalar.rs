// SPDX-License-Identifier: Apache-2.0

//! Scalar abstraction shared by every solver in the crate.
//!
//! All numerics are written against [`Real`], which is implemented for
//! `f32` and `f64`. Tolerances that only make sense relative to the
//! precision of the type live here as associated functions.

use std::fmt::{Debug, Display};
use std::iter::Sum;

use num_traits::{Float, FloatConst, FromPrimitive, NumAssign, ToPrimitive};

/// Floating-point scalar used throughout the crate: `f32` or `f64`.
pub trait Real:
    Float
    + FloatConst
    + FromPrimitive
    + ToPrimitive
    + NumAssign
    + Sum
    + Default
    + Debug
    + Display
    + Send
    + Sync
    + 'static
{
    /// Eigenvalue real parts must lie below `-hurwitz_margin()` for a drift
    /// matrix to count as stable.
    fn hurwitz_margin() -> Self;

    /// Relative residual bound accepted from the Lyapunov solver.
    fn lyapunov_tolerance() -> Self;

    /// Pivot magnitude (relative to the largest entry) below which a dense
    /// linear system is declared singular.
    fn singular_pivot() -> Self;
}

impl Real for f64 {
    fn hurwitz_margin() -> Self {
        1e-12
    }

    fn lyapunov_tolerance() -> Self {
        1e-10
    }

    fn singular_pivot() -> Self {
        1e-14
    }
}

impl Real for f32 {
    fn hurwitz_margin() -> Self {
        1e-6
    }

    fn lyapunov_tolerance() -> Self {
        1e-4
    }

    fn singular_pivot() -> Self {
        1e-7
    }
}

/// Converts an `f64` literal into `T`.
///
/// Every `Real` type can represent (possibly with rounding) any finite `f64`,
/// so this never fails for the literals used in the crate.
#[inline]
pub fn lit<T: Real>(x: f64) -> T {
    T::from_f64(x).expect("f64 literal representable in scalar type")
}

/// Converts a count into `T`.
#[inline]
pub fn count<T: Real>(n: usize) -> T {
    T::from_usize(n).expect("count representable in scalar type")
}
