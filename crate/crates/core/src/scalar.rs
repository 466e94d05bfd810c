//! Floating-point scalar abstraction shared by every numeric module.

use std::fmt::{Debug, Display};
use std::iter::Sum;

use num_traits::{Float, FloatConst, FromPrimitive, ToPrimitive};

/// Real scalar backing the complex arithmetic (`f32` or `f64`).
///
/// The associated constants carry precision-dependent defaults so that
/// configuration types can be built generically.
pub trait Real:
    Float + FloatConst + FromPrimitive + ToPrimitive + Debug + Display + Default + Sum + Send + Sync + 'static
{
    /// Default matrix-equality tolerance.
    const DEFAULT_TOL: f64;
    /// Decimal digits kept when hashing matrix entries.
    const KEY_DIGITS: u32;
    /// Loose tolerance for numerically derived identities (orthogonality, idempotency).
    const CHECK_TOL: f64;
    /// Largest accepted gap between a computed irrep degree and its rounded value.
    const DEGREE_TOL: f64;

    /// Converts an `f64` literal.
    #[inline]
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("f64 literal is representable")
    }

    #[inline]
    fn as_f64(self) -> f64 {
        self.to_f64().expect("real is representable as f64")
    }
}

impl Real for f64 {
    const DEFAULT_TOL: f64 = 1e-9;
    const KEY_DIGITS: u32 = 9;
    const CHECK_TOL: f64 = 1e-8;
    const DEGREE_TOL: f64 = 1e-4;
}

impl Real for f32 {
    const DEFAULT_TOL: f64 = 1e-5;
    const KEY_DIGITS: u32 = 4;
    const CHECK_TOL: f64 = 1e-4;
    const DEGREE_TOL: f64 = 1e-2;
}
