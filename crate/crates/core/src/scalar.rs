//! Scalar abstraction shared by every computation in the crate.

use std::fmt::{Debug, Display};

use num_traits::{Float, FromPrimitive, ToPrimitive};

/// Real scalar the noise formulas are evaluated in.
///
/// Implemented for `f32` and `f64`. Anything that is a `Float` with lossless
/// construction from small literals can opt in.
pub trait Scalar: Float + FromPrimitive + ToPrimitive + Debug + Display + Send + Sync + 'static {
    /// Converts an `f64` literal into this scalar type.
    fn lit(v: f64) -> Self {
        Self::from_f64(v).expect("f64 literal representable in scalar type")
    }

    /// Lossy view as `f64`, used for error reporting.
    fn as_f64(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

impl Scalar for f32 {}
impl Scalar for f64 {}

/// Relative closeness `|a - b| <= tol * max(|a|, |b|)`, with exact equality
/// always accepted (covers zeros and matching infinities).
pub fn rel_close<T: Scalar>(a: T, b: T, tol: T) -> bool {
    if a == b {
        return true;
    }
    let scale = a.abs().max(b.abs());
    (a - b).abs() <= tol * scale
}

/// Relative difference `|a - b| / max(|a|, |b|)`; zero when equal.
pub fn rel_diff<T: Scalar>(a: T, b: T) -> T {
    if a == b {
        return T::zero();
    }
    (a - b).abs() / a.abs().max(b.abs())
}
