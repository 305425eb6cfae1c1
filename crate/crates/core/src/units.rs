//! Linear power ratio <-> decibel conversion.

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// `10^(db/10)`.
pub fn db_to_linear<T: Scalar>(db: T) -> T {
    T::lit(10.0).powf(db / T::lit(10.0))
}

/// `10·log10(ratio)`; the ratio must be strictly positive.
pub fn linear_to_db<T: Scalar>(ratio: T) -> Result<T> {
    if !(ratio > T::zero()) {
        return Err(Error::NonPositiveRatio(ratio.as_f64()));
    }
    Ok(T::lit(10.0) * ratio.log10())
}
