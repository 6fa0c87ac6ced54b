//! Scalar abstraction shared by the distribution, distance and front code.
//!
//! Everything that only needs real arithmetic (probability masses, the
//! Jensen-Shannon distance, dominance and hypervolume) is written against
//! [`Scalar`] so it can run in `f32` or `f64`. The planner itself fixes
//! `f64`; see the aliases at the crate root.

use num_traits::{Float, FromPrimitive, ToPrimitive};
use std::fmt::{Debug, Display};
use std::iter::Sum;

/// Floating-point type usable for masses and objective values.
pub trait Scalar:
    Float + FromPrimitive + ToPrimitive + Debug + Display + Default + Sum + Send + Sync + 'static
{
    /// Lossy conversion from an integer head-count.
    fn from_count(count: u64) -> Self {
        Self::from_u64(count).unwrap_or_else(Self::infinity)
    }

    /// Lossy conversion from `f64`, used for literals and tolerances.
    fn lit(value: f64) -> Self {
        Self::from_f64(value).unwrap_or_else(Self::nan)
    }
}

impl<T> Scalar for T where
    T: Float + FromPrimitive + ToPrimitive + Debug + Display + Default + Sum + Send + Sync + 'static
{
}
