use crate::error::{Error, Result};
use crate::scalar::Scalar;
use serde::{Deserialize, Serialize};

/// Probability mass over the ordered categories of one attribute.
///
/// The mass either sums to one or is identically zero (empty population).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GroupDistribution<T> {
    attribute: String,
    mass: Vec<T>,
}

impl<T: Scalar> GroupDistribution<T> {
    pub const SUM_TOLERANCE: f64 = 1e-9;

    pub fn new(attribute: impl Into<String>, mass: Vec<T>) -> Result<Self> {
        if mass.iter().any(|m| !m.is_finite() || *m < T::zero()) {
            return Err(Error::Validation("distribution has a negative or non-finite mass".into()));
        }
        let sum: T = mass.iter().copied().sum();
        let tol = T::lit(Self::SUM_TOLERANCE);
        if sum.abs() > tol && (sum - T::one()).abs() > tol {
            return Err(Error::Validation(format!("distribution sums to {sum}, expected 0 or 1")));
        }
        Ok(GroupDistribution {
            attribute: attribute.into(),
            mass,
        })
    }

    /// Normalize head-counts; an all-zero count vector yields the zero
    /// distribution.
    pub fn from_counts(attribute: impl Into<String>, counts: &[u64]) -> Self {
        let total: u64 = counts.iter().sum();
        let mass = if total == 0 {
            vec![T::zero(); counts.len()]
        } else {
            let total = T::from_count(total);
            counts.iter().map(|&n| T::from_count(n) / total).collect()
        };
        GroupDistribution {
            attribute: attribute.into(),
            mass,
        }
    }

    pub fn attribute(&self) -> &str {
        &self.attribute
    }

    pub fn mass(&self) -> &[T] {
        &self.mass
    }

    pub fn len(&self) -> usize {
        self.mass.len()
    }

    pub fn is_empty(&self) -> bool {
        self.mass.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.mass.iter().all(|m| m.is_zero())
    }
}

/// Jensen-Shannon distance: the square root of the base-2 Jensen-Shannon
/// divergence. Symmetric, bounded in `[0, 1]`, and a metric on the simplex.
pub fn js_distance<T: Scalar>(p: &GroupDistribution<T>, q: &GroupDistribution<T>) -> Result<T> {
    js_distance_slices(p.mass(), q.mass())
}

pub(crate) fn js_distance_slices<T: Scalar>(p: &[T], q: &[T]) -> Result<T> {
    if p.len() != q.len() {
        return Err(Error::LengthMismatch(p.len(), q.len()));
    }
    let zero = T::zero();
    if p.iter().all(|v| v.is_zero()) || q.iter().all(|v| v.is_zero()) {
        return Err(Error::ZeroMass);
    }
    let half = T::lit(0.5);
    let mut divergence = zero;
    for (&pi, &qi) in p.iter().zip(q) {
        let mi = half * (pi + qi);
        if pi > zero {
            divergence = divergence + half * pi * (pi / mi).log2();
        }
        if qi > zero {
            divergence = divergence + half * qi * (qi / mi).log2();
        }
    }
    Ok(divergence.max(zero).min(T::one()).sqrt())
}
