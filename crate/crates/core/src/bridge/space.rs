use serde::{Deserialize, Serialize};

use crate::scalar::Real;

/// One scalar dimension of an observation or action space.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SpaceDim<F> {
    /// `[low, high]`
    Interval { low: F, high: F },
    /// `[low, +inf)`
    HalfOpenAbove { low: F },
    /// `(-inf, high]`
    HalfOpenBelow { high: F },
    Unbounded,
    /// `{0, .., count-1}`
    FiniteDiscrete { count: u64 },
    IntegerUnbounded,
}

impl<F: Real> SpaceDim<F> {
    pub fn interval(low: f64, high: f64) -> Self {
        SpaceDim::Interval { low: F::of(low), high: F::of(high) }
    }

    pub fn is_valid(&self) -> bool {
        match *self {
            SpaceDim::Interval { low, high } => low < high,
            SpaceDim::FiniteDiscrete { count } => count >= 1,
            _ => true,
        }
    }

    pub fn is_discrete(&self) -> bool {
        matches!(self, SpaceDim::FiniteDiscrete { .. } | SpaceDim::IntegerUnbounded)
    }

    pub fn contains(&self, x: F) -> bool {
        if x.is_nan() {
            return false;
        }
        match *self {
            SpaceDim::Interval { low, high } => low <= x && x <= high,
            SpaceDim::HalfOpenAbove { low } => low <= x && x.is_finite(),
            SpaceDim::HalfOpenBelow { high } => x <= high && x.is_finite(),
            SpaceDim::Unbounded => x.is_finite(),
            SpaceDim::FiniteDiscrete { count } => {
                x.fract() == F::zero() && x >= F::zero() && x < F::of(count as f64)
            }
            SpaceDim::IntegerUnbounded => x.fract() == F::zero(),
        }
    }
}
