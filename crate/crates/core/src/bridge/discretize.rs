use std::collections::VecDeque;

use serde::{Deserialize, Serialize};

use super::space::SpaceDim;
use super::BridgeError;
use crate::scalar::Real;

/// How one observation dimension is turned into a tape integer.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DimMode {
    /// Evenly spaced thresholds over a bounded interval.
    Static,
    /// Quantile thresholds over a sliding window of recent observations.
    Fluid,
    /// Integer observations copied as-is.
    Passthrough,
}

impl DimMode {
    /// Interval dims are static, discrete dims pass through, the rest are fluid.
    pub fn default_for<F: Real>(dim: &SpaceDim<F>) -> DimMode {
        match dim {
            SpaceDim::Interval { .. } => DimMode::Static,
            SpaceDim::FiniteDiscrete { .. } | SpaceDim::IntegerUnbounded => DimMode::Passthrough,
            _ => DimMode::Fluid,
        }
    }
}

/// `tau_w = low + (high - low) * w / d` for `w = 1..d-1`.
pub fn static_thresholds<F: Real>(low: F, high: F, bins: usize) -> Result<Vec<F>, BridgeError> {
    if !(low < high) {
        return Err(BridgeError::DegenerateInterval);
    }
    if bins < 2 {
        return Err(BridgeError::TooFewBins(bins));
    }
    let d = F::of(bins as f64);
    Ok((1..bins).map(|w| low + (high - low) * F::of(w as f64) / d).collect())
}

/// `tau_w = s_ceil(w*m/d)` (1-indexed) over an ascending history of `m` values.
/// An empty history yields all-zero thresholds.
pub fn quantile_thresholds<F: Real>(sorted: &[F], bins: usize) -> Vec<F> {
    (1..bins).map(|w| quantile_at(sorted, w, bins)).collect()
}

#[inline]
fn quantile_at<F: Real>(sorted: &[F], w: usize, bins: usize) -> F {
    match sorted.len() {
        0 => F::zero(),
        m => sorted[(w * m).div_ceil(bins) - 1],
    }
}

/// Number of thresholds `<= o`.
#[inline]
pub fn bin_of<F: Real>(thresholds: &[F], o: F) -> i64 {
    thresholds.iter().filter(|&&t| t <= o).count() as i64
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
enum DimState<F> {
    Static { thresholds: Vec<F> },
    Fluid { window: VecDeque<F>, sorted: Vec<F> },
    Passthrough,
}

/// Per-dimension observation discretizer with `d` bins and a fluid history of `h`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Discretizer<F> {
    bins: usize,
    history: usize,
    dims: Vec<DimState<F>>,
}

impl<F: Real> Discretizer<F> {
    pub fn new(space: &[SpaceDim<F>], modes: &[DimMode], bins: usize, history: usize) -> Result<Self, BridgeError> {
        if bins < 2 {
            return Err(BridgeError::TooFewBins(bins));
        }
        if space.len() != modes.len() {
            return Err(BridgeError::DimensionMismatch { expected: space.len(), got: modes.len() });
        }
        let dims = space
            .iter()
            .zip(modes)
            .enumerate()
            .map(|(k, (dim, mode))| match (mode, dim) {
                (DimMode::Static, SpaceDim::Interval { low, high }) => {
                    Ok(DimState::Static { thresholds: static_thresholds(*low, *high, bins)? })
                }
                (DimMode::Static, _) => Err(BridgeError::StaticNeedsInterval(k)),
                (DimMode::Fluid, _) => {
                    Ok(DimState::Fluid { window: VecDeque::with_capacity(history), sorted: Vec::with_capacity(history) })
                }
                (DimMode::Passthrough, _) => Ok(DimState::Passthrough),
            })
            .collect::<Result<_, _>>()?;
        Ok(Discretizer { bins, history, dims })
    }

    /// Discretizer using [`DimMode::default_for`] on every dimension.
    pub fn with_defaults(space: &[SpaceDim<F>], bins: usize, history: usize) -> Result<Self, BridgeError> {
        let modes: Vec<DimMode> = space.iter().map(DimMode::default_for).collect();
        Discretizer::new(space, &modes, bins, history)
    }

    pub fn bins(&self) -> usize {
        self.bins
    }

    pub fn history(&self) -> usize {
        self.history
    }

    pub fn len(&self) -> usize {
        self.dims.len()
    }

    pub fn is_empty(&self) -> bool {
        self.dims.is_empty()
    }

    pub fn mode(&self, dim: usize) -> DimMode {
        match self.dims[dim] {
            DimState::Static { .. } => DimMode::Static,
            DimState::Fluid { .. } => DimMode::Fluid,
            DimState::Passthrough => DimMode::Passthrough,
        }
    }

    /// Current thresholds of a dimension; empty for passthrough dims.
    pub fn thresholds(&self, dim: usize) -> Vec<F> {
        match &self.dims[dim] {
            DimState::Static { thresholds } => thresholds.clone(),
            DimState::Fluid { sorted, .. } => quantile_thresholds(sorted, self.bins),
            DimState::Passthrough => Vec::new(),
        }
    }

    /// Number of buffered observations in a fluid dimension.
    pub fn buffered(&self, dim: usize) -> usize {
        match &self.dims[dim] {
            DimState::Fluid { window, .. } => window.len(),
            _ => 0,
        }
    }

    /// Push `o` into a fluid dimension's window, evicting the oldest past `h`.
    /// No-op for other modes.
    pub fn fluid_update(&mut self, dim: usize, o: F) {
        let h = self.history;
        if let DimState::Fluid { window, sorted } = &mut self.dims[dim] {
            if h == 0 {
                return;
            }
            if window.len() == h {
                let old = window.pop_front().expect("window is full");
                let i = sorted.partition_point(|&x| x < old);
                sorted.remove(i);
            }
            window.push_back(o);
            let i = sorted.partition_point(|&x| x < o);
            sorted.insert(i, o);
        }
    }

    /// Feed a full observation vector to the fluid windows without binning.
    pub fn observe(&mut self, o: &[F]) -> Result<(), BridgeError> {
        self.check(o)?;
        for (k, &x) in o.iter().enumerate() {
            self.fluid_update(k, x);
        }
        Ok(())
    }

    /// Bin every dimension against the thresholds derived from prior
    /// observations, then record `o` in the fluid windows.
    pub fn discretize(&mut self, o: &[F]) -> Result<Vec<i64>, BridgeError> {
        self.check(o)?;
        let out = o
            .iter()
            .zip(&self.dims)
            .map(|(&x, state)| match state {
                DimState::Static { thresholds } => bin_of(thresholds, x),
                DimState::Fluid { sorted, .. } => {
                    (1..self.bins).filter(|&w| quantile_at(sorted, w, self.bins) <= x).count() as i64
                }
                DimState::Passthrough => x.round().to_i64().unwrap_or(0),
            })
            .collect();
        for (k, &x) in o.iter().enumerate() {
            self.fluid_update(k, x);
        }
        Ok(out)
    }

    fn check(&self, o: &[F]) -> Result<(), BridgeError> {
        if o.len() != self.dims.len() {
            return Err(BridgeError::DimensionMismatch { expected: self.dims.len(), got: o.len() });
        }
        if let Some(k) = o.iter().position(|x| !x.is_finite()) {
            return Err(BridgeError::NonFiniteObservation(k));
        }
        Ok(())
    }
}
