//! Coercion between integer tape values and environment spaces.

mod coerce;
mod discretize;
mod space;

pub use coerce::{coerce_action, coerce_one};
pub use discretize::{bin_of, quantile_thresholds, static_thresholds, DimMode, Discretizer};
pub use space::SpaceDim;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::envs::Environment;
use crate::scalar::Real;
use crate::seed;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BridgeError {
    #[error("interval must satisfy low < high")]
    DegenerateInterval,
    #[error("need at least 2 bins, got {0}")]
    TooFewBins(usize),
    #[error("expected {expected} dimensions, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("observation dimension {0} is not finite")]
    NonFiniteObservation(usize),
    #[error("static discretization of dimension {0} needs an interval space")]
    StaticNeedsInterval(usize),
}

/// Bridge settings: bin count `d`, history length `h`, per-dimension mode
/// overrides and burn-in.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct BridgeConfig {
    pub bins: usize,
    pub history: usize,
    /// Per observation dimension; `None` keeps the default for the space.
    pub modes: Vec<Option<DimMode>>,
    /// Random-agent steps used to prime fluid thresholds; defaults to `history`.
    pub burn_in_steps: Option<usize>,
    pub burn_in_seed: u64,
}

impl Default for BridgeConfig {
    fn default() -> Self {
        BridgeConfig { bins: 5, history: 500, modes: Vec::new(), burn_in_steps: None, burn_in_seed: 0 }
    }
}

impl BridgeConfig {
    pub fn burn_in_steps(&self) -> usize {
        self.burn_in_steps.unwrap_or(self.history)
    }
}

/// Discretizer plus action space for one environment.
#[derive(Clone, Debug, PartialEq)]
pub struct IoBridge<F> {
    pub discretizer: Discretizer<F>,
    pub action_space: Vec<SpaceDim<F>>,
}

impl<F: Real> IoBridge<F> {
    pub fn new(
        observation_space: &[SpaceDim<F>],
        action_space: &[SpaceDim<F>],
        config: &BridgeConfig,
    ) -> Result<Self, BridgeError> {
        if config.modes.len() > observation_space.len() {
            return Err(BridgeError::DimensionMismatch { expected: observation_space.len(), got: config.modes.len() });
        }
        let modes: Vec<DimMode> = observation_space
            .iter()
            .enumerate()
            .map(|(k, dim)| config.modes.get(k).copied().flatten().unwrap_or_else(|| DimMode::default_for(dim)))
            .collect();
        Ok(IoBridge {
            discretizer: Discretizer::new(observation_space, &modes, config.bins, config.history)?,
            action_space: action_space.to_vec(),
        })
    }

    /// Bridge for `env`, primed by burn-in.
    pub fn for_env(env: &mut dyn Environment<F>, config: &BridgeConfig) -> Result<Self, BridgeError> {
        let spec = env.spec().clone();
        let mut bridge = IoBridge::new(&spec.observation_space, &spec.action_space, config)?;
        burn_in(env, &mut bridge, config.burn_in_steps(), config.burn_in_seed)?;
        Ok(bridge)
    }

    pub fn bins(&self) -> usize {
        self.discretizer.bins()
    }

    pub fn observe(&mut self, o: &[F]) -> Result<Vec<i64>, BridgeError> {
        self.discretizer.discretize(o)
    }

    pub fn act(&self, values: &[i64]) -> Vec<F> {
        coerce_action(values, &self.action_space, self.bins())
    }
}

/// Prime fluid thresholds with `steps` environment steps of a uniform random
/// agent (each action dimension gets a uniform integer in `0..d` coerced into
/// its space). Reset and step observations are all recorded.
pub fn burn_in<F: Real>(
    env: &mut dyn Environment<F>,
    bridge: &mut IoBridge<F>,
    steps: usize,
    burn_seed: u64,
) -> Result<(), BridgeError> {
    if steps == 0 {
        return Ok(());
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed::derive(burn_seed, seed::stream::BURN_IN, 0));
    let d = bridge.bins() as i64;
    let n_act = bridge.action_space.len();
    let step_limit = env.spec().step_limit;
    let mut episode = 0u64;
    let mut obs = env.reset(seed::derive(burn_seed, seed::stream::ENV, episode));
    bridge.discretizer.observe(&obs)?;
    let mut in_episode = 0;
    for _ in 0..steps {
        let values: Vec<i64> = (0..n_act).map(|_| rng.gen_range(0..d)).collect();
        let action = bridge.act(&values);
        let t = env.step(&action).expect("burn-in never steps a finished episode");
        bridge.discretizer.observe(&t.observation)?;
        in_episode += 1;
        if t.done || in_episode >= step_limit {
            episode += 1;
            in_episode = 0;
            obs = env.reset(seed::derive(burn_seed, seed::stream::ENV, episode));
            bridge.discretizer.observe(&obs)?;
        }
    }
    Ok(())
}
