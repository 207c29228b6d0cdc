use crate::bridge::{BridgeConfig, BridgeError, IoBridge};
use crate::envs::EnvKind;
use crate::lang::{Dialect, Program};
use crate::machine::{run_episode, Limits};
use crate::scalar::Real;
use crate::seed;

/// Scores programs by running them. Implementations must be pure functions
/// of `(program, episodes, seed)`.
pub trait ProgramEvaluator<F: Real>: Sync {
    fn dialect(&self) -> &Dialect;

    /// Reward assigned to programs that fail validation.
    fn min_return(&self) -> F;

    /// Total reward of each of `episodes` episodes. Episode `e` uses
    /// `seed::derive(seed, EPISODE, e)`, so equal seeds give common random numbers.
    fn evaluate(&self, program: &Program, episodes: usize, seed: u64) -> Vec<F>;
}

/// Evaluates on a built-in environment. Every call starts from the same
/// burned-in bridge, so fluid thresholds never leak between programs.
pub struct EnvEvaluator<F> {
    kind: EnvKind,
    dialect: Dialect,
    limits: Limits,
    bridge: IoBridge<F>,
    min_return: F,
}

impl<F: Real> EnvEvaluator<F> {
    pub fn new(kind: EnvKind, dialect: Dialect, bridge: &BridgeConfig, limits: Limits) -> Result<Self, BridgeError> {
        let mut env = kind.make::<F>();
        let min_return = env.spec().min_return;
        let bridge = IoBridge::for_env(env.as_mut(), bridge)?;
        Ok(EnvEvaluator { kind, dialect, limits, bridge, min_return })
    }

    pub fn kind(&self) -> EnvKind {
        self.kind
    }

    pub fn bridge(&self) -> &IoBridge<F> {
        &self.bridge
    }
}

impl<F: Real> ProgramEvaluator<F> for EnvEvaluator<F> {
    fn dialect(&self) -> &Dialect {
        &self.dialect
    }

    fn min_return(&self) -> F {
        self.min_return
    }

    fn evaluate(&self, program: &Program, episodes: usize, seed: u64) -> Vec<F> {
        let mut env = self.kind.make::<F>();
        let mut bridge = self.bridge.clone();
        (0..episodes)
            .map(|e| {
                let s = seed::derive(seed, seed::stream::EPISODE, e as u64);
                run_episode(program, &self.dialect, env.as_mut(), &mut bridge, &self.limits, s, false).total_reward
            })
            .collect()
    }
}
