use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{EnvError, EnvSpec, Environment, Transition};
use crate::bridge::SpaceDim;
use crate::scalar::Real;

pub const MIN_POSITION: f64 = -1.2;
pub const MAX_POSITION: f64 = 0.6;
pub const MAX_SPEED: f64 = 0.07;
pub const GOAL_POSITION: f64 = 0.45;
pub const GOAL_VELOCITY: f64 = 0.0;
pub const POWER: f64 = 0.0015;
pub const GRAVITY: f64 = 0.0025;
pub const GOAL_REWARD: f64 = 100.0;
pub const ACTION_COST: f64 = 0.1;
pub const STEP_LIMIT: usize = 999;

/// Under-powered car in a valley, continuous torque in `[-1, 1]`.
///
/// Observation: position, velocity. Reward `-0.1 a^2` per step plus 100 on
/// reaching the flag.
#[derive(Clone, Debug)]
pub struct MountainCarContinuous<F> {
    spec: EnvSpec<F>,
    position: F,
    velocity: F,
    started: bool,
    done: bool,
}

impl<F: Real> Default for MountainCarContinuous<F> {
    fn default() -> Self {
        MountainCarContinuous::new()
    }
}

impl<F: Real> MountainCarContinuous<F> {
    pub fn new() -> Self {
        let spec = EnvSpec {
            name: "MountainCarContinuous-v0".into(),
            observation_space: vec![
                SpaceDim::interval(MIN_POSITION, MAX_POSITION),
                SpaceDim::interval(-MAX_SPEED, MAX_SPEED),
            ],
            action_space: vec![SpaceDim::interval(-1.0, 1.0)],
            step_limit: STEP_LIMIT,
            min_return: F::of(-ACTION_COST * STEP_LIMIT as f64),
        };
        MountainCarContinuous { spec, position: F::zero(), velocity: F::zero(), started: false, done: false }
    }

    pub fn state(&self) -> [F; 2] {
        [self.position, self.velocity]
    }

    pub fn set_state(&mut self, position: F, velocity: F) {
        self.position = position;
        self.velocity = velocity;
        self.started = true;
        self.done = false;
    }
}

impl<F: Real> Environment<F> for MountainCarContinuous<F> {
    fn spec(&self) -> &EnvSpec<F> {
        &self.spec
    }

    fn reset(&mut self, seed: u64) -> Vec<F> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        self.position = F::of(rng.gen_range(-0.6..-0.4));
        self.velocity = F::zero();
        self.started = true;
        self.done = false;
        vec![self.position, self.velocity]
    }

    fn step(&mut self, action: &[F]) -> Result<Transition<F>, EnvError> {
        if !self.started {
            return Err(EnvError::NotReset);
        }
        if self.done {
            return Err(EnvError::SteppedAfterDone);
        }
        if action.len() != 1 {
            return Err(EnvError::ActionDimension { expected: 1, got: action.len() });
        }
        let force = action[0].max(-F::one()).min(F::one());
        let max_speed = F::of(MAX_SPEED);
        let mut v = self.velocity + force * F::of(POWER) - F::of(GRAVITY) * (F::of(3.0) * self.position).cos();
        v = v.max(-max_speed).min(max_speed);
        let mut x = self.position + v;
        x = x.max(F::of(MIN_POSITION)).min(F::of(MAX_POSITION));
        if x == F::of(MIN_POSITION) && v < F::zero() {
            v = F::zero();
        }
        self.position = x;
        self.velocity = v;
        self.done = x >= F::of(GOAL_POSITION) && v >= F::of(GOAL_VELOCITY);
        let mut reward = if self.done { F::of(GOAL_REWARD) } else { F::zero() };
        reward -= force * force * F::of(ACTION_COST);
        Ok(Transition { observation: vec![x, v], reward, done: self.done })
    }
}
