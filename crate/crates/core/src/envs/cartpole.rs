use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{EnvError, EnvSpec, Environment, Transition};
use crate::bridge::SpaceDim;
use crate::scalar::Real;

pub const GRAVITY: f64 = 9.8;
pub const MASS_CART: f64 = 1.0;
pub const MASS_POLE: f64 = 0.1;
/// Half the pole length.
pub const HALF_LENGTH: f64 = 0.5;
pub const FORCE_MAG: f64 = 10.0;
/// Seconds per step (explicit Euler).
pub const TAU: f64 = 0.02;
pub const X_THRESHOLD: f64 = 2.4;
/// 12 degrees.
pub const THETA_THRESHOLD: f64 = 12.0 * 2.0 * std::f64::consts::PI / 360.0;
pub const STEP_LIMIT: usize = 500;
pub const INIT_SPREAD: f64 = 0.05;

/// Cart-pole balancing: action 0 pushes left, 1 pushes right, +1 reward per step.
///
/// Observation: cart position, cart velocity, pole angle, pole angular velocity.
#[derive(Clone, Debug)]
pub struct CartPole<F> {
    spec: EnvSpec<F>,
    state: [F; 4],
    started: bool,
    done: bool,
}

impl<F: Real> Default for CartPole<F> {
    fn default() -> Self {
        CartPole::new()
    }
}

impl<F: Real> CartPole<F> {
    pub fn new() -> Self {
        let spec = EnvSpec {
            name: "CartPole-v1".into(),
            observation_space: vec![
                SpaceDim::interval(-2.0 * X_THRESHOLD, 2.0 * X_THRESHOLD),
                SpaceDim::Unbounded,
                SpaceDim::interval(-2.0 * THETA_THRESHOLD, 2.0 * THETA_THRESHOLD),
                SpaceDim::Unbounded,
            ],
            action_space: vec![SpaceDim::FiniteDiscrete { count: 2 }],
            step_limit: STEP_LIMIT,
            min_return: F::one(),
        };
        CartPole { spec, state: [F::zero(); 4], started: false, done: false }
    }

    pub fn state(&self) -> [F; 4] {
        self.state
    }

    /// Put the simulator in an arbitrary state (for tests and trajectories).
    pub fn set_state(&mut self, state: [F; 4]) {
        self.state = state;
        self.started = true;
        self.done = false;
    }

    fn terminal(&self) -> bool {
        let [x, _, theta, _] = self.state;
        x < F::of(-X_THRESHOLD) || x > F::of(X_THRESHOLD) || theta < F::of(-THETA_THRESHOLD) || theta > F::of(THETA_THRESHOLD)
    }
}

impl<F: Real> Environment<F> for CartPole<F> {
    fn spec(&self) -> &EnvSpec<F> {
        &self.spec
    }

    fn reset(&mut self, seed: u64) -> Vec<F> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for s in self.state.iter_mut() {
            *s = F::of(rng.gen_range(-INIT_SPREAD..INIT_SPREAD));
        }
        self.started = true;
        self.done = false;
        self.state.to_vec()
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
        let force = if action[0] >= F::of(0.5) { F::of(FORCE_MAG) } else { F::of(-FORCE_MAG) };
        let [x, x_dot, theta, theta_dot] = self.state;
        let total_mass = F::of(MASS_CART + MASS_POLE);
        let polemass_length = F::of(MASS_POLE * HALF_LENGTH);
        let (sin, cos) = theta.sin_cos();
        let temp = (force + polemass_length * theta_dot * theta_dot * sin) / total_mass;
        let theta_acc = (F::of(GRAVITY) * sin - cos * temp)
            / (F::of(HALF_LENGTH) * (F::of(4.0 / 3.0) - F::of(MASS_POLE) * cos * cos / total_mass));
        let x_acc = temp - polemass_length * theta_acc * cos / total_mass;
        let tau = F::of(TAU);
        self.state = [x + tau * x_dot, x_dot + tau * x_acc, theta + tau * theta_dot, theta_dot + tau * theta_acc];
        self.done = self.terminal();
        Ok(Transition { observation: self.state.to_vec(), reward: F::one(), done: self.done })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reset_is_small_and_seeded() {
        let mut env = CartPole::<f64>::new();
        for seed in 0..200 {
            let o = env.reset(seed);
            assert!(o.iter().all(|v| v.abs() <= INIT_SPREAD));
        }
        assert_eq!(env.reset(5), env.reset(5));
        assert_ne!(env.reset(5), env.reset(6));
    }

    #[test]
    fn push_right_from_rest() {
        let mut env = CartPole::<f64>::new();
        env.set_state([0.0; 4]);
        let t = env.step(&[1.0]).unwrap();
        assert_eq!(t.reward, 1.0);
        assert!(!t.done);
        // closed form at theta = 0: temp = F/M, theta_acc = -temp / (l (4/3 - m/M)), x_acc = temp - m l theta_acc / M
        let m_total = MASS_CART + MASS_POLE;
        let temp = FORCE_MAG / m_total;
        let theta_acc = -temp / (HALF_LENGTH * (4.0 / 3.0 - MASS_POLE / m_total));
        let x_acc = temp - MASS_POLE * HALF_LENGTH * theta_acc / m_total;
        let s = env.state();
        assert_eq!(s[0], 0.0);
        assert!((s[1] - TAU * x_acc).abs() < 1e-12);
        assert!(s[1] > 0.0);
        assert!((s[3] - TAU * theta_acc).abs() < 1e-12);
    }

    #[test]
    fn terminates_on_angle_and_rejects_further_steps() {
        let mut env = CartPole::<f64>::new();
        env.set_state([0.0, 0.0, 0.25, 0.0]);
        let t = env.step(&[0.0]).unwrap();
        assert!(t.done);
        assert_eq!(env.step(&[0.0]), Err(EnvError::SteppedAfterDone));
    }

    #[test]
    fn constant_push_fails_quickly() {
        let mut env = CartPole::<f64>::new();
        env.reset(3);
        let mut steps = 0;
        loop {
            steps += 1;
            if env.step(&[0.0]).unwrap().done {
                break;
            }
        }
        assert!((5..20).contains(&steps), "{steps}");
    }
}
