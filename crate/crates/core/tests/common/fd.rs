//! Central finite differences for policy objectives.

use bfpp::synth::{Layout, Policy};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const STEP: f64 = 1e-5;

pub fn random_policy(v: usize, h: usize, seed: u64) -> Policy<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = Layout::new(v, h).total;
    Policy::from_params(v, h, (0..n).map(|_| rng.gen_range(-0.6..0.6)).collect())
}

/// Max over parameters of |analytic - numeric| / max(|analytic|, |numeric|, 1e-3).
pub fn max_relative_error(policy: &Policy<f64>, analytic: &[f64], objective: impl Fn(&Policy<f64>) -> f64) -> f64 {
    let mut worst = 0.0f64;
    let mut p = policy.clone();
    for i in 0..analytic.len() {
        let x = p.params()[i];
        p.params_mut()[i] = x + STEP;
        let up = objective(&p);
        p.params_mut()[i] = x - STEP;
        let down = objective(&p);
        p.params_mut()[i] = x;
        let numeric = (up - down) / (2.0 * STEP);
        let rel = (analytic[i] - numeric).abs() / analytic[i].abs().max(numeric.abs()).max(1e-3);
        worst = worst.max(rel);
    }
    worst
}
