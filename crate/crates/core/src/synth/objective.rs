//! Policy-gradient and priority-queue objectives with their gradients.
//!
//! `O_PG(phi) = (1/B) sum_i [A_i log pi(C_i) + beta H(C_i)]` is the per-batch
//! surrogate whose gradient is the REINFORCE estimate with an entropy bonus;
//! the whole return is credited at EOS, so `A_i` scales the full sequence
//! log-likelihood. `O_PQT(phi) = (1/K) sum_k log pi(C_k)`.

use serde::{Deserialize, Serialize};

use super::policy::Policy;
use crate::scalar::Real;

/// One sampled program for the policy-gradient term.
#[derive(Clone, Debug, PartialEq)]
pub struct Scored<F> {
    pub symbols: Vec<usize>,
    pub advantage: F,
}

pub fn pg_objective<F: Real>(policy: &Policy<F>, batch: &[Scored<F>], entropy_weight: F) -> F {
    let n = F::of(batch.len().max(1) as f64);
    batch
        .iter()
        .map(|s| s.advantage * policy.score(&s.symbols) + entropy_weight * policy.entropy(&s.symbols))
        .sum::<F>()
        / n
}

/// Add `scale * grad O_PG` to `grad`.
pub fn pg_gradient<F: Real>(policy: &Policy<F>, batch: &[Scored<F>], entropy_weight: F, scale: F, grad: &mut [F]) {
    let n = F::of(batch.len().max(1) as f64);
    for s in batch {
        policy.accumulate_gradient(&s.symbols, scale * s.advantage / n, scale * entropy_weight / n, grad);
    }
}

pub fn pqt_objective<F: Real>(policy: &Policy<F>, programs: &[Vec<usize>]) -> F {
    let n = F::of(programs.len().max(1) as f64);
    programs.iter().map(|p| policy.score(p)).sum::<F>() / n
}

/// Add `scale * grad O_PQT` to `grad`; an empty queue contributes nothing.
pub fn pqt_gradient<F: Real>(policy: &Policy<F>, programs: &[Vec<usize>], scale: F, grad: &mut [F]) {
    let n = F::of(programs.len().max(1) as f64);
    for p in programs {
        policy.accumulate_gradient(p, scale / n, F::zero(), grad);
    }
}

/// EMA of batch-mean rewards; starts at the first batch mean.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Baseline {
    pub decay: f64,
    pub value: Option<f64>,
}

impl Baseline {
    pub fn new(decay: f64) -> Self {
        Baseline { decay, value: None }
    }

    pub fn update(&mut self, batch_mean: f64) -> f64 {
        let v = match self.value {
            Some(b) => self.decay * b + (1.0 - self.decay) * batch_mean,
            None => batch_mean,
        };
        self.value = Some(v);
        v
    }
}

/// Running min/max of observed rewards, used to bring advantages to a
/// comparable scale across environments.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct RewardScale {
    pub min: Option<f64>,
    pub max: Option<f64>,
}

impl RewardScale {
    pub fn observe(&mut self, reward: f64) {
        self.min = Some(self.min.map_or(reward, |m| m.min(reward)));
        self.max = Some(self.max.map_or(reward, |m| m.max(reward)));
    }

    /// `max - min`, or 1 while the range is empty.
    pub fn range(&self) -> f64 {
        match (self.min, self.max) {
            (Some(lo), Some(hi)) if hi > lo => hi - lo,
            _ => 1.0,
        }
    }
}

/// REINFORCE step: `A_i = (Q_i - b) / range` with `b` the baseline before
/// this batch (the first batch uses its own mean), then `b` absorbs the batch mean.
/// Adds the gradient of `O_PG` to `grad` and returns the advantages.
pub fn reinforce_update<F: Real>(
    policy: &Policy<F>,
    batch: &[(Vec<usize>, f64)],
    entropy_weight: F,
    baseline: &mut Baseline,
    scale: &mut RewardScale,
    grad: &mut [F],
) -> Vec<f64> {
    if batch.is_empty() {
        return Vec::new();
    }
    for (_, q) in batch {
        scale.observe(*q);
    }
    let mean = batch.iter().map(|(_, q)| q).sum::<f64>() / batch.len() as f64;
    let b = baseline.value.unwrap_or(mean);
    let range = scale.range();
    let scored: Vec<Scored<F>> =
        batch.iter().map(|(s, q)| Scored { symbols: s.clone(), advantage: F::of((q - b) / range) }).collect();
    pg_gradient(policy, &scored, entropy_weight, F::one(), grad);
    baseline.update(mean);
    scored.iter().map(|s| s.advantage.to_f64_lossy()).collect()
}
