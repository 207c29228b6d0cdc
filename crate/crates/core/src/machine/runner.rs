use std::fmt;

use serde::{Deserialize, Serialize};

use super::{Machine, DEFAULT_OP_BUDGET};
use crate::bridge::IoBridge;
use crate::envs::Environment;
use crate::lang::{Dialect, Program};
use crate::scalar::Real;
use crate::seed;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Limits {
    /// Token executions allowed between environment steps.
    pub op_budget: usize,
    /// Overrides the environment's step limit when set.
    pub step_limit: Option<usize>,
}

impl Default for Limits {
    fn default() -> Self {
        Limits { op_budget: DEFAULT_OP_BUDGET, step_limit: None }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Termination {
    EnvDone,
    StepLimit,
    OpBudgetExhausted,
}

impl fmt::Display for Termination {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Termination::EnvDone => "EnvDone",
            Termination::StepLimit => "StepLimit",
            Termination::OpBudgetExhausted => "OpBudgetExhausted",
        };
        f.write_str(s)
    }
}

/// One environment step as seen by the program.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TraceRecord<F> {
    pub step: usize,
    /// Raw queue values popped for this step.
    pub queue: Vec<i64>,
    pub action: Vec<F>,
    pub observation: Vec<F>,
    /// Discretized observation written to the tape.
    pub bins: Vec<i64>,
    pub reward: F,
    pub cumulative: F,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EpisodeResult<F> {
    pub total_reward: F,
    pub steps: usize,
    pub termination: Termination,
    pub trace: Option<Vec<TraceRecord<F>>>,
}

/// Run one episode of `program` in `env`.
///
/// The initial observation is written to the tape before any token runs.
/// Each comma (explicit or the wrap-around) pops one queue entry per action
/// dimension, steps the environment and writes the discretized observation at
/// the memory pointer. The episode ends on a terminal state, at the step
/// limit, or when the program exceeds its op budget between two steps.
pub fn run_episode<F: Real>(
    program: &Program,
    dialect: &Dialect,
    env: &mut dyn Environment<F>,
    bridge: &mut IoBridge<F>,
    limits: &Limits,
    episode_seed: u64,
    record_trace: bool,
) -> EpisodeResult<F> {
    let step_limit = limits.step_limit.unwrap_or(env.spec().step_limit);
    let n_actions = bridge.action_space.len();
    let mut machine = Machine::new(program, dialect, seed::derive(episode_seed, seed::stream::MACHINE, 0), bridge.bins())
        .with_op_budget(limits.op_budget);
    let obs = env.reset(seed::derive(episode_seed, seed::stream::ENV, 0));
    let bins = bridge.observe(&obs).expect("environment observations match the bridge");
    machine.complete_comma(&bins);

    let mut trace = record_trace.then(Vec::new);
    let mut total = F::zero();
    let mut steps = 0;
    let termination = loop {
        if steps >= step_limit {
            break Termination::StepLimit;
        }
        if machine.run_to_comma().is_err() {
            break Termination::OpBudgetExhausted;
        }
        let queue = machine.take_actions(n_actions);
        let action = bridge.act(&queue);
        let t = env.step(&action).expect("runner never steps a finished episode");
        total += t.reward;
        steps += 1;
        let bins = bridge.observe(&t.observation).expect("environment observations match the bridge");
        machine.complete_comma(&bins);
        if let Some(trace) = trace.as_mut() {
            trace.push(TraceRecord {
                step: steps,
                queue,
                action,
                observation: t.observation,
                bins,
                reward: t.reward,
                cumulative: total,
            });
        }
        if t.done {
            break Termination::EnvDone;
        }
    };
    EpisodeResult { total_reward: total, steps, termination, trace }
}
