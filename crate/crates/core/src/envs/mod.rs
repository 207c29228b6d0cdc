//! Self-contained POMDP control environments.
//!
//! Dynamics constants follow the public reference implementations of
//! CartPole-v1, MountainCarContinuous-v0 and Taxi-v3; each module lists its
//! constants at the top.

pub mod cartpole;
pub mod mountain_car;
pub mod taxi;

pub use cartpole::CartPole;
pub use mountain_car::MountainCarContinuous;
pub use taxi::{Taxi, TaxiState};

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::bridge::SpaceDim;
use crate::scalar::Real;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EnvError {
    #[error("step called after the episode finished")]
    SteppedAfterDone,
    #[error("step called before reset")]
    NotReset,
    #[error("expected {expected} action dimensions, got {got}")]
    ActionDimension { expected: usize, got: usize },
    #[error("unknown environment '{0}'")]
    UnknownEnv(String),
}

/// Static description of an environment.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EnvSpec<F> {
    pub name: String,
    pub observation_space: Vec<SpaceDim<F>>,
    pub action_space: Vec<SpaceDim<F>>,
    /// Episode step limit, also the planning horizon.
    pub step_limit: usize,
    /// Lowest attainable episode return.
    pub min_return: F,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Transition<F> {
    pub observation: Vec<F>,
    pub reward: F,
    /// The episode reached a terminal state. Step-limit truncation is left to the caller.
    pub done: bool,
}

pub trait Environment<F: Real>: Send {
    fn spec(&self) -> &EnvSpec<F>;

    /// Start a new episode; the initial state is a pure function of `seed`.
    fn reset(&mut self, seed: u64) -> Vec<F>;

    fn step(&mut self, action: &[F]) -> Result<Transition<F>, EnvError>;
}

/// The environments available by name.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EnvKind {
    #[serde(alias = "cartpole")]
    CartPole,
    #[serde(alias = "mountaincar")]
    MountainCarContinuous,
    Taxi,
}

impl EnvKind {
    pub const ALL: [EnvKind; 3] = [EnvKind::CartPole, EnvKind::MountainCarContinuous, EnvKind::Taxi];

    pub fn make<F: Real>(self) -> Box<dyn Environment<F>> {
        match self {
            EnvKind::CartPole => Box::new(CartPole::new()),
            EnvKind::MountainCarContinuous => Box::new(MountainCarContinuous::new()),
            EnvKind::Taxi => Box::new(Taxi::new()),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            EnvKind::CartPole => "cartpole",
            EnvKind::MountainCarContinuous => "mountaincar",
            EnvKind::Taxi => "taxi",
        }
    }

    pub fn gym_id(self) -> &'static str {
        match self {
            EnvKind::CartPole => "CartPole-v1",
            EnvKind::MountainCarContinuous => "MountainCarContinuous-v0",
            EnvKind::Taxi => "Taxi-v3",
        }
    }

    /// Taxi trains for a fixed budget; the others use early stopping.
    pub fn uses_early_stopping(self) -> bool {
        !matches!(self, EnvKind::Taxi)
    }
}

impl FromStr for EnvKind {
    type Err = EnvError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let key = s.to_ascii_lowercase().replace(['-', '_'], "");
        match key.as_str() {
            "cartpole" | "cartpolev1" => Ok(EnvKind::CartPole),
            "mountaincar" | "mountaincarcontinuous" | "mountaincarcontinuousv0" => Ok(EnvKind::MountainCarContinuous),
            "taxi" | "taxiv3" => Ok(EnvKind::Taxi),
            _ => Err(EnvError::UnknownEnv(s.to_string())),
        }
    }
}

impl fmt::Display for EnvKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}
