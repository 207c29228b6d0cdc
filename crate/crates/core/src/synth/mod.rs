//! Program synthesis: an LSTM writer policy trained with REINFORCE and
//! priority-queue training, plus a uniform random-search control.

mod checkpoint;
mod early_stop;
mod evaluate;
mod objective;
mod optim;
mod policy;
mod queue;
mod train;
mod vocab;

pub use checkpoint::{Checkpoint, CheckpointError, FORMAT as CHECKPOINT_FORMAT, VERSION as CHECKPOINT_VERSION};
pub use early_stop::{early_stop, ema_series, EarlyStopper};
pub use evaluate::{EnvEvaluator, ProgramEvaluator};
pub use objective::{
    pg_gradient, pg_objective, pqt_gradient, pqt_objective, reinforce_update, Baseline, RewardScale, Scored,
};
pub use optim::RmsProp;
pub use policy::{Layout, LstmState, Policy, Sample};
pub use queue::{PriorityQueue, QueueEntry};
pub use train::{
    final_select, random_search, seed_queue, train, train_with, EpisodeRecord, Selection, StopReason, Synthesizer,
    TrainConfig, TrainResult,
};
pub use vocab::Vocabulary;

use thiserror::Error;

use crate::bridge::BridgeError;
use crate::lang::Token;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SynthError {
    #[error("priority queue is empty")]
    EmptyQueue,
    #[error("token '{token}' at position {pos} is outside the vocabulary")]
    TokenOutsideVocabulary { pos: usize, token: Token },
    #[error("expert program {program:?} uses commands disabled in this dialect: {reason}")]
    DialectMismatch { program: String, reason: String },
    #[error("expert program {program:?} is invalid: {reason}")]
    InvalidExpert { program: String, reason: String },
    #[error("invalid training config: {0}")]
    InvalidConfig(String),
    #[error(transparent)]
    Bridge(#[from] BridgeError),
}
