//! Versioned JSON checkpoint.
//!
//! ```text
//! {
//!   "format": "bfpp-checkpoint",
//!   "version": 1,
//!   "env": "cart_pole",
//!   "dialect": {"enabled": ["@", "^", ...], "loop_mode": "negative"},
//!   "bridge": {...},
//!   "limits": {...},
//!   "vocabulary": "><^@+~-[].,!01234abcde",   // symbol order, EOS last and implicit
//!   "hidden": 50,
//!   "params": [...],                           // see `Layout`; absent for random search
//!   "queue": {"capacity": 10, "entries": [{"program": "...", "reward": 0.0}]},
//!   "seed": 0
//! }
//! ```

use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::policy::{Layout, Policy};
use super::queue::PriorityQueue;
use super::vocab::Vocabulary;
use crate::bridge::BridgeConfig;
use crate::envs::EnvKind;
use crate::lang::Dialect;
use crate::machine::Limits;
use crate::scalar::Real;

pub const FORMAT: &str = "bfpp-checkpoint";
pub const VERSION: u32 = 1;

#[derive(Debug, Error)]
pub enum CheckpointError {
    #[error("cannot access checkpoint: {0}")]
    Io(#[from] std::io::Error),
    #[error("corrupt checkpoint: {0}")]
    Corrupt(String),
    #[error("unsupported checkpoint version {0} (expected {VERSION})")]
    Version(u32),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(bound = "F: Real")]
pub struct Checkpoint<F> {
    pub format: String,
    pub version: u32,
    pub env: EnvKind,
    pub dialect: Dialect,
    pub bridge: BridgeConfig,
    pub limits: Limits,
    pub vocabulary: String,
    pub hidden: usize,
    pub params: Option<Vec<F>>,
    pub queue: PriorityQueue,
    pub seed: u64,
}

impl<F: Real> Checkpoint<F> {
    pub fn new(
        env: EnvKind,
        dialect: Dialect,
        bridge: BridgeConfig,
        limits: Limits,
        policy: Option<&Policy<F>>,
        hidden: usize,
        queue: PriorityQueue,
        seed: u64,
    ) -> Self {
        let vocab = Vocabulary::for_dialect(&dialect);
        Checkpoint {
            format: FORMAT.to_string(),
            version: VERSION,
            env,
            dialect,
            bridge,
            limits,
            vocabulary: vocab.render(&(0..vocab.eos()).collect::<Vec<_>>()),
            hidden: policy.map_or(hidden, |p| p.hidden()),
            params: policy.map(|p| p.params().to_vec()),
            queue,
            seed,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("checkpoint serializes")
    }

    pub fn from_json(text: &str) -> Result<Self, CheckpointError> {
        let value: serde_json::Value = serde_json::from_str(text).map_err(|e| CheckpointError::Corrupt(e.to_string()))?;
        if value.get("format").and_then(|f| f.as_str()) != Some(FORMAT) {
            return Err(CheckpointError::Corrupt(format!("missing format tag \"{FORMAT}\"")));
        }
        match value.get("version").and_then(|v| v.as_u64()) {
            Some(v) if v == VERSION as u64 => {}
            Some(v) => return Err(CheckpointError::Version(v as u32)),
            None => return Err(CheckpointError::Corrupt("missing version".into())),
        }
        let ck: Checkpoint<F> = serde_json::from_value(value).map_err(|e| CheckpointError::Corrupt(e.to_string()))?;
        let vocab = Vocabulary::for_dialect(&ck.dialect);
        if ck.vocabulary != vocab.render(&(0..vocab.eos()).collect::<Vec<_>>()) {
            return Err(CheckpointError::Corrupt("vocabulary does not match dialect".into()));
        }
        if let Some(p) = &ck.params {
            if p.len() != Layout::new(vocab.size(), ck.hidden).total {
                return Err(CheckpointError::Corrupt("parameter count does not match shape".into()));
            }
        }
        Ok(ck)
    }

    pub fn save(&self, path: &Path) -> Result<(), CheckpointError> {
        std::fs::write(path, self.to_json())?;
        Ok(())
    }

    pub fn load(path: &Path) -> Result<Self, CheckpointError> {
        Self::from_json(&std::fs::read_to_string(path)?)
    }

    pub fn policy(&self) -> Option<Policy<F>> {
        let vocab = Vocabulary::for_dialect(&self.dialect);
        self.params.clone().map(|p| Policy::from_params(vocab.size(), self.hidden, p))
    }
}
