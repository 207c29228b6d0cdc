//! BF++: a small esoteric language for agents in partially observable
//! environments, its virtual machine, the observation/action bridge, three
//! control environments, and a program synthesizer.
//!
//! Numeric code is generic over [`Real`] (`f32` or `f64`); the aliases below
//! fix the scalar for common use.

pub mod bridge;
pub mod envs;
pub mod lang;
pub mod machine;
pub mod scalar;
pub mod seed;
pub mod synth;

pub use bridge::{BridgeConfig, BridgeError, DimMode, SpaceDim};
pub use envs::{EnvKind, Environment};
pub use lang::{Dialect, LoopMode, Program, Token, ValidationError};
pub use machine::{run_episode, Limits, Machine, Termination};
pub use scalar::Real;

pub type IoBridge64 = bridge::IoBridge<f64>;
pub type IoBridge32 = bridge::IoBridge<f32>;
pub type Discretizer64 = bridge::Discretizer<f64>;
pub type Discretizer32 = bridge::Discretizer<f32>;
pub type SpaceDim64 = bridge::SpaceDim<f64>;
pub type EpisodeResult64 = machine::EpisodeResult<f64>;
pub type TraceRecord64 = machine::TraceRecord<f64>;
pub type Policy64 = synth::Policy<f64>;
pub type Policy32 = synth::Policy<f32>;
pub type TrainResult64 = synth::TrainResult<f64>;
pub type Checkpoint64 = synth::Checkpoint<f64>;
pub type EnvEvaluator64 = synth::EnvEvaluator<f64>;
