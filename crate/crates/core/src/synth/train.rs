use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::early_stop::EarlyStopper;
use super::evaluate::{EnvEvaluator, ProgramEvaluator};
use super::objective::{pqt_gradient, reinforce_update, Baseline, RewardScale};
use super::optim::RmsProp;
use super::policy::Policy;
use super::queue::PriorityQueue;
use super::vocab::Vocabulary;
use super::SynthError;
use crate::bridge::BridgeConfig;
use crate::envs::EnvKind;
use crate::lang::{Dialect, Program};
use crate::machine::Limits;
use crate::scalar::Real;
use crate::seed;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Synthesizer {
    #[default]
    Learned,
    Random,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct TrainConfig {
    pub env: EnvKind,
    pub dialect: Dialect,
    pub bridge: BridgeConfig,
    pub limits: Limits,
    pub synthesizer: Synthesizer,
    pub batch_size: usize,
    pub episodes: usize,
    pub pqt_weight: f64,
    pub entropy_weight: f64,
    pub queue_size: usize,
    pub baseline_decay: f64,
    pub learning_rate: f64,
    pub rms_decay: f64,
    pub rms_epsilon: f64,
    pub hidden: usize,
    pub max_program_length: usize,
    /// `None` follows the environment (off for Taxi).
    pub early_stopping: Option<bool>,
    pub early_stop_window: usize,
    pub early_stop_decay: f64,
    pub final_episodes: usize,
    pub experts: Vec<String>,
    pub seed: u64,
}

impl Default for TrainConfig {
    fn default() -> Self {
        TrainConfig {
            env: EnvKind::CartPole,
            dialect: Dialect::full(),
            bridge: BridgeConfig::default(),
            limits: Limits::default(),
            synthesizer: Synthesizer::Learned,
            batch_size: 4,
            episodes: 100_000,
            pqt_weight: 1.0,
            entropy_weight: 0.01,
            queue_size: 10,
            baseline_decay: 0.99,
            learning_rate: 1e-4,
            rms_decay: 0.99,
            rms_epsilon: 1e-8,
            hidden: 50,
            max_program_length: 100,
            early_stopping: None,
            early_stop_window: 1000,
            early_stop_decay: 0.999,
            final_episodes: 100,
            experts: Vec::new(),
            seed: 0,
        }
    }
}

impl TrainConfig {
    pub fn validate(&self) -> Result<(), SynthError> {
        let weights = [
            ("pqt_weight", self.pqt_weight),
            ("entropy_weight", self.entropy_weight),
            ("learning_rate", self.learning_rate),
            ("baseline_decay", self.baseline_decay),
            ("rms_decay", self.rms_decay),
            ("early_stop_decay", self.early_stop_decay),
        ];
        for (name, w) in weights {
            if !(w >= 0.0 && w.is_finite()) {
                return Err(SynthError::InvalidConfig(format!("{name} must be a finite value >= 0")));
            }
        }
        if self.batch_size == 0 {
            return Err(SynthError::InvalidConfig("batch_size must be >= 1".into()));
        }
        if self.hidden == 0 {
            return Err(SynthError::InvalidConfig("hidden must be >= 1".into()));
        }
        Ok(())
    }

    pub fn early_stopping_enabled(&self) -> bool {
        self.early_stopping.unwrap_or_else(|| self.env.uses_early_stopping())
    }
}

/// One training episode.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EpisodeRecord {
    pub episode: usize,
    pub program: String,
    pub reward: f64,
    pub valid: bool,
    /// Best reward in the queue after this episode; `None` while empty.
    pub queue_max: Option<f64>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StopReason {
    EpisodeCap,
    EarlyStop,
}

/// Outcome of [`final_select`]: the best program by re-tested mean.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Selection {
    pub program: String,
    pub mean: f64,
    /// Every candidate with its mean, in queue order.
    pub candidates: Vec<(String, f64)>,
}

#[derive(Clone, Debug)]
pub struct TrainResult<F> {
    pub queue: PriorityQueue,
    pub log: Vec<EpisodeRecord>,
    pub best: Option<Selection>,
    pub stop: StopReason,
    /// Absent for random search.
    pub policy: Option<Policy<F>>,
}

impl<F> TrainResult<F> {
    /// Queue maximum after each episode (expert seeding included).
    pub fn best_so_far(&self) -> Vec<Option<f64>> {
        self.log.iter().map(|r| r.queue_max).collect()
    }
}

fn mean<F: Real>(xs: &[F]) -> f64 {
    if xs.is_empty() {
        return f64::NAN;
    }
    xs.iter().map(|x| x.to_f64_lossy()).sum::<f64>() / xs.len() as f64
}

/// Evaluate every expert once and insert it with its measured reward.
pub fn seed_queue<F: Real>(
    queue: &mut PriorityQueue,
    experts: &[String],
    evaluator: &dyn ProgramEvaluator<F>,
    seed: u64,
) -> Result<Vec<f64>, SynthError> {
    let dialect = *evaluator.dialect();
    let mut rewards = Vec::with_capacity(experts.len());
    for (i, text) in experts.iter().enumerate() {
        let program = match Program::parse(text, &dialect) {
            Ok(p) => p,
            Err(e) if Program::parse(text, &Dialect::full()).is_ok() => {
                return Err(SynthError::DialectMismatch { program: text.clone(), reason: e.to_string() })
            }
            Err(e) => return Err(SynthError::InvalidExpert { program: text.clone(), reason: e.to_string() }),
        };
        let r = mean(&evaluator.evaluate(&program, 1, seed::derive(seed, seed::stream::EXPERT, i as u64)));
        queue.insert(program.render(), r);
        rewards.push(r);
    }
    Ok(rewards)
}

/// Re-evaluate every queue member over `episodes` common-seed episodes and
/// return the best mean; ties go to the shorter, then lexicographically smaller, text.
pub fn final_select<F: Real>(
    queue: &PriorityQueue,
    evaluator: &dyn ProgramEvaluator<F>,
    episodes: usize,
    seed: u64,
) -> Result<Selection, SynthError> {
    if queue.is_empty() {
        return Err(SynthError::EmptyQueue);
    }
    let dialect = *evaluator.dialect();
    let final_seed = seed::derive(seed, seed::stream::FINAL, 0);
    let candidates: Vec<(String, f64)> = queue
        .entries()
        .par_iter()
        .map(|e| {
            let score = match Program::parse(&e.program, &dialect) {
                Ok(p) => mean(&evaluator.evaluate(&p, episodes, final_seed)),
                Err(_) => evaluator.min_return().to_f64_lossy(),
            };
            (e.program.clone(), score)
        })
        .collect();
    let (program, mean) = candidates
        .iter()
        .min_by(|a, b| {
            b.1.total_cmp(&a.1).then(a.0.len().cmp(&b.0.len())).then(a.0.cmp(&b.0))
        })
        .cloned()
        .expect("queue is non-empty");
    Ok(Selection { program, mean, candidates })
}

/// Train on the configured environment.
pub fn train<F: Real>(config: &TrainConfig) -> Result<TrainResult<F>, SynthError> {
    config.validate()?;
    let evaluator = EnvEvaluator::<F>::new(config.env, config.dialect, &config.bridge, config.limits)?;
    match config.synthesizer {
        Synthesizer::Learned => train_with(config, &evaluator),
        Synthesizer::Random => random_search(config, &evaluator),
    }
}

struct Loop<'a, F: Real> {
    config: &'a TrainConfig,
    evaluator: &'a dyn ProgramEvaluator<F>,
    vocab: Vocabulary,
    queue: PriorityQueue,
    log: Vec<EpisodeRecord>,
    stopper: Option<EarlyStopper>,
}

impl<'a, F: Real> Loop<'a, F> {
    fn new(config: &'a TrainConfig, evaluator: &'a dyn ProgramEvaluator<F>) -> Result<Self, SynthError> {
        config.validate()?;
        let mut queue = PriorityQueue::new(config.queue_size);
        seed_queue(&mut queue, &config.experts, evaluator, config.seed)?;
        let stopper = config
            .early_stopping_enabled()
            .then(|| EarlyStopper::new(config.early_stop_window, config.early_stop_decay));
        Ok(Loop {
            config,
            evaluator,
            vocab: Vocabulary::for_dialect(evaluator.dialect()),
            queue,
            log: Vec::new(),
            stopper,
        })
    }

    /// Evaluate a batch of sampled symbol strings, one episode each; invalid
    /// programs get the minimum return and stay out of the queue. Returns
    /// the rewards and whether early stopping fired.
    fn run_batch(&mut self, batch: &[Vec<usize>]) -> (Vec<f64>, bool) {
        let first = self.log.len();
        let dialect = *self.evaluator.dialect();
        let evaluator = self.evaluator;
        let base = self.config.seed;
        let outcomes: Vec<(String, bool, f64)> = batch
            .par_iter()
            .enumerate()
            .map(|(i, symbols)| {
                let text = self.vocab.render(symbols);
                match Program::parse(&text, &dialect) {
                    Ok(p) => {
                        let s = seed::derive(base, seed::stream::EPISODE, (first + i) as u64);
                        (text, true, mean(&evaluator.evaluate(&p, 1, s)))
                    }
                    Err(_) => (text, false, evaluator.min_return().to_f64_lossy()),
                }
            })
            .collect();
        let floor = self.evaluator.min_return().to_f64_lossy();
        let mut stop = false;
        let mut rewards = Vec::with_capacity(batch.len());
        for (text, valid, reward) in outcomes {
            if valid {
                self.queue.insert(&text, reward);
            }
            let queue_max = self.queue.max_reward();
            if let Some(s) = self.stopper.as_mut() {
                stop |= s.push(queue_max.unwrap_or(floor));
            }
            self.log.push(EpisodeRecord { episode: self.log.len(), program: text, reward, valid, queue_max });
            rewards.push(reward);
        }
        (rewards, stop)
    }

    fn finish(self, policy: Option<Policy<F>>, stop: StopReason) -> TrainResult<F> {
        let best = final_select(&self.queue, self.evaluator, self.config.final_episodes, self.config.seed).ok();
        TrainResult { queue: self.queue, log: self.log, best, stop, policy }
    }
}

/// Policy-gradient plus priority-queue training against `evaluator`.
pub fn train_with<F: Real>(
    config: &TrainConfig,
    evaluator: &dyn ProgramEvaluator<F>,
) -> Result<TrainResult<F>, SynthError> {
    let mut lp = Loop::new(config, evaluator)?;
    let vocab = lp.vocab.clone();
    let mut init_rng = ChaCha8Rng::seed_from_u64(seed::derive(config.seed, seed::stream::POLICY_INIT, 0));
    let mut policy = Policy::<F>::new(vocab.size(), config.hidden, &mut init_rng);
    let mut rng = ChaCha8Rng::seed_from_u64(seed::derive(config.seed, seed::stream::SAMPLER, 0));
    let mut optimizer = RmsProp::new(policy.params().len(), config.learning_rate, config.rms_decay, config.rms_epsilon);
    let mut baseline = Baseline::new(config.baseline_decay);
    let mut scale = RewardScale::default();
    let entropy_weight = F::of(config.entropy_weight);
    let pqt_weight = F::of(config.pqt_weight);
    let mut grad = vec![F::zero(); policy.params().len()];

    let mut stop = StopReason::EpisodeCap;
    while lp.log.len() < config.episodes {
        let n = config.batch_size.min(config.episodes - lp.log.len());
        let batch: Vec<Vec<usize>> =
            (0..n).map(|_| policy.sample(&mut rng, config.max_program_length).symbols).collect();
        let (rewards, early) = lp.run_batch(&batch);

        grad.iter_mut().for_each(|g| *g = F::zero());
        let scored: Vec<(Vec<usize>, f64)> = batch.into_iter().zip(rewards).collect();
        reinforce_update(&policy, &scored, entropy_weight, &mut baseline, &mut scale, &mut grad);
        if !lp.queue.is_empty() && config.pqt_weight > 0.0 {
            let members: Vec<Vec<usize>> = lp
                .queue
                .entries()
                .iter()
                .map(|e| vocab.encode_program(&Program::parse(&e.program, evaluator.dialect()).expect("queue holds valid programs")))
                .collect::<Result<_, _>>()?;
            pqt_gradient(&policy, &members, pqt_weight, &mut grad);
        }
        optimizer.ascend(policy.params_mut(), &grad);

        if early {
            stop = StopReason::EarlyStop;
            break;
        }
    }
    Ok(lp.finish(Some(policy), stop))
}

/// Control synthesizer: uniform token-by-token sampling over the same
/// vocabulary (EOS included) and length cap, same queue and selection.
pub fn random_search<F: Real>(
    config: &TrainConfig,
    evaluator: &dyn ProgramEvaluator<F>,
) -> Result<TrainResult<F>, SynthError> {
    let mut lp = Loop::new(config, evaluator)?;
    let size = lp.vocab.size();
    let eos = lp.vocab.eos();
    let mut rng = ChaCha8Rng::seed_from_u64(seed::derive(config.seed, seed::stream::SAMPLER, 0));
    let mut stop = StopReason::EpisodeCap;
    while lp.log.len() < config.episodes {
        let n = config.batch_size.min(config.episodes - lp.log.len());
        let batch: Vec<Vec<usize>> = (0..n)
            .map(|_| {
                let mut s = Vec::new();
                while s.len() < config.max_program_length {
                    let y = rng.gen_range(0..size);
                    if y == eos {
                        break;
                    }
                    s.push(y);
                }
                s
            })
            .collect();
        if lp.run_batch(&batch).1 {
            stop = StopReason::EarlyStop;
            break;
        }
    }
    Ok(lp.finish(None, stop))
}
