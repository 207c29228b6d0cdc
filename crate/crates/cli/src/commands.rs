use std::fmt;
use std::fs;
use std::path::Path;
use std::process::ExitCode;
use std::time::Instant;

use anyhow::{anyhow, Context, Result};
use bfpp::bridge::IoBridge;
use bfpp::lang::{program_lines, DialectError, ValidationError};
use bfpp::machine::run_episode;
use bfpp::synth::{self, Checkpoint, CheckpointError, EnvEvaluator, SynthError, Synthesizer, TrainConfig};
use bfpp::{seed, BridgeError, Dialect, EnvKind, LoopMode, Program};
use serde::Serialize;

use crate::output::{run_dir, sig6, write_json, write_manifest, JsonLines};
use crate::{Common, EvalArgs, RunArgs, TrainArgs, ValidateArgs};

pub const EXIT_INVALID: u8 = 2;
pub const EXIT_RUNTIME: u8 = 3;

/// Bad user input that is not covered by a library error type.
#[derive(Debug)]
pub struct InvalidInput(pub String);

impl fmt::Display for InvalidInput {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for InvalidInput {}

fn invalid(msg: impl Into<String>) -> anyhow::Error {
    anyhow::Error::new(InvalidInput(msg.into()))
}

/// 2 for invalid programs, configs and checkpoints; 3 for anything that fails while running.
pub fn exit_code(e: &anyhow::Error) -> u8 {
    for cause in e.chain() {
        let input = cause.is::<InvalidInput>()
            || cause.is::<ValidationError>()
            || cause.is::<DialectError>()
            || cause.is::<BridgeError>()
            || cause.is::<bfpp::envs::EnvError>()
            || cause.is::<toml::de::Error>()
            || matches!(cause.downcast_ref::<CheckpointError>(), Some(CheckpointError::Corrupt(_) | CheckpointError::Version(_)))
            || matches!(
                cause.downcast_ref::<SynthError>(),
                Some(
                    SynthError::DialectMismatch { .. }
                        | SynthError::InvalidExpert { .. }
                        | SynthError::InvalidConfig(_)
                        | SynthError::TokenOutsideVocabulary { .. }
                        | SynthError::Bridge(_)
                )
            );
        if input {
            return EXIT_INVALID;
        }
    }
    EXIT_RUNTIME
}

fn dialect_from(preset: &str, loop_mode: &str) -> Result<Dialect> {
    let mode: LoopMode = loop_mode.parse()?;
    Ok(Dialect::preset(preset)?.with_loop_mode(mode))
}

/// Config file first, then flags on top.
fn load_config(common: &Common) -> Result<TrainConfig> {
    let mut cfg = match &common.config {
        Some(path) => {
            let text = fs::read_to_string(path).with_context(|| format!("reading config {}", path.display()))?;
            toml::from_str::<TrainConfig>(&text).with_context(|| format!("parsing config {}", path.display()))?
        }
        None => TrainConfig::default(),
    };
    if let Some(env) = &common.env {
        cfg.env = env.parse::<EnvKind>()?;
    }
    let mode = match &common.loop_mode {
        Some(m) => m.parse::<LoopMode>()?,
        None => cfg.dialect.loop_mode,
    };
    if let Some(preset) = &common.dialect {
        cfg.dialect = Dialect::preset(preset)?;
    }
    cfg.dialect = cfg.dialect.with_loop_mode(mode);
    if let Some(s) = common.seed {
        cfg.seed = s;
    }
    if let Some(b) = common.bins {
        cfg.bridge.bins = b;
    }
    if let Some(h) = common.history {
        cfg.bridge.history = h;
    }
    if let Some(o) = common.op_budget {
        cfg.limits.op_budget = o;
    }
    if common.step_limit.is_some() {
        cfg.limits.step_limit = common.step_limit;
    }
    Ok(cfg)
}

fn parse_program(text: &str, dialect: &Dialect) -> Result<Program> {
    Program::parse(text, dialect).with_context(|| format!("invalid program {text:?}"))
}

pub fn validate(args: ValidateArgs) -> Result<ExitCode> {
    let dialect = dialect_from(&args.dialect, &args.loop_mode)?;
    let mut items: Vec<(String, String)> = args.programs.iter().enumerate().map(|(i, p)| (format!("arg {}", i + 1), p.clone())).collect();
    if let Some(path) = &args.file {
        let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        items.extend(program_lines(&text).map(|(n, p)| (format!("{}:{}", path.display(), n), p.to_string())));
    }
    if items.is_empty() {
        return Err(invalid("no programs given"));
    }
    let mut failures = 0;
    for (origin, text) in &items {
        match Program::parse(text, &dialect) {
            Ok(p) => println!("ok\t{origin}\t{} tokens\t{}", p.len(), p.render()),
            Err(e) => {
                failures += 1;
                println!("invalid\t{origin}\tposition {}\t{}\t{e}", e.position(), e.kind());
            }
        }
    }
    Ok(if failures == 0 { ExitCode::SUCCESS } else { ExitCode::from(EXIT_INVALID) })
}

#[derive(Serialize)]
#[serde(tag = "type", rename_all = "snake_case")]
enum TraceLine<'a> {
    Step {
        episode: usize,
        #[serde(flatten)]
        record: &'a bfpp::TraceRecord64,
    },
    Footer {
        episode: usize,
        program: &'a str,
        total_reward: f64,
        steps: usize,
        termination: String,
    },
}

#[derive(Serialize)]
struct RunConfig<'a> {
    program: &'a str,
    episodes: usize,
    #[serde(flatten)]
    config: &'a TrainConfig,
}

pub fn run(args: RunArgs) -> Result<ExitCode> {
    let start = Instant::now();
    let cfg = load_config(&args.common)?;
    let text = match (&args.program, &args.file) {
        (Some(p), _) => p.clone(),
        (None, Some(path)) => {
            let body = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
            let line = program_lines(&body).nth(args.index).map(|(_, p)| p.to_string());
            line.ok_or_else(|| invalid(format!("{} has no program at index {}", path.display(), args.index)))?
        }
        (None, None) => return Err(invalid("give --program or --file")),
    };
    let program = parse_program(&text, &cfg.dialect)?;
    let mut env = cfg.env.make::<f64>();
    let mut bridge = IoBridge::for_env(env.as_mut(), &cfg.bridge)?;
    let dir = run_dir(args.common.out_dir.as_deref(), &format!("run-{}-seed{}", cfg.env, cfg.seed))?;
    let mut trace = JsonLines::create(&dir.join("trace.jsonl"))?;
    let mut totals = Vec::with_capacity(args.episodes);
    for e in 0..args.episodes {
        let s = seed::derive(cfg.seed, seed::stream::EPISODE, e as u64);
        let r = run_episode(&program, &cfg.dialect, env.as_mut(), &mut bridge, &cfg.limits, s, true);
        for record in r.trace.as_deref().unwrap_or_default() {
            trace.write(&TraceLine::Step { episode: e, record })?;
        }
        trace.write(&TraceLine::Footer {
            episode: e,
            program: program.render(),
            total_reward: r.total_reward,
            steps: r.steps,
            termination: r.termination.to_string(),
        })?;
        println!("episode {e}\treward {}\tsteps {}\t{}", sig6(r.total_reward), r.steps, r.termination);
        totals.push(r.total_reward);
    }
    trace.finish()?;
    if !totals.is_empty() {
        println!("mean reward {} over {} episodes", sig6(totals.iter().sum::<f64>() / totals.len() as f64), totals.len());
    }
    let rc = RunConfig { program: program.render(), episodes: args.episodes, config: &cfg };
    write_manifest(&dir, "run", &rc, &["trace.jsonl"], start.elapsed().as_secs_f64())?;
    println!("wrote {}", dir.display());
    Ok(ExitCode::SUCCESS)
}

fn read_experts(path: &Path) -> Result<Vec<String>> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    Ok(program_lines(&text).map(|(_, p)| p.to_string()).collect())
}

#[derive(Serialize)]
struct TrainSummary<'a> {
    synthesizer: Synthesizer,
    episodes: usize,
    stop: synth::StopReason,
    best_program: Option<&'a str>,
    best_mean: Option<f64>,
    candidates: Option<&'a [(String, f64)]>,
}

pub fn train(args: TrainArgs) -> Result<ExitCode> {
    let start = Instant::now();
    let mut cfg = load_config(&args.common)?;
    if let Some(n) = args.episodes {
        cfg.episodes = n;
    }
    if let Some(path) = &args.expert_file {
        cfg.experts.extend(read_experts(path)?);
    }
    if let Some(s) = &args.synthesizer {
        cfg.synthesizer = match s.as_str() {
            "learned" | "lstm" => Synthesizer::Learned,
            "random" => Synthesizer::Random,
            other => return Err(invalid(format!("unknown synthesizer '{other}' (learned or random)"))),
        };
    }
    if let Some(b) = args.batch_size {
        cfg.batch_size = b;
    }
    if let Some(lr) = args.learning_rate {
        cfg.learning_rate = lr;
    }
    if let Some(h) = args.hidden {
        cfg.hidden = h;
    }
    if args.early_stopping.is_some() {
        cfg.early_stopping = args.early_stopping;
    }
    if let Some(n) = args.final_episodes {
        cfg.final_episodes = n;
    }
    cfg.validate()?;
    let dir = run_dir(args.common.out_dir.as_deref(), &format!("train-{}-seed{}", cfg.env, cfg.seed))?;

    let result = synth::train::<f64>(&cfg)?;

    let ck = Checkpoint::new(
        cfg.env,
        cfg.dialect,
        cfg.bridge.clone(),
        cfg.limits,
        result.policy.as_ref(),
        cfg.hidden,
        result.queue.clone(),
        cfg.seed,
    );
    ck.save(&dir.join("checkpoint.json"))?;
    write_json(&dir.join("queue.json"), &result.queue)?;
    let mut curve = String::from("episode,best_so_far\n");
    for r in &result.log {
        curve.push_str(&format!("{},{}\n", r.episode, r.queue_max.map(sig6).unwrap_or_default()));
    }
    fs::write(dir.join("learning_curve.csv"), curve)?;
    let mut log = JsonLines::create(&dir.join("train_log.jsonl"))?;
    for r in &result.log {
        log.write(r)?;
    }
    log.finish()?;
    let summary = TrainSummary {
        synthesizer: cfg.synthesizer,
        episodes: result.log.len(),
        stop: result.stop,
        best_program: result.best.as_ref().map(|b| b.program.as_str()),
        best_mean: result.best.as_ref().map(|b| b.mean),
        candidates: result.best.as_ref().map(|b| b.candidates.as_slice()),
    };
    write_json(&dir.join("result.json"), &summary)?;
    write_manifest(
        &dir,
        "train",
        &cfg,
        &["checkpoint.json", "queue.json", "learning_curve.csv", "train_log.jsonl", "result.json"],
        start.elapsed().as_secs_f64(),
    )?;

    println!("episodes {}\tstop {:?}", result.log.len(), result.stop);
    println!("wrote {}", dir.display());
    match &result.best {
        Some(best) => {
            println!("best program {}", best.program);
            println!("score {} over {} episodes", sig6(best.mean), cfg.final_episodes);
            Ok(ExitCode::SUCCESS)
        }
        None => Err(anyhow!(SynthError::EmptyQueue).context("no valid program was found")),
    }
}

pub fn eval(args: EvalArgs) -> Result<ExitCode> {
    let ck = Checkpoint::<f64>::load(&args.checkpoint)
        .with_context(|| format!("loading checkpoint {}", args.checkpoint.display()))?;
    let evaluator = EnvEvaluator::<f64>::new(ck.env, ck.dialect, &ck.bridge, ck.limits)?;
    let seed = args.seed.unwrap_or(ck.seed);
    let best = synth::final_select(&ck.queue, &evaluator, args.episodes, seed)?;
    for (program, mean) in &best.candidates {
        println!("candidate\t{}\t{program}", sig6(*mean));
    }
    println!("best program {}", best.program);
    println!("score {} over {} episodes", sig6(best.mean), args.episodes);
    Ok(ExitCode::SUCCESS)
}
