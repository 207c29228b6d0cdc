mod commands;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

/// BF++ interpreter, environments and program synthesizer.
#[derive(Parser)]
#[command(name = "bfpp", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check programs against a dialect.
    Validate(ValidateArgs),
    /// Run a program on an environment and write a step trace.
    Run(RunArgs),
    /// Synthesize programs for an environment.
    Train(TrainArgs),
    /// Re-score the queue of a checkpoint and report the best program.
    Eval(EvalArgs),
}

/// Settings shared by commands that touch an environment. Flags override
/// values read from `--config`.
#[derive(Args, Clone, Default)]
pub struct Common {
    /// TOML file with any `TrainConfig` field (env, dialect, bridge, limits, seed, ...).
    #[arg(long)]
    config: Option<PathBuf>,
    /// cartpole, mountaincar or taxi.
    #[arg(long)]
    env: Option<String>,
    /// Dialect preset: bf++, bf+no-shorthands, bf+no-special, core.
    #[arg(long)]
    dialect: Option<String>,
    /// negative, non_positive or classic_zero.
    #[arg(long)]
    loop_mode: Option<String>,
    #[arg(long)]
    seed: Option<u64>,
    /// Discretization bins `d`.
    #[arg(long)]
    bins: Option<usize>,
    /// Fluid discretization history `h`.
    #[arg(long)]
    history: Option<usize>,
    /// Token executions allowed between environment steps.
    #[arg(long)]
    op_budget: Option<usize>,
    #[arg(long)]
    step_limit: Option<usize>,
    /// Output directory; defaults to `$BFPP_OUT_DIR/<run name>` or `runs/<run name>`.
    #[arg(long)]
    out_dir: Option<PathBuf>,
}

#[derive(Args)]
pub struct ValidateArgs {
    /// Program texts.
    programs: Vec<String>,
    /// File with one program per line (`#` comments).
    #[arg(long)]
    file: Option<PathBuf>,
    #[arg(long, default_value = "bf++")]
    dialect: String,
    #[arg(long, default_value = "negative")]
    loop_mode: String,
}

#[derive(Args)]
pub struct RunArgs {
    #[command(flatten)]
    common: Common,
    /// Program text.
    #[arg(long, conflicts_with = "file")]
    program: Option<String>,
    /// Program file; the program on line `--index` (0-based, comments skipped) is used.
    #[arg(long)]
    file: Option<PathBuf>,
    #[arg(long, default_value_t = 0)]
    index: usize,
    #[arg(long, default_value_t = 1)]
    episodes: usize,
}

#[derive(Args)]
pub struct TrainArgs {
    #[command(flatten)]
    common: Common,
    /// Episode cap.
    #[arg(long)]
    episodes: Option<usize>,
    /// Expert programs seeded into the priority queue.
    #[arg(long)]
    expert_file: Option<PathBuf>,
    /// learned or random.
    #[arg(long)]
    synthesizer: Option<String>,
    #[arg(long)]
    batch_size: Option<usize>,
    #[arg(long)]
    learning_rate: Option<f64>,
    #[arg(long)]
    hidden: Option<usize>,
    /// Force early stopping on or off.
    #[arg(long)]
    early_stopping: Option<bool>,
    /// Episodes used to re-score the queue at the end.
    #[arg(long)]
    final_episodes: Option<usize>,
}

#[derive(Args)]
pub struct EvalArgs {
    #[arg(long)]
    checkpoint: PathBuf,
    #[arg(long, default_value_t = 100)]
    episodes: usize,
    /// Defaults to the checkpoint's seed.
    #[arg(long)]
    seed: Option<u64>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Validate(a) => commands::validate(a),
        Command::Run(a) => commands::run(a),
        Command::Train(a) => commands::train(a),
        Command::Eval(a) => commands::eval(a),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(commands::exit_code(&e))
        }
    }
}
