use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::Result;
use clap::{Parser, Subcommand, ValueEnum};
use maale_core::{Env, EnvError, ModeId};
use maale_harness::HarnessError;

mod commands;
mod pnm;

#[derive(Parser)]
#[command(
    name = "maale",
    version,
    about = "Multiplayer arcade environments for RL"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Table,
    Csv,
}

#[derive(clap::Args)]
struct GameArgs {
    /// Game name, e.g. pong, combat, othello.
    #[arg(long)]
    game: String,
    /// Mode number; the game's default mode when omitted.
    #[arg(long)]
    mode: Option<u32>,
}

#[derive(clap::Args)]
struct SeedArg {
    #[arg(long, env = "MAALE_SEED", default_value_t = 0)]
    seed: u64,
}

#[derive(Subcommand)]
enum Command {
    /// List every game with its reward structure and player counts.
    ListGames {
        #[arg(long, value_enum, default_value = "table")]
        format: Format,
    },
    /// List the modes of one game.
    Modes {
        #[arg(long)]
        game: String,
        /// Only modes for this many players.
        #[arg(long)]
        players: Option<usize>,
        #[arg(long, value_enum, default_value = "table")]
        format: Format,
    },
    /// Play one episode and optionally record its frames.
    Rollout {
        #[command(flatten)]
        game: GameArgs,
        #[command(flatten)]
        seed: SeedArg,
        /// Agent-step cap.
        #[arg(long, default_value_t = maale_harness::DEFAULT_MAX_STEPS)]
        steps: u64,
        /// Directory for frame_NNNNNN.pgm/.ppm and log.csv.
        #[arg(long)]
        record: Option<PathBuf>,
        /// random, scripted:<ACTION> or a checkpoint path; used for every seat.
        #[arg(long, default_value = "random")]
        policy: String,
    },
    /// Self-play Q-learning; writes a checkpoint and a learning curve.
    Train {
        #[command(flatten)]
        game: GameArgs,
        #[command(flatten)]
        seed: SeedArg,
        #[arg(long, default_value_t = 200_000)]
        steps: u64,
        #[arg(long, default_value_t = 0.0001)]
        lr: f64,
        #[arg(long, default_value_t = 0.99)]
        gamma: f64,
        #[arg(long, default_value_t = 0.01)]
        final_epsilon: f64,
        #[arg(long, default_value_t = 200_000)]
        epsilon_timesteps: u64,
        #[arg(long, default_value = "ram")]
        features: maale_harness::FeatureMode,
        /// Evaluate against random play every this many steps (0: only at the end).
        #[arg(long, default_value_t = 0)]
        eval_every: u64,
        #[arg(long, default_value_t = 20)]
        eval_episodes: usize,
        #[arg(long)]
        checkpoint: PathBuf,
        /// Write the learning curve here instead of standard output.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Evaluate a policy in seat 0 against random opponents.
    Eval {
        #[command(flatten)]
        game: GameArgs,
        #[command(flatten)]
        seed: SeedArg,
        #[arg(long, default_value = "random")]
        policy: String,
        #[arg(long, default_value_t = 100)]
        episodes: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Round robin between policies in a 2-player zero-sum game.
    Tournament {
        #[command(flatten)]
        game: GameArgs,
        #[command(flatten)]
        seed: SeedArg,
        /// Repeat once per entrant (at least two).
        #[arg(long = "policy")]
        policies: Vec<String>,
        #[arg(long, default_value_t = 20)]
        episodes_per_pair: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Measure rendered steps per second under random play.
    Bench {
        #[arg(long, default_value = "pong")]
        game: String,
        #[arg(long)]
        mode: Option<u32>,
        /// Duration of each of the two measurements.
        #[arg(long, default_value_t = 5.0)]
        seconds: f64,
    },
}

/// A flag value that is well-formed but unusable (exit code 2).
#[derive(Debug)]
pub struct UsageError(pub String);

impl std::fmt::Display for UsageError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for UsageError {}

pub fn usage(msg: impl Into<String>) -> anyhow::Error {
    UsageError(msg.into()).into()
}

fn exit_code(err: &anyhow::Error) -> u8 {
    for cause in err.chain() {
        if cause.is::<UsageError>() {
            return 2;
        }
        let env = cause.downcast_ref::<EnvError>().or_else(|| {
            match cause.downcast_ref::<HarnessError>() {
                Some(HarnessError::Env(e)) => Some(e),
                _ => None,
            }
        });
        match env {
            Some(
                EnvError::UnknownGame { .. }
                | EnvError::InvalidMode { .. }
                | EnvError::UnsupportedMode { .. },
            ) => return 3,
            Some(_) => return 1,
            None => {}
        }
        if let Some(h) = cause.downcast_ref::<HarnessError>() {
            return match h {
                HarnessError::TooFewPolicies(_)
                | HarnessError::NotTwoPlayer { .. }
                | HarnessError::NotZeroSum { .. }
                | HarnessError::PolicyMismatch { .. }
                | HarnessError::Config(_)
                | HarnessError::NoEpisodes => 2,
                _ => 1,
            };
        }
    }
    1
}

/// Resolves the game and mode, the error naming the valid modes.
pub fn open(game: &str, mode: Option<u32>) -> Result<(Env, ModeId)> {
    let env = Env::load_game(game)?;
    let mode = match mode {
        None => env.mode(),
        Some(m) => match u8::try_from(m) {
            Ok(m) => ModeId(m),
            Err(_) => {
                return Err(EnvError::InvalidMode {
                    game: env.spec().name.to_string(),
                    mode: m,
                    valid: env.spec().mode_ids(),
                }
                .into())
            }
        },
    };
    let env = Env::with_mode(game, mode)?;
    Ok((env, mode))
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::ListGames { format } => commands::list_games(format),
        Command::Modes {
            game,
            players,
            format,
        } => commands::modes(&game, players, format),
        Command::Rollout {
            game,
            seed,
            steps,
            record,
            policy,
        } => commands::rollout(&game.game, game.mode, seed.seed, steps, record, &policy),
        Command::Train {
            game,
            seed,
            steps,
            lr,
            gamma,
            final_epsilon,
            epsilon_timesteps,
            features,
            eval_every,
            eval_episodes,
            checkpoint,
            out,
        } => {
            let mut config = maale_harness::TrainConfig {
                gamma,
                lr,
                final_epsilon,
                epsilon_timesteps,
                train_steps: steps,
                seed: seed.seed,
                ..Default::default()
            };
            config.features.mode = features;
            if eval_episodes == 0 {
                return Err(usage("--eval-episodes must be at least 1"));
            }
            commands::train(
                &game.game,
                game.mode,
                config,
                eval_every,
                eval_episodes,
                &checkpoint,
                out,
            )
        }
        Command::Eval {
            game,
            seed,
            policy,
            episodes,
            out,
        } => {
            if episodes == 0 {
                return Err(usage("--episodes must be at least 1"));
            }
            commands::eval(&game.game, game.mode, seed.seed, &policy, episodes, out)
        }
        Command::Tournament {
            game,
            seed,
            policies,
            episodes_per_pair,
            out,
        } => {
            if policies.len() < 2 {
                return Err(usage(format!(
                    "a tournament needs at least two --policy flags, got {}",
                    policies.len()
                )));
            }
            if episodes_per_pair == 0 {
                return Err(usage("--episodes-per-pair must be at least 1"));
            }
            commands::tournament(
                &game.game,
                game.mode,
                seed.seed,
                &policies,
                episodes_per_pair,
                out,
            )
        }
        Command::Bench {
            game,
            mode,
            seconds,
        } => {
            if !(seconds.is_finite() && seconds > 0.0) {
                return Err(usage("--seconds must be positive"));
            }
            commands::bench(&game, mode, seconds)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {:#}", e);
            ExitCode::from(exit_code(&e))
        }
    }
}
