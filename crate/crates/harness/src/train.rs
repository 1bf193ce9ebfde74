//! Self-play Q-learning with one parameter set shared by every seat.

use maale_core::preprocess::{Pipeline, PipelineConfig};
use maale_core::rng::{derive_seed, rng_from_seed};
use maale_core::{Env, ModeId};
use serde::{Deserialize, Serialize};

use crate::error::HarnessError;
use crate::eval::{evaluate_vs_random, MetricReport};
use crate::policy::{FeatureConfig, Observation, Policy, QPolicy};

/// Settings of the distributed learner this trainer stands in for. They are
/// parsed, validated for type and echoed into checkpoints, but have no
/// effect on training.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct ApexSettings {
    pub adam_epsilon: f64,
    pub buffer_size: u64,
    pub double_q: bool,
    pub dueling: bool,
    pub final_prioritized_replay_beta: f64,
    pub learning_starts: u64,
    pub n_step: u32,
    pub num_atoms: u32,
    pub num_envs_per_worker: u32,
    pub num_gpus: u32,
    pub num_workers: u32,
    pub prioritized_replay: bool,
    pub prioritized_replay_alpha: f64,
    pub prioritized_replay_beta: f64,
    pub prioritized_replay_beta_annealing_timesteps: u64,
    pub rollout_fragment_length: u32,
    pub target_network_update_freq: u64,
    pub timesteps_per_iteration: u64,
    pub train_batch_size: u32,
}

impl Default for ApexSettings {
    fn default() -> Self {
        ApexSettings {
            adam_epsilon: 0.00015,
            buffer_size: 80_000,
            double_q: true,
            dueling: true,
            final_prioritized_replay_beta: 1.0,
            learning_starts: 80_000,
            n_step: 3,
            num_atoms: 1,
            num_envs_per_worker: 8,
            num_gpus: 1,
            num_workers: 8,
            prioritized_replay: true,
            prioritized_replay_alpha: 0.5,
            prioritized_replay_beta: 0.4,
            prioritized_replay_beta_annealing_timesteps: 2_000_000,
            rollout_fragment_length: 32,
            target_network_update_freq: 50_000,
            timesteps_per_iteration: 25_000,
            train_batch_size: 512,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct TrainConfig {
    pub gamma: f64,
    /// Step size, divided among the active features of each update.
    pub lr: f64,
    pub final_epsilon: f64,
    pub epsilon_timesteps: u64,
    /// Agent steps of self-play (each one `skip` frames for every seat).
    pub train_steps: u64,
    pub seed: u64,
    pub features: FeatureConfig,
    pub apex: ApexSettings,
}

impl Default for TrainConfig {
    fn default() -> Self {
        TrainConfig {
            gamma: 0.99,
            lr: 0.0001,
            final_epsilon: 0.01,
            epsilon_timesteps: 200_000,
            train_steps: 200_000,
            seed: 0,
            features: FeatureConfig::default(),
            apex: ApexSettings::default(),
        }
    }
}

impl TrainConfig {
    pub fn validate(&self) -> Result<(), HarnessError> {
        if !(self.gamma > 0.0 && self.gamma <= 1.0) {
            return Err(HarnessError::Config(format!(
                "gamma must be in (0, 1], got {}",
                self.gamma
            )));
        }
        if !(0.0..=1.0).contains(&self.final_epsilon) {
            return Err(HarnessError::Config(format!(
                "final_epsilon must be in [0, 1], got {}",
                self.final_epsilon
            )));
        }
        if !(self.lr.is_finite() && self.lr >= 0.0) {
            return Err(HarnessError::Config(format!(
                "lr must be finite and non-negative, got {}",
                self.lr
            )));
        }
        self.features.validate().map_err(HarnessError::Config)
    }

    /// Linear from 1.0 at step 0 to `final_epsilon` at `epsilon_timesteps`,
    /// flat afterwards.
    pub fn epsilon_at(&self, step: u64) -> f64 {
        if step >= self.epsilon_timesteps {
            return self.final_epsilon;
        }
        let frac = step as f64 / self.epsilon_timesteps as f64;
        1.0 + frac * (self.final_epsilon - 1.0)
    }
}

/// Periodic evaluation during training.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CurveConfig {
    pub every: u64,
    pub episodes: usize,
    pub seed: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CurvePoint {
    pub step: u64,
    pub report: MetricReport,
}

pub const CSV_HEADER: &str = "step,mean_reward_per_step,stderr,episodes";

pub fn csv_row(step: u64, r: &MetricReport) -> String {
    format!(
        "{},{},{},{}",
        step, r.mean_reward_per_step, r.stderr, r.episodes
    )
}

pub fn curve_csv(points: &[CurvePoint]) -> String {
    let mut s = String::from(CSV_HEADER);
    s.push('\n');
    for p in points {
        s.push_str(&csv_row(p.step, &p.report));
        s.push('\n');
    }
    s
}

pub fn train_self_play(
    game: &str,
    mode: ModeId,
    config: &TrainConfig,
) -> Result<Policy, HarnessError> {
    train_with_curve(game, mode, config, None).map(|(p, _)| p)
}

/// Trains and, when asked, evaluates the greedy policy against random play
/// every `curve.every` steps and once more at the end.
pub fn train_with_curve(
    game: &str,
    mode: ModeId,
    config: &TrainConfig,
    curve: Option<CurveConfig>,
) -> Result<(Policy, Vec<CurvePoint>), HarnessError> {
    config.validate()?;
    let env = Env::with_mode(game, mode)?;
    let name = env.spec().name;
    let players = env.num_players();
    let mut q = QPolicy::new(name, mode.0, env.minimal_action_set(), config.features);
    let mut pipe = Pipeline::new(env, PipelineConfig::training());
    pipe.set_observe(config.features.needs_pixels());
    let mut rng = rng_from_seed(derive_seed(config.seed, 0x7a1a));
    let gamma = config.gamma as f32;

    let mut points = Vec::new();
    let snapshot =
        |q: &QPolicy, step: u64, points: &mut Vec<CurvePoint>| -> Result<(), HarnessError> {
            if let Some(c) = curve {
                let report = evaluate_vs_random(
                    &Policy::Q(Box::new(q.clone())),
                    name,
                    mode,
                    c.episodes,
                    c.seed,
                )?;
                points.push(CurvePoint { step, report });
            }
            Ok(())
        };

    let mut episode = 0u64;
    let mut feats: Vec<Vec<u32>> = vec![Vec::new(); players];
    let mut next_feats: Vec<Vec<u32>> = vec![Vec::new(); players];
    let mut chosen = vec![0usize; players];
    let mut actions = Vec::with_capacity(players);
    let mut step = 0u64;
    let mut fresh = true;
    while step < config.train_steps {
        if fresh {
            pipe.reset(derive_seed(config.seed, episode))?;
            episode += 1;
            for (seat, f) in feats.iter_mut().enumerate() {
                config.features.extract(&Observation::new(&pipe, seat), f);
            }
        }
        let eps = config.epsilon_at(step);
        actions.clear();
        for seat in 0..players {
            chosen[seat] = q.choose(&feats[seat], eps, &mut rng);
            actions.push(q.actions[chosen[seat]]);
        }
        let out = pipe.step(&actions)?;
        step += 1;
        for seat in 0..players {
            let target = if out.terminal {
                out.rewards[seat]
            } else {
                config
                    .features
                    .extract(&Observation::new(&pipe, seat), &mut next_feats[seat]);
                let best = q
                    .q_values(&next_feats[seat])
                    .into_iter()
                    .fold(f32::NEG_INFINITY, f32::max);
                out.rewards[seat] + gamma * best
            };
            let f = &feats[seat];
            let delta = target - q.q_value(f, chosen[seat]);
            let step_size = config.lr as f32 / f.len() as f32;
            q.nudge(f, chosen[seat], step_size * delta);
        }
        std::mem::swap(&mut feats, &mut next_feats);
        fresh = out.terminal;
        if let Some(c) = curve {
            if c.every > 0 && step.is_multiple_of(c.every) && step < config.train_steps {
                snapshot(&q, step, &mut points)?;
            }
        }
    }
    snapshot(&q, step, &mut points)?;
    q.epsilon = 0.0;
    Ok((Policy::Q(Box::new(q)), points))
}
