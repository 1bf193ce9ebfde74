//! Evaluation and desk-scale training on top of `maale-core`: an episode
//! runner, per-step reward metrics against random play, self-play
//! Q-learning with shared parameters, round-robin tournaments and
//! checkpoints.

pub mod checkpoint;
pub mod episode;
pub mod error;
pub mod eval;
pub mod policy;
pub mod train;

pub use episode::{run_episode, EpisodeResult, DEFAULT_MAX_STEPS};
pub use error::HarnessError;
pub use eval::{evaluate_vs_random, random_baseline, tournament, MetricReport, TournamentResult};
pub use policy::{FeatureConfig, FeatureMode, Observation, Policy, QPolicy};
pub use train::{train_self_play, train_with_curve, CurveConfig, CurvePoint, TrainConfig};
