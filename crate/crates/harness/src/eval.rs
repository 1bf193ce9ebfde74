use maale_core::games::{Category, GameTheory};
use maale_core::rng::derive_seed;
use maale_core::{Env, ModeId};
use rayon::prelude::*;
use serde::Serialize;

use crate::episode::{run_episode, EpisodeResult, DEFAULT_MAX_STEPS};
use crate::error::HarnessError;
use crate::policy::Policy;

/// Seed of episode `index` in a run based at `seed`.
pub fn episode_seed(seed: u64, index: u64) -> u64 {
    derive_seed(seed, index)
}

/// Mean and standard error of the mean; the error of a single sample is 0.
pub fn mean_stderr(xs: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    if xs.len() < 2 {
        return (mean, 0.0);
    }
    let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0);
    (mean, (var / n).sqrt())
}

/// Average total reward per step for seat 0 over a batch of episodes.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MetricReport {
    pub mean_reward_per_step: f64,
    pub stderr: f64,
    pub episodes: usize,
    pub opponent: String,
    pub base_seed: u64,
    pub seeds: Vec<u64>,
}

impl MetricReport {
    pub fn from_episodes(
        results: &[EpisodeResult],
        opponent: &str,
        base_seed: u64,
        seeds: Vec<u64>,
    ) -> Self {
        let per_step: Vec<f64> = results.iter().map(|r| r.reward_per_step(0)).collect();
        let (mean, stderr) = mean_stderr(&per_step);
        MetricReport {
            mean_reward_per_step: mean,
            stderr,
            episodes: results.len(),
            opponent: opponent.to_string(),
            base_seed,
            seeds,
        }
    }

    /// `self.mean - other.mean` in units of the combined standard error.
    pub fn z_over(&self, other: &MetricReport) -> f64 {
        let se = (self.stderr.powi(2) + other.stderr.powi(2)).sqrt();
        (self.mean_reward_per_step - other.mean_reward_per_step) / se
    }
}

/// Runs `episodes` episodes in parallel with seats filled by `seats`;
/// results come back in seed order.
pub fn run_batch(
    game: &str,
    mode: ModeId,
    seats: &[&Policy],
    episodes: usize,
    seed: u64,
) -> Result<(Vec<EpisodeResult>, Vec<u64>), HarnessError> {
    if episodes == 0 {
        return Err(HarnessError::NoEpisodes);
    }
    let seeds: Vec<u64> = (0..episodes as u64)
        .map(|i| episode_seed(seed, i))
        .collect();
    let results = seeds
        .par_iter()
        .map(|&s| run_episode(game, mode, seats, s, DEFAULT_MAX_STEPS))
        .collect::<Result<Vec<_>, _>>()?;
    Ok((results, seeds))
}

/// `policy` in seat 0 against uniformly random opponents in every other seat.
pub fn evaluate_vs_random(
    policy: &Policy,
    game: &str,
    mode: ModeId,
    episodes: usize,
    seed: u64,
) -> Result<MetricReport, HarnessError> {
    let players = Env::with_mode(game, mode)?.num_players();
    let random = Policy::Random;
    let mut seats = vec![policy];
    seats.extend(std::iter::repeat_n(&random, players - 1));
    let (results, seeds) = run_batch(game, mode, &seats, episodes, seed)?;
    Ok(MetricReport::from_episodes(&results, "random", seed, seeds))
}

pub fn random_baseline(
    game: &str,
    mode: ModeId,
    episodes: usize,
    seed: u64,
) -> Result<MetricReport, HarnessError> {
    evaluate_vs_random(&Policy::Random, game, mode, episodes, seed)
}

/// Whether every episode of this mode pays rewards summing to zero.
pub fn is_zero_sum(env: &Env) -> bool {
    let info = env.spec().mode(env.mode()).expect("env mode is registered");
    env.spec().theory != GameTheory::Mixed && info.category != Category::Cooperative
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PairResult {
    pub a: usize,
    pub b: usize,
    /// Per-step reward of `a` against `b`, pooled over both seat orders.
    pub mean_a: f64,
    pub stderr: f64,
    pub episodes: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Standing {
    pub policy: usize,
    pub name: String,
    /// Mean over opponents of the pairwise per-step reward.
    pub score: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TournamentResult {
    /// Best first; ties keep input order.
    pub ranking: Vec<Standing>,
    pub pairs: Vec<PairResult>,
}

/// Round robin over every pair, each pair playing `episodes_per_pair`
/// episodes in each seat order.
pub fn tournament(
    policies: &[Policy],
    game: &str,
    mode: ModeId,
    episodes_per_pair: usize,
    seed: u64,
) -> Result<TournamentResult, HarnessError> {
    if policies.len() < 2 {
        return Err(HarnessError::TooFewPolicies(policies.len()));
    }
    let env = Env::with_mode(game, mode)?;
    if env.num_players() != 2 {
        return Err(HarnessError::NotTwoPlayer {
            game: env.spec().name.to_string(),
            mode: mode.0,
            players: env.num_players(),
        });
    }
    if !is_zero_sum(&env) {
        return Err(HarnessError::NotZeroSum {
            game: env.spec().name.to_string(),
            mode: mode.0,
        });
    }
    let n = policies.len();
    let mut pairs = Vec::new();
    let mut pair_index = 0u64;
    for a in 0..n {
        for b in a + 1..n {
            let mut samples = Vec::with_capacity(2 * episodes_per_pair);
            for (order, seats) in [[a, b], [b, a]].iter().enumerate() {
                let seat_policies = [&policies[seats[0]], &policies[seats[1]]];
                let s = derive_seed(seed, pair_index * 2 + order as u64);
                let (results, _) = run_batch(game, mode, &seat_policies, episodes_per_pair, s)?;
                let a_seat = if seats[0] == a { 0 } else { 1 };
                samples.extend(results.iter().map(|r| r.reward_per_step(a_seat)));
            }
            pair_index += 1;
            let (mean_a, stderr) = mean_stderr(&samples);
            pairs.push(PairResult {
                a,
                b,
                mean_a,
                stderr,
                episodes: samples.len(),
            });
        }
    }
    let mut ranking: Vec<Standing> = (0..n)
        .map(|i| {
            let scores: Vec<f64> = pairs
                .iter()
                .filter_map(|p| {
                    if p.a == i {
                        Some(p.mean_a)
                    } else if p.b == i {
                        Some(-p.mean_a)
                    } else {
                        None
                    }
                })
                .collect();
            Standing {
                policy: i,
                name: policies[i].describe(),
                score: scores.iter().sum::<f64>() / scores.len() as f64,
            }
        })
        .collect();
    ranking.sort_by(|x, y| y.score.total_cmp(&x.score));
    Ok(TournamentResult { ranking, pairs })
}
