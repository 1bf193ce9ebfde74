use maale_core::preprocess::{Pipeline, PipelineConfig};
use maale_core::rng::{derive_seed, rng_from_seed};
use maale_core::{Env, ModeId, TerminalCause};

use crate::error::HarnessError;
use crate::policy::{Observation, Policy};

/// Agent-step cap for evaluation episodes (108k frames at skip 4).
pub const DEFAULT_MAX_STEPS: u64 = 27_000;

#[derive(Debug, Clone, PartialEq)]
pub struct EpisodeResult {
    /// Unclipped reward totals, one per seat.
    pub totals: Vec<i64>,
    /// Agent steps taken (each one `skip` frames).
    pub length: u64,
    /// `None` when the step cap cut the episode short.
    pub cause: Option<TerminalCause>,
}

impl EpisodeResult {
    pub fn reward_per_step(&self, seat: usize) -> f64 {
        self.totals[seat] as f64 / self.length as f64
    }
}

/// Seed for the policy acting in `seat` during the episode seeded `seed`.
pub fn policy_seed(seed: u64, seat: usize) -> u64 {
    derive_seed(seed, 0x9011_0000 + seat as u64)
}

pub(crate) fn check_actions(env: &Env, policies: &[&Policy]) -> Result<(), HarnessError> {
    if policies.len() != env.num_players() {
        return Err(HarnessError::PolicyCount {
            expected: env.num_players(),
            got: policies.len(),
        });
    }
    for p in policies {
        match p {
            Policy::Scripted(a) if !env.minimal_action_set().contains(a) => {
                return Err(HarnessError::Config(format!(
                    "scripted action {} is not in the minimal action set of {}",
                    a.name(),
                    env.spec().name
                )));
            }
            Policy::Q(q) if q.game != env.spec().name || q.mode != env.mode().0 => {
                return Err(HarnessError::PolicyMismatch {
                    trained: q.game.clone(),
                    trained_mode: q.mode,
                    game: env.spec().name.to_string(),
                    mode: env.mode().0,
                });
            }
            _ => {}
        }
    }
    Ok(())
}

/// Plays one episode through the evaluation pipeline (sticky actions, frame
/// skip, unclipped rewards). Frames are rendered only if some policy reads
/// pixels.
pub fn run_episode(
    game: &str,
    mode: ModeId,
    policies: &[&Policy],
    seed: u64,
    max_steps: u64,
) -> Result<EpisodeResult, HarnessError> {
    let env = Env::with_mode(game, mode)?;
    check_actions(&env, policies)?;
    let players = env.num_players();
    let mut pipe = Pipeline::new(env, PipelineConfig::default());
    pipe.set_observe(policies.iter().any(|p| p.needs_pixels()));
    pipe.reset(seed)?;

    let mut rngs: Vec<_> = (0..players)
        .map(|s| rng_from_seed(policy_seed(seed, s)))
        .collect();
    let mut scratch = Vec::new();
    let mut totals = vec![0i64; players];
    let mut actions = Vec::with_capacity(players);
    let mut length = 0;
    while length < max_steps.max(1) {
        actions.clear();
        for (seat, policy) in policies.iter().enumerate() {
            let obs = Observation::new(&pipe, seat);
            actions.push(policy.act(&obs, &mut rngs[seat], &mut scratch));
        }
        let step = pipe.step(&actions)?;
        length += 1;
        for (t, r) in totals.iter_mut().zip(&step.raw_rewards) {
            *t += *r as i64;
        }
        if step.terminal {
            break;
        }
    }
    Ok(EpisodeResult {
        totals,
        length,
        cause: pipe.env().terminal_cause(),
    })
}
