//! The multiplayer environment handle: load a game, pick a mode, reset with a
//! seed, then step all players at once.

use crate::action::{Action, Stick};
use crate::error::EnvError;
use crate::games::{Dynamics, Event, GameKind, GameSpec, StepOutcome, TerminalCause};
use crate::modes::ModeId;
use crate::rng::{rng_from_seed, GameRng};
use crate::screen::Screen;

/// The stall-forfeit rule for games a player can freeze indefinitely.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct StallConfig {
    pub enabled: bool,
    /// Frames without a progress event before the staller forfeits.
    pub threshold_frames: u32,
    /// Paid to the staller; the opponent receives the negation.
    pub forfeit_reward: i32,
}

impl StallConfig {
    pub const DEFAULT_THRESHOLD: u32 = 300;

    pub fn for_game(spec: &GameSpec) -> Self {
        StallConfig {
            enabled: spec.stall_enabled,
            threshold_frames: Self::DEFAULT_THRESHOLD,
            forfeit_reward: -1,
        }
    }
}

#[derive(Clone)]
struct Session {
    dynamics: Box<dyn Dynamics>,
    rng: GameRng,
    frame: u64,
    idle_frames: u32,
    outcome: StepOutcome,
    terminal: Option<TerminalCause>,
    screen: Screen,
    screen_fresh: bool,
}

/// One loaded game. Not thread-safe to share, but freely movable between
/// threads. Cloning snapshots the whole game, RNG included.
#[derive(Clone)]
pub struct Env {
    kind: GameKind,
    mode: ModeId,
    players: usize,
    stall: StallConfig,
    session: Option<Session>,
}

impl std::fmt::Debug for Env {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Env")
            .field("game", &self.kind.name())
            .field("mode", &self.mode)
            .field("players", &self.players)
            .field("reset", &self.session.is_some())
            .finish()
    }
}

impl Env {
    /// Loads a built-in game with its default mode selected.
    pub fn load_game(name: &str) -> Result<Self, EnvError> {
        let kind = GameKind::from_name(name)?;
        let spec = kind.spec();
        let players = spec.mode(spec.default_mode)?.players;
        Ok(Env {
            kind,
            mode: spec.default_mode,
            players,
            stall: StallConfig::for_game(spec),
            session: None,
        })
    }

    /// Loads `name` and selects `mode` in one go.
    pub fn with_mode(name: &str, mode: ModeId) -> Result<Self, EnvError> {
        let mut env = Self::load_game(name)?;
        env.set_mode(mode)?;
        Ok(env)
    }

    pub fn game(&self) -> GameKind {
        self.kind
    }

    pub fn spec(&self) -> &'static GameSpec {
        self.kind.spec()
    }

    pub fn mode(&self) -> ModeId {
        self.mode
    }

    pub fn num_players(&self) -> usize {
        self.players
    }

    /// Modes in ascending order, optionally only those for `num_players`.
    pub fn available_modes(&self, num_players: Option<usize>) -> Vec<ModeId> {
        let mut v: Vec<ModeId> = self
            .spec()
            .modes
            .iter()
            .filter(|m| num_players.is_none_or(|n| m.players == n))
            .map(|m| m.mode)
            .collect();
        v.sort();
        v
    }

    /// Selects a mode; the next `reset` starts a game in it.
    pub fn set_mode(&mut self, mode: ModeId) -> Result<(), EnvError> {
        let info = self.spec().mode(mode)?;
        self.mode = mode;
        self.players = info.players;
        self.session = None;
        Ok(())
    }

    pub fn minimal_action_set(&self) -> &'static [Action] {
        self.spec().minimal_actions
    }

    pub fn stall_config(&self) -> StallConfig {
        self.stall
    }

    pub fn set_stall_config(&mut self, stall: StallConfig) {
        assert!(
            stall.threshold_frames >= 1,
            "stall threshold must be positive"
        );
        self.stall = stall;
    }

    /// Starts a new game whose whole course is fixed by `seed` and the
    /// actions that follow.
    pub fn reset(&mut self, seed: u64) -> Result<(), EnvError> {
        let mut rng = rng_from_seed(seed);
        let dynamics = self.kind.build(self.mode, &mut rng)?;
        self.session = Some(Session {
            dynamics,
            rng,
            frame: 0,
            idle_frames: 0,
            outcome: StepOutcome::default(),
            terminal: None,
            screen: Screen::new(),
            screen_fresh: false,
        });
        Ok(())
    }

    fn session(&self) -> Result<&Session, EnvError> {
        self.session.as_ref().ok_or(EnvError::NotReset)
    }

    /// Advances one frame with one action per player and returns this
    /// frame's rewards.
    pub fn act(&mut self, actions: &[Action]) -> Result<Vec<i32>, EnvError> {
        self.step(actions)?;
        Ok(self.session()?.outcome.rewards.clone())
    }

    /// Like [`Env::act`] but leaves the rewards in [`Env::last_rewards`]
    /// instead of allocating.
    pub fn step(&mut self, actions: &[Action]) -> Result<(), EnvError> {
        let players = self.players;
        let stall = self.stall;
        let minimal = self.minimal_action_set();
        let s = self.session.as_mut().ok_or(EnvError::NotReset)?;
        if actions.len() != players {
            return Err(EnvError::WrongArity {
                expected: players,
                got: actions.len(),
            });
        }
        if s.terminal.is_some() {
            return Err(EnvError::ActAfterTerminal);
        }
        let mut sticks = [Stick::default(); 4];
        for (st, &a) in sticks.iter_mut().zip(actions) {
            *st = Stick::decode(a, minimal);
        }
        s.outcome.reset(players);
        s.dynamics
            .step(&sticks[..players], &mut s.rng, &mut s.outcome);
        s.frame += 1;
        s.screen_fresh = false;
        s.terminal = s.outcome.terminal;

        if stall.enabled && s.terminal.is_none() {
            if s.outcome.events.contains(&Event::Progress) {
                s.idle_frames = 0;
            } else {
                s.idle_frames += 1;
            }
            if s.idle_frames >= stall.threshold_frames {
                if let Some(staller) = s.dynamics.staller() {
                    for (p, r) in s.outcome.rewards.iter_mut().enumerate() {
                        *r += if p == staller {
                            stall.forfeit_reward
                        } else {
                            -stall.forfeit_reward
                        };
                    }
                }
                s.outcome.terminal = Some(TerminalCause::Stall);
                s.terminal = s.outcome.terminal;
            }
        }
        Ok(())
    }

    /// Rewards from the most recent frame.
    pub fn last_rewards(&self) -> &[i32] {
        self.session
            .as_ref()
            .map_or(&[], |s| s.outcome.rewards.as_slice())
    }

    /// Events from the most recent frame.
    pub fn last_events(&self) -> &[Event] {
        self.session
            .as_ref()
            .map_or(&[], |s| s.outcome.events.as_slice())
    }

    /// Per-player lives: `n ≥ 0` alive with `n` spare lives, `-1` out.
    pub fn all_lives(&self) -> Result<Vec<i32>, EnvError> {
        Ok(self.session()?.dynamics.lives())
    }

    pub fn game_over(&self) -> Result<bool, EnvError> {
        Ok(self.session()?.terminal.is_some())
    }

    pub fn terminal_cause(&self) -> Option<TerminalCause> {
        self.session.as_ref().and_then(|s| s.terminal)
    }

    /// Frames since reset.
    pub fn frame(&self) -> Result<u64, EnvError> {
        Ok(self.session()?.frame)
    }

    /// Frames since the last progress event, as seen by the stall rule.
    pub fn idle_frames(&self) -> Result<u32, EnvError> {
        Ok(self.session()?.idle_frames)
    }

    /// The current frame, rendered on first request after each step.
    pub fn screen_rgb(&mut self) -> Result<&Screen, EnvError> {
        let s = self.session.as_mut().ok_or(EnvError::NotReset)?;
        if !s.screen_fresh {
            s.dynamics.render(&mut s.screen);
            s.screen_fresh = true;
        }
        Ok(&s.screen)
    }

    /// Compact state bytes for feature extraction and debugging.
    pub fn ram(&self) -> Result<Vec<u8>, EnvError> {
        Ok(self.session()?.dynamics.ram())
    }
}
