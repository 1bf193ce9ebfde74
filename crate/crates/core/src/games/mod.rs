//! The game suite: per-game dynamics behind one [`Dynamics`] trait, and the
//! registry of names, modes, player counts and categories.

use std::sync::OnceLock;

use serde::Serialize;

use crate::action::Action;
use crate::error::EnvError;
use crate::modes::{self, ModeId, OlympicsGame};
use crate::rng::GameRng;
use crate::screen::Screen;

pub mod combat;
pub mod entombed;
pub mod maze;
pub mod maze_craze;
pub mod othello;
pub mod space_invaders;
pub mod video_olympics;
pub mod warlords;

/// Subpixel units per pixel for the fixed-point physics.
pub(crate) const FP: i32 = 256;

/// Game-theoretic grouping of a mode.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Category {
    #[serde(rename = "1v1-tournament")]
    OneVsOneTournament,
    MixedSumSurvival,
    CompetitiveRacing,
    LongTermStrategy,
    #[serde(rename = "four-player-ffa")]
    FourPlayerFreeForAll,
    #[serde(rename = "2v2-tournament")]
    TwoVsTwoTournament,
    Cooperative,
}

impl Category {
    pub fn label(self) -> &'static str {
        match self {
            Category::OneVsOneTournament => "1v1-tournament",
            Category::MixedSumSurvival => "mixed-sum-survival",
            Category::CompetitiveRacing => "competitive-racing",
            Category::LongTermStrategy => "long-term-strategy",
            Category::FourPlayerFreeForAll => "four-player-ffa",
            Category::TwoVsTwoTournament => "2v2-tournament",
            Category::Cooperative => "cooperative",
        }
    }
}

/// The reward-structure column of the catalog.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum GameTheory {
    Competitive,
    Mixed,
    CompetitiveCooperative,
}

impl GameTheory {
    pub fn label(self) -> &'static str {
        match self {
            GameTheory::Competitive => "competitive",
            GameTheory::Mixed => "mixed",
            GameTheory::CompetitiveCooperative => "competitive/cooperative",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum GameKind {
    VideoOlympics,
    Combat,
    Entombed,
    MazeCraze,
    SpaceInvaders,
    Warlords,
    Othello,
}

impl GameKind {
    pub const ALL: [GameKind; 7] = [
        GameKind::Combat,
        GameKind::Entombed,
        GameKind::MazeCraze,
        GameKind::Othello,
        GameKind::SpaceInvaders,
        GameKind::VideoOlympics,
        GameKind::Warlords,
    ];

    pub fn name(self) -> &'static str {
        match self {
            GameKind::VideoOlympics => "video_olympics",
            GameKind::Combat => "combat",
            GameKind::Entombed => "entombed",
            GameKind::MazeCraze => "maze_craze",
            GameKind::SpaceInvaders => "space_invaders",
            GameKind::Warlords => "warlords",
            GameKind::Othello => "othello",
        }
    }

    /// Resolves a game name; `pong` is accepted as an alias of Video Olympics
    /// (whose default mode is classic pong).
    pub fn from_name(name: &str) -> Result<Self, EnvError> {
        let key = name.trim().to_ascii_lowercase().replace('-', "_");
        if key == "pong" {
            return Ok(GameKind::VideoOlympics);
        }
        GameKind::ALL
            .into_iter()
            .find(|k| k.name() == key)
            .ok_or_else(|| EnvError::UnknownGame {
                name: name.to_string(),
                valid: GameKind::ALL.iter().map(|k| k.name().to_string()).collect(),
            })
    }

    pub fn spec(self) -> &'static GameSpec {
        registry()
            .iter()
            .find(|s| s.kind == self)
            .expect("every kind is registered")
    }

    /// Builds fresh dynamics for `mode`, drawing the initial state from `rng`.
    pub(crate) fn build(
        self,
        mode: ModeId,
        rng: &mut GameRng,
    ) -> Result<Box<dyn Dynamics>, EnvError> {
        let spec = self.spec();
        let info = spec.mode(mode)?;
        if !info.simulated {
            return Err(EnvError::UnsupportedMode {
                game: spec.name.to_string(),
                mode,
            });
        }
        Ok(match self {
            GameKind::VideoOlympics => Box::new(video_olympics::VideoOlympics::new(mode, rng)?),
            GameKind::Combat => Box::new(combat::Combat::new(mode, rng)?),
            GameKind::Entombed => Box::new(entombed::Entombed::new(mode, rng)?),
            GameKind::MazeCraze => Box::new(maze_craze::MazeCraze::new(mode, rng)?),
            GameKind::SpaceInvaders => Box::new(space_invaders::SpaceInvaders::new(mode, rng)?),
            GameKind::Warlords => Box::new(warlords::Warlords::new(mode, rng)?),
            GameKind::Othello => Box::new(othello::Othello::new(mode, rng)?),
        })
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ModeInfo {
    pub mode: ModeId,
    pub players: usize,
    pub category: Category,
    pub label: &'static str,
    /// False for modes that are registered but not simulated.
    pub simulated: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct GameSpec {
    pub kind: GameKind,
    pub name: &'static str,
    pub theory: GameTheory,
    pub default_mode: ModeId,
    pub modes: Vec<ModeInfo>,
    /// Whether a player can freeze the game and the stall-forfeit rule applies.
    pub stall_enabled: bool,
    pub minimal_actions: &'static [Action],
}

impl GameSpec {
    pub fn mode(&self, mode: ModeId) -> Result<&ModeInfo, EnvError> {
        self.modes
            .iter()
            .find(|m| m.mode == mode)
            .ok_or_else(|| EnvError::InvalidMode {
                game: self.name.to_string(),
                mode: mode.0 as u32,
                valid: self.mode_ids(),
            })
    }

    pub fn mode_ids(&self) -> Vec<ModeId> {
        self.modes.iter().map(|m| m.mode).collect()
    }

    /// Sorted distinct player counts across modes.
    pub fn player_counts(&self) -> Vec<usize> {
        let mut v: Vec<usize> = self.modes.iter().map(|m| m.players).collect();
        v.sort_unstable();
        v.dedup();
        v
    }

    pub fn categories(&self) -> Vec<Category> {
        let mut v = Vec::new();
        for m in &self.modes {
            if !v.contains(&m.category) {
                v.push(m.category);
            }
        }
        v
    }
}

/// Every registered game, sorted by name.
pub fn registry() -> &'static [GameSpec] {
    static REGISTRY: OnceLock<Vec<GameSpec>> = OnceLock::new();
    REGISTRY.get_or_init(build_registry)
}

fn mode(mode: ModeId, players: usize, category: Category, label: &'static str) -> ModeInfo {
    ModeInfo {
        mode,
        players,
        category,
        label,
        simulated: true,
    }
}

fn build_registry() -> Vec<GameSpec> {
    use Category::*;

    let combat_modes = modes::combat_modes()
        .into_iter()
        .map(|m| {
            let label = if modes::CombatFlags::decode(m).unwrap().is_tank() {
                "tank"
            } else {
                "plane"
            };
            mode(m, 2, OneVsOneTournament, label)
        })
        .collect();

    let entombed_modes = vec![
        mode(ModeId(2), 2, CompetitiveRacing, "competitive"),
        mode(ModeId(3), 2, Cooperative, "cooperative"),
    ];

    let maze_modes = modes::maze_craze_modes()
        .into_iter()
        .map(|m| {
            let label = match modes::MazeCrazeMode::decode(m).unwrap().game {
                modes::MazeCrazeGame::Race => "race",
                modes::MazeCrazeGame::Robbers => "robbers",
                modes::MazeCrazeGame::Capture => "capture",
            };
            mode(m, 2, CompetitiveRacing, label)
        })
        .collect();

    let si_modes = modes::space_invaders_modes()
        .into_iter()
        .map(|m| mode(m, 2, MixedSumSurvival, "survival"))
        .collect();

    let mut olympics_modes: Vec<ModeInfo> = OlympicsGame::ALL
        .iter()
        .flat_map(|g| {
            let (two, four) = g.modes();
            let g = *g;
            two.map(|m| (m, 2, g))
                .into_iter()
                .chain(four.map(|m| (m, 4, g)))
        })
        .map(|(m, players, g)| {
            let category = if players == 2 {
                OneVsOneTournament
            } else {
                TwoVsTwoTournament
            };
            ModeInfo {
                simulated: g.simulated(),
                ..mode(m, players, category, g.name())
            }
        })
        .collect();
    olympics_modes.sort_by_key(|m| m.mode);

    let mut specs = vec![
        GameSpec {
            kind: GameKind::Combat,
            name: "combat",
            theory: GameTheory::Competitive,
            default_mode: ModeId(1),
            modes: combat_modes,
            stall_enabled: false,
            minimal_actions: combat::MINIMAL_ACTIONS,
        },
        GameSpec {
            kind: GameKind::Entombed,
            name: "entombed",
            theory: GameTheory::CompetitiveCooperative,
            default_mode: ModeId(2),
            modes: entombed_modes,
            stall_enabled: false,
            minimal_actions: entombed::MINIMAL_ACTIONS,
        },
        GameSpec {
            kind: GameKind::MazeCraze,
            name: "maze_craze",
            theory: GameTheory::Competitive,
            default_mode: ModeId(0),
            modes: maze_modes,
            stall_enabled: false,
            minimal_actions: maze_craze::MINIMAL_ACTIONS,
        },
        GameSpec {
            kind: GameKind::Othello,
            name: "othello",
            theory: GameTheory::Competitive,
            default_mode: ModeId(1),
            modes: vec![mode(ModeId(1), 2, LongTermStrategy, "standard")],
            stall_enabled: true,
            minimal_actions: othello::MINIMAL_ACTIONS,
        },
        GameSpec {
            kind: GameKind::SpaceInvaders,
            name: "space_invaders",
            theory: GameTheory::Mixed,
            default_mode: ModeId(modes::SPACE_INVADERS_BASE),
            modes: si_modes,
            stall_enabled: false,
            minimal_actions: space_invaders::MINIMAL_ACTIONS,
        },
        GameSpec {
            kind: GameKind::VideoOlympics,
            name: "video_olympics",
            theory: GameTheory::Competitive,
            default_mode: ModeId(4),
            modes: olympics_modes,
            stall_enabled: false,
            minimal_actions: video_olympics::MINIMAL_ACTIONS,
        },
        GameSpec {
            kind: GameKind::Warlords,
            name: "warlords",
            theory: GameTheory::Competitive,
            default_mode: ModeId(1),
            modes: vec![mode(ModeId(1), 4, FourPlayerFreeForAll, "standard")],
            stall_enabled: false,
            minimal_actions: warlords::MINIMAL_ACTIONS,
        },
    ];
    specs.sort_by_key(|s| s.name);
    specs
}

/// One catalog row: the columns of the supported-games table.
#[derive(Debug, Clone, Serialize)]
pub struct CatalogEntry {
    pub name: &'static str,
    pub game_theory: &'static str,
    pub players: String,
    pub categories: Vec<Category>,
    pub modes: Vec<ModeInfo>,
    pub default_mode: ModeId,
}

pub fn catalog() -> Vec<CatalogEntry> {
    registry()
        .iter()
        .map(|s| CatalogEntry {
            name: s.name,
            game_theory: s.theory.label(),
            players: s
                .player_counts()
                .iter()
                .map(|p| p.to_string())
                .collect::<Vec<_>>()
                .join("/"),
            categories: s.categories(),
            modes: s.modes.clone(),
            default_mode: s.default_mode,
        })
        .collect()
}

/// The catalog as a JSON document.
pub fn catalog_json() -> String {
    serde_json::to_string_pretty(&catalog()).expect("catalog serializes")
}

// ---------------------------------------------------------------------------
// Dynamics contract

/// Why an episode ended.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum TerminalCause {
    /// Decided by score or by reaching the goal.
    ScoreLimit,
    /// A player ran out of lives (or was eliminated).
    Lives,
    /// The game's own frame limit.
    Time,
    /// The stall-forfeit rule.
    Stall,
}

/// Things that happened during one frame.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Event {
    /// A team or player scored a point.
    Point {
        player: usize,
    },
    LifeLost {
        player: usize,
    },
    Eliminated {
        player: usize,
    },
    /// The game advanced in a way that resets the stall clock.
    Progress,
    SectionPassed,
    StageRestart,
    Fired {
        player: usize,
    },
}

/// Output of one frame of dynamics.
#[derive(Debug, Clone, Default)]
pub struct StepOutcome {
    pub rewards: Vec<i32>,
    pub events: Vec<Event>,
    pub terminal: Option<TerminalCause>,
}

impl StepOutcome {
    pub fn reset(&mut self, players: usize) {
        self.rewards.clear();
        self.rewards.resize(players, 0);
        self.events.clear();
        self.terminal = None;
    }

    pub fn has(&self, e: Event) -> bool {
        self.events.contains(&e)
    }
}

/// One game's frame-level state machine.
pub trait Dynamics: Send + DynamicsClone {
    fn players(&self) -> usize;

    /// Advances one frame. `sticks` has one decoded input per player;
    /// `out` arrives zeroed and sized to the player count.
    fn step(&mut self, sticks: &[crate::action::Stick], rng: &mut GameRng, out: &mut StepOutcome);

    /// Draws the whole frame; every pixel is written.
    fn render(&self, screen: &mut Screen);

    /// Per-player lives: `n ≥ 0` is alive with `n` spare lives, `-1` is out.
    fn lives(&self) -> Vec<i32>;

    /// Compact byte snapshot of the dynamic state (positions, flags, boards).
    fn ram(&self) -> Vec<u8>;

    /// The player whose inaction stalls the game, when that notion applies.
    fn staller(&self) -> Option<usize> {
        None
    }
}

/// Object-safe cloning for boxed dynamics.
pub trait DynamicsClone {
    fn clone_box(&self) -> Box<dyn Dynamics>;
}

impl<T: Dynamics + Clone + 'static> DynamicsClone for T {
    fn clone_box(&self) -> Box<dyn Dynamics> {
        Box::new(self.clone())
    }
}

impl Clone for Box<dyn Dynamics> {
    fn clone(&self) -> Self {
        self.clone_box()
    }
}

pub(crate) fn clamp_u8(v: i32) -> u8 {
    v.clamp(0, 255) as u8
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn registry_is_sorted_and_complete() {
        let names: Vec<&str> = registry().iter().map(|s| s.name).collect();
        let mut sorted = names.clone();
        sorted.sort();
        assert_eq!(names, sorted);
        assert_eq!(names.len(), 7);
        for s in registry() {
            assert!(s.minimal_actions.contains(&Action::Noop));
            assert!(s.mode(s.default_mode).is_ok());
            let mut ids = s.mode_ids();
            ids.dedup();
            assert_eq!(ids.len(), s.modes.len(), "{} has duplicate modes", s.name);
        }
    }

    #[test]
    fn every_category_is_covered() {
        use Category::*;
        let all: Vec<Category> = registry().iter().flat_map(|s| s.categories()).collect();
        for c in [
            OneVsOneTournament,
            MixedSumSurvival,
            CompetitiveRacing,
            LongTermStrategy,
            FourPlayerFreeForAll,
            TwoVsTwoTournament,
            Cooperative,
        ] {
            assert!(all.contains(&c), "{c:?} missing");
        }
    }

    #[test]
    fn category_labels_match_serialized_names() {
        for c in [
            Category::OneVsOneTournament,
            Category::MixedSumSurvival,
            Category::CompetitiveRacing,
            Category::LongTermStrategy,
            Category::FourPlayerFreeForAll,
            Category::TwoVsTwoTournament,
            Category::Cooperative,
        ] {
            assert_eq!(
                serde_json::to_string(&c).unwrap(),
                format!("\"{}\"", c.label())
            );
        }
    }

    #[test]
    fn names_resolve() {
        assert_eq!(
            GameKind::from_name("pong").unwrap(),
            GameKind::VideoOlympics
        );
        assert_eq!(
            GameKind::from_name("Space-Invaders").unwrap(),
            GameKind::SpaceInvaders
        );
        let err = GameKind::from_name("no_such_game").unwrap_err();
        assert!(err.to_string().contains("maze_craze"));
    }

    #[test]
    fn catalog_rows() {
        let rows = catalog();
        let si = rows.iter().find(|r| r.name == "space_invaders").unwrap();
        assert_eq!((si.game_theory, si.players.as_str()), ("mixed", "2"));
        let wl = rows.iter().find(|r| r.name == "warlords").unwrap();
        assert_eq!((wl.game_theory, wl.players.as_str()), ("competitive", "4"));
        let vo = rows.iter().find(|r| r.name == "video_olympics").unwrap();
        assert_eq!(vo.players, "2/4");
        assert!(catalog_json().contains("\"quadrapong\""));
    }

    #[test]
    fn render_overwrites_every_pixel() {
        use crate::rng::rng_from_seed;
        use crate::screen::Rgb;
        for spec in registry() {
            for info in spec.modes.iter().filter(|m| m.simulated) {
                let mut rng = rng_from_seed(1);
                let game = spec.kind.build(info.mode, &mut rng).unwrap();
                let mut clean = Screen::new();
                let mut poisoned = Screen::new();
                poisoned.clear(Rgb(1, 2, 3));
                game.render(&mut clean);
                game.render(&mut poisoned);
                assert!(clean == poisoned, "{} {}", spec.name, info.mode);
            }
        }
    }
}
