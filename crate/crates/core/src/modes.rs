//! Mode numbering for every game. Each game family encodes its variant
//! options differently: lookup tables (Combat, Video Olympics), a bitfield
//! over a base value (Space Invaders), `4n + k` (Maze Craze), or a plain
//! two-entry mapping (Entombed).

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::EnvError;

/// A game variant number, as printed in the game manuals.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct ModeId(pub u8);

impl ModeId {
    pub const MAX: u8 = 64;

    pub fn value(self) -> u8 {
        self.0
    }
}

impl fmt::Display for ModeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl From<ModeId> for u32 {
    fn from(m: ModeId) -> u32 {
        m.0 as u32
    }
}

fn invalid(game: &str, mode: u32, valid: Vec<ModeId>) -> EnvError {
    EnvError::InvalidMode {
        game: game.to_string(),
        mode,
        valid,
    }
}

// ---------------------------------------------------------------------------
// Combat

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum CombatStyle {
    Tank {
        maze: bool,
        billiards: bool,
        invisible: bool,
    },
    Plane {
        guided: bool,
        jet: bool,
    },
}

/// Combat variant options. Tank options and plane options are disjoint, which
/// the enum enforces.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CombatFlags {
    pub style: CombatStyle,
}

const COMBAT_TANK_TABLE: [(u8, bool, bool, bool); 8] = [
    (1, false, false, false),
    (2, true, false, false),
    (8, false, true, false),
    (9, true, true, false),
    (10, false, false, true),
    (11, true, false, true),
    (13, false, true, true),
    (14, true, true, true),
];

const COMBAT_PLANE_TABLE: [(u8, bool, bool); 4] = [
    (15, false, false),
    (16, true, false),
    (21, false, true),
    (22, true, true),
];

impl CombatFlags {
    pub fn tank(maze: bool, billiards: bool, invisible: bool) -> Self {
        CombatFlags {
            style: CombatStyle::Tank {
                maze,
                billiards,
                invisible,
            },
        }
    }

    pub fn plane(guided: bool, jet: bool) -> Self {
        CombatFlags {
            style: CombatStyle::Plane { guided, jet },
        }
    }

    pub fn encode(self) -> ModeId {
        let mode = match self.style {
            CombatStyle::Tank {
                maze,
                billiards,
                invisible,
            } => COMBAT_TANK_TABLE
                .iter()
                .find(|row| (row.1, row.2, row.3) == (maze, billiards, invisible))
                .map(|row| row.0),
            CombatStyle::Plane { guided, jet } => COMBAT_PLANE_TABLE
                .iter()
                .find(|row| (row.1, row.2) == (guided, jet))
                .map(|row| row.0),
        };
        // Both tables cover every flag combination of their style.
        ModeId(mode.expect("combat tables are total"))
    }

    pub fn decode(mode: ModeId) -> Result<Self, EnvError> {
        if let Some(&(_, m, b, i)) = COMBAT_TANK_TABLE.iter().find(|r| r.0 == mode.0) {
            return Ok(Self::tank(m, b, i));
        }
        if let Some(&(_, g, j)) = COMBAT_PLANE_TABLE.iter().find(|r| r.0 == mode.0) {
            return Ok(Self::plane(g, j));
        }
        Err(invalid("combat", mode.0 as u32, combat_modes()))
    }

    pub fn is_tank(self) -> bool {
        matches!(self.style, CombatStyle::Tank { .. })
    }
}

pub fn combat_modes() -> Vec<ModeId> {
    COMBAT_TANK_TABLE
        .iter()
        .map(|r| ModeId(r.0))
        .chain(COMBAT_PLANE_TABLE.iter().map(|r| ModeId(r.0)))
        .collect()
}

// ---------------------------------------------------------------------------
// Space Invaders

/// Five independent options; every combination is a valid mode.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SpaceInvadersFlags {
    pub moving_shields: bool,
    pub zigzag_bombs: bool,
    pub fast_bombs: bool,
    pub invisible_invaders: bool,
    pub alternating_turns: bool,
}

pub const SPACE_INVADERS_BASE: u8 = 33;

impl SpaceInvadersFlags {
    pub fn encode(self) -> ModeId {
        ModeId(
            SPACE_INVADERS_BASE
                + self.moving_shields as u8
                + 2 * self.zigzag_bombs as u8
                + 4 * self.fast_bombs as u8
                + 8 * self.invisible_invaders as u8
                + 16 * self.alternating_turns as u8,
        )
    }

    pub fn decode(mode: ModeId) -> Result<Self, EnvError> {
        if !(SPACE_INVADERS_BASE..=SPACE_INVADERS_BASE + 31).contains(&mode.0) {
            return Err(invalid(
                "space_invaders",
                mode.0 as u32,
                space_invaders_modes(),
            ));
        }
        let bits = mode.0 - SPACE_INVADERS_BASE;
        Ok(SpaceInvadersFlags {
            moving_shields: bits & 1 != 0,
            zigzag_bombs: bits & 2 != 0,
            fast_bombs: bits & 4 != 0,
            invisible_invaders: bits & 8 != 0,
            alternating_turns: bits & 16 != 0,
        })
    }
}

pub fn space_invaders_modes() -> Vec<ModeId> {
    (SPACE_INVADERS_BASE..=SPACE_INVADERS_BASE + 31)
        .map(ModeId)
        .collect()
}

// ---------------------------------------------------------------------------
// Maze Craze

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum MazeCrazeGame {
    /// First to the exit wins.
    Race,
    /// Wandering robbers kill on contact.
    Robbers,
    /// Every robber must be touched before the exit opens; fake walls allowed.
    Capture,
}

impl MazeCrazeGame {
    pub const ALL: [MazeCrazeGame; 3] = [
        MazeCrazeGame::Race,
        MazeCrazeGame::Robbers,
        MazeCrazeGame::Capture,
    ];

    /// The game-type number `n` in `4n + k`.
    pub fn number(self) -> u8 {
        match self {
            MazeCrazeGame::Race => 0,
            MazeCrazeGame::Robbers => 1,
            MazeCrazeGame::Capture => 11,
        }
    }

    pub fn from_number(n: u8) -> Option<Self> {
        Self::ALL.into_iter().find(|g| g.number() == n)
    }
}

/// How much of the maze is drawn.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Visibility {
    Full,
    /// Walls within this many cells of a player are drawn.
    Radius(u8),
    Hidden,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct MazeCrazeMode {
    pub game: MazeCrazeGame,
    /// Visibility setting `k` in 0..=3.
    pub visibility: u8,
}

impl MazeCrazeMode {
    pub fn new(n: u8, k: u8) -> Result<Self, EnvError> {
        let game = MazeCrazeGame::from_number(n);
        match game {
            Some(game) if k <= 3 => Ok(MazeCrazeMode {
                game,
                visibility: k,
            }),
            _ => Err(invalid(
                "maze_craze",
                4 * n as u32 + k as u32,
                maze_craze_modes(),
            )),
        }
    }

    pub fn encode(self) -> ModeId {
        ModeId(4 * self.game.number() + self.visibility)
    }

    pub fn decode(mode: ModeId) -> Result<Self, EnvError> {
        Self::new(mode.0 / 4, mode.0 % 4)
            .map_err(|_| invalid("maze_craze", mode.0 as u32, maze_craze_modes()))
    }

    pub fn visibility_rule(self) -> Visibility {
        match self.visibility {
            0 => Visibility::Full,
            1 => Visibility::Radius(5),
            2 => Visibility::Radius(3),
            _ => Visibility::Hidden,
        }
    }
}

pub fn maze_craze_modes() -> Vec<ModeId> {
    let mut v: Vec<ModeId> = MazeCrazeGame::ALL
        .iter()
        .flat_map(|g| (0..4).map(move |k| ModeId(4 * g.number() + k)))
        .collect();
    v.sort();
    v
}

// ---------------------------------------------------------------------------
// Video Olympics

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum OlympicsGame {
    ClassicPong,
    Foozpong,
    Quadrapong,
    Volleyball,
    Basketball,
}

impl OlympicsGame {
    pub const ALL: [OlympicsGame; 5] = [
        OlympicsGame::ClassicPong,
        OlympicsGame::Foozpong,
        OlympicsGame::Quadrapong,
        OlympicsGame::Volleyball,
        OlympicsGame::Basketball,
    ];

    pub fn name(self) -> &'static str {
        match self {
            OlympicsGame::ClassicPong => "classic_pong",
            OlympicsGame::Foozpong => "foozpong",
            OlympicsGame::Quadrapong => "quadrapong",
            OlympicsGame::Volleyball => "volleyball",
            OlympicsGame::Basketball => "basketball",
        }
    }

    /// (two-player mode, four-player mode).
    pub fn modes(self) -> (Option<ModeId>, Option<ModeId>) {
        match self {
            OlympicsGame::ClassicPong => (Some(ModeId(4)), Some(ModeId(6))),
            OlympicsGame::Foozpong => (Some(ModeId(19)), Some(ModeId(21))),
            OlympicsGame::Quadrapong => (None, Some(ModeId(33))),
            OlympicsGame::Volleyball => (Some(ModeId(39)), Some(ModeId(41))),
            OlympicsGame::Basketball => (Some(ModeId(45)), Some(ModeId(49))),
        }
    }

    /// Whether this engine simulates the game (Foozpong and Basketball are
    /// registered but not simulated).
    pub fn simulated(self) -> bool {
        !matches!(self, OlympicsGame::Foozpong | OlympicsGame::Basketball)
    }
}

/// The Video Olympics mode table keyed by sub-game name.
pub fn video_olympics_modes() -> Vec<(&'static str, Option<ModeId>, Option<ModeId>)> {
    OlympicsGame::ALL
        .iter()
        .map(|g| {
            let (two, four) = g.modes();
            (g.name(), two, four)
        })
        .collect()
}

/// Decodes a Video Olympics mode into its sub-game and player count.
pub fn decode_video_olympics(mode: ModeId) -> Result<(OlympicsGame, usize), EnvError> {
    for g in OlympicsGame::ALL {
        let (two, four) = g.modes();
        if two == Some(mode) {
            return Ok((g, 2));
        }
        if four == Some(mode) {
            return Ok((g, 4));
        }
    }
    let mut valid: Vec<ModeId> = OlympicsGame::ALL
        .iter()
        .flat_map(|g| {
            let (a, b) = g.modes();
            a.into_iter().chain(b)
        })
        .collect();
    valid.sort();
    Err(invalid("video_olympics", mode.0 as u32, valid))
}

// ---------------------------------------------------------------------------
// Entombed

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum EntombedScoring {
    Competitive,
    Cooperative,
}

impl EntombedScoring {
    pub fn encode(self) -> ModeId {
        match self {
            EntombedScoring::Competitive => ModeId(2),
            EntombedScoring::Cooperative => ModeId(3),
        }
    }

    pub fn decode(mode: ModeId) -> Result<Self, EnvError> {
        match mode.0 {
            2 => Ok(EntombedScoring::Competitive),
            3 => Ok(EntombedScoring::Cooperative),
            m => Err(invalid("entombed", m as u32, entombed_modes().to_vec())),
        }
    }
}

pub fn entombed_modes() -> [ModeId; 2] {
    [ModeId(2), ModeId(3)]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn combat_table_values() {
        assert_eq!(CombatFlags::tank(false, false, false).encode(), ModeId(1));
        assert_eq!(CombatFlags::tank(false, true, true).encode(), ModeId(13));
        assert_eq!(CombatFlags::plane(true, true).encode(), ModeId(22));
        assert!(CombatFlags::decode(ModeId(3)).is_err());
    }

    #[test]
    fn combat_round_trip() {
        for m in combat_modes() {
            assert_eq!(CombatFlags::decode(m).unwrap().encode(), m);
        }
    }

    #[test]
    fn space_invaders_formula() {
        assert_eq!(SpaceInvadersFlags::default().encode(), ModeId(33));
        let all = SpaceInvadersFlags {
            moving_shields: true,
            zigzag_bombs: true,
            fast_bombs: true,
            invisible_invaders: true,
            alternating_turns: true,
        };
        assert_eq!(all.encode(), ModeId(64));
        let inv = SpaceInvadersFlags {
            invisible_invaders: true,
            ..Default::default()
        };
        assert_eq!(inv.encode(), ModeId(41));
        assert!(SpaceInvadersFlags::decode(ModeId(32)).is_err());
        assert!(SpaceInvadersFlags::decode(ModeId(65)).is_err());
    }

    #[test]
    fn maze_craze_numbering() {
        assert_eq!(MazeCrazeMode::new(0, 0).unwrap().encode(), ModeId(0));
        assert_eq!(MazeCrazeMode::new(1, 0).unwrap().encode(), ModeId(4));
        let cap = MazeCrazeMode::decode(ModeId(44)).unwrap();
        assert_eq!(cap.game, MazeCrazeGame::Capture);
        assert_eq!(cap.visibility_rule(), Visibility::Full);
        assert!(MazeCrazeMode::new(2, 0).is_err());
        assert!(MazeCrazeMode::new(0, 4).is_err());
        assert_eq!(maze_craze_modes().len(), 12);
    }

    #[test]
    fn video_olympics_table() {
        let t = video_olympics_modes();
        assert_eq!(t[0], ("classic_pong", Some(ModeId(4)), Some(ModeId(6))));
        assert_eq!(t[2], ("quadrapong", None, Some(ModeId(33))));
        assert_eq!(
            decode_video_olympics(ModeId(41)).unwrap(),
            (OlympicsGame::Volleyball, 4)
        );
        assert!(decode_video_olympics(ModeId(5)).is_err());
    }

    #[test]
    fn entombed_mapping() {
        assert_eq!(EntombedScoring::Competitive.encode(), ModeId(2));
        assert_eq!(EntombedScoring::Cooperative.encode(), ModeId(3));
        assert!(EntombedScoring::decode(ModeId(5)).is_err());
    }
}
