//! The full 18-action joystick set shared by every game.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::EnvError;

/// One joystick input, numbered exactly as the classic arcade interface does.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[repr(u8)]
pub enum Action {
    Noop = 0,
    Fire = 1,
    Up = 2,
    Right = 3,
    Left = 4,
    Down = 5,
    UpRight = 6,
    UpLeft = 7,
    DownRight = 8,
    DownLeft = 9,
    UpFire = 10,
    RightFire = 11,
    LeftFire = 12,
    DownFire = 13,
    UpRightFire = 14,
    UpLeftFire = 15,
    DownRightFire = 16,
    DownLeftFire = 17,
}

impl Action {
    pub const COUNT: usize = 18;

    pub const ALL: [Action; Action::COUNT] = [
        Action::Noop,
        Action::Fire,
        Action::Up,
        Action::Right,
        Action::Left,
        Action::Down,
        Action::UpRight,
        Action::UpLeft,
        Action::DownRight,
        Action::DownLeft,
        Action::UpFire,
        Action::RightFire,
        Action::LeftFire,
        Action::DownFire,
        Action::UpRightFire,
        Action::UpLeftFire,
        Action::DownRightFire,
        Action::DownLeftFire,
    ];

    pub fn id(self) -> u8 {
        self as u8
    }

    pub fn from_id(id: u8) -> Result<Self, EnvError> {
        Self::ALL
            .get(id as usize)
            .copied()
            .ok_or(EnvError::InvalidAction(id))
    }

    pub fn name(self) -> &'static str {
        match self {
            Action::Noop => "NOOP",
            Action::Fire => "FIRE",
            Action::Up => "UP",
            Action::Right => "RIGHT",
            Action::Left => "LEFT",
            Action::Down => "DOWN",
            Action::UpRight => "UPRIGHT",
            Action::UpLeft => "UPLEFT",
            Action::DownRight => "DOWNRIGHT",
            Action::DownLeft => "DOWNLEFT",
            Action::UpFire => "UPFIRE",
            Action::RightFire => "RIGHTFIRE",
            Action::LeftFire => "LEFTFIRE",
            Action::DownFire => "DOWNFIRE",
            Action::UpRightFire => "UPRIGHTFIRE",
            Action::UpLeftFire => "UPLEFTFIRE",
            Action::DownRightFire => "DOWNRIGHTFIRE",
            Action::DownLeftFire => "DOWNLEFTFIRE",
        }
    }
}

impl fmt::Display for Action {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl TryFrom<u8> for Action {
    type Error = EnvError;

    fn try_from(id: u8) -> Result<Self, Self::Error> {
        Action::from_id(id)
    }
}

/// The joystick state a game actually reads after filtering an [`Action`]
/// through its minimal action set.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct Stick {
    pub up: bool,
    pub down: bool,
    pub left: bool,
    pub right: bool,
    pub fire: bool,
}

impl Stick {
    /// Decodes `action`, treating anything outside `minimal` as no input.
    pub fn decode(action: Action, minimal: &[Action]) -> Stick {
        if !minimal.contains(&action) {
            return Stick::default();
        }
        use Action::*;
        let up = matches!(
            action,
            Up | UpRight | UpLeft | UpFire | UpRightFire | UpLeftFire
        );
        let down = matches!(
            action,
            Down | DownRight | DownLeft | DownFire | DownRightFire | DownLeftFire
        );
        let left = matches!(
            action,
            Left | UpLeft | DownLeft | LeftFire | UpLeftFire | DownLeftFire
        );
        let right = matches!(
            action,
            Right | UpRight | DownRight | RightFire | UpRightFire | DownRightFire
        );
        let fire = matches!(
            action,
            Fire | UpFire
                | RightFire
                | LeftFire
                | DownFire
                | UpRightFire
                | UpLeftFire
                | DownRightFire
                | DownLeftFire
        );
        Stick {
            up,
            down,
            left,
            right,
            fire,
        }
    }

    /// Vertical direction: -1 up, +1 down, 0 neither.
    pub fn dy(self) -> i32 {
        self.down as i32 - self.up as i32
    }

    /// Horizontal direction: -1 left, +1 right, 0 neither.
    pub fn dx(self) -> i32 {
        self.right as i32 - self.left as i32
    }
}
