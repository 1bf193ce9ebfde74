use thiserror::Error;

use crate::modes::ModeId;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum EnvError {
    #[error("unknown game '{name}'; valid games: {}", valid.join(", "))]
    UnknownGame { name: String, valid: Vec<String> },

    #[error("invalid mode {mode} for {game}; valid modes: {}", join_modes(valid))]
    InvalidMode {
        game: String,
        mode: u32,
        valid: Vec<ModeId>,
    },

    #[error("mode {mode} of {game} is registered but its dynamics are not implemented")]
    UnsupportedMode { game: String, mode: ModeId },

    #[error("game has not been reset")]
    NotReset,

    #[error("expected {expected} actions (one per player), got {got}")]
    WrongArity { expected: usize, got: usize },

    #[error("act called after the game ended")]
    ActAfterTerminal,

    #[error("action id {0} is outside 0..=17")]
    InvalidAction(u8),
}

fn join_modes(modes: &[ModeId]) -> String {
    modes
        .iter()
        .map(|m| m.to_string())
        .collect::<Vec<_>>()
        .join(", ")
}
