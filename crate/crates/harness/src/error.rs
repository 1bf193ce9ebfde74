use maale_core::EnvError;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum HarnessError {
    #[error(transparent)]
    Env(#[from] EnvError),

    #[error("expected {expected} policies (one per player), got {got}")]
    PolicyCount { expected: usize, got: usize },

    #[error("a tournament needs at least 2 policies, got {0}")]
    TooFewPolicies(usize),

    #[error("{game} mode {mode} has {players} players; tournaments need a 2-player game")]
    NotTwoPlayer {
        game: String,
        mode: u8,
        players: usize,
    },

    #[error("{game} mode {mode} is not zero-sum")]
    NotZeroSum { game: String, mode: u8 },

    #[error("episodes must be at least 1")]
    NoEpisodes,

    #[error("invalid training config: {0}")]
    Config(String),

    #[error("policy was trained for {trained} mode {trained_mode}, not {game} mode {mode}")]
    PolicyMismatch {
        trained: String,
        trained_mode: u8,
        game: String,
        mode: u8,
    },

    #[error("bad checkpoint: {0}")]
    Checkpoint(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
