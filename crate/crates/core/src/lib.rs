//! Multiplayer arcade environments: a suite of small pixel-rendered games
//! behind a joint-action stepping API, plus the observation pipeline used to
//! train and evaluate agents on them.

pub mod action;
pub mod env;
pub mod error;
pub mod games;
pub mod modes;
pub mod preprocess;
pub mod rng;
pub mod screen;

pub use action::Action;
pub use env::{Env, StallConfig};
pub use error::EnvError;
pub use games::{Category, Event, GameKind, TerminalCause};
pub use modes::ModeId;
pub use screen::{Rgb, Screen};
