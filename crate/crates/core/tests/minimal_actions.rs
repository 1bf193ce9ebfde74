//! The minimal action set of each game must be exactly the actions that have
//! any effect, and no two of them may act identically everywhere.

use std::collections::BTreeSet;

use maale_core::games::registry;
use maale_core::rng::{rng_from_seed, Rng};
use maale_core::{Action, Env};

const PROBE_FRAMES: usize = 12;

/// What happens over the next few frames when seat 0 holds `a` and everyone
/// else idles.
fn signature(env: &Env, a: Action) -> Vec<u8> {
    let mut e = env.clone();
    let mut acts = vec![Action::Noop; e.num_players()];
    acts[0] = a;
    let mut sig = Vec::new();
    for _ in 0..PROBE_FRAMES {
        if e.game_over().unwrap() {
            break;
        }
        let r = e.act(&acts).unwrap();
        sig.extend(r.iter().flat_map(|v| v.to_le_bytes()));
        sig.extend(e.ram().unwrap());
    }
    sig
}

fn probe_states(name: &str) -> Vec<Env> {
    let spec = registry().iter().find(|s| s.name == name).unwrap();
    let mut states = Vec::new();
    for info in spec.modes.iter().filter(|m| m.simulated) {
        for seed in 0..6u64 {
            let mut env = Env::with_mode(name, info.mode).unwrap();
            env.reset(seed).unwrap();
            let mut rng = rng_from_seed(seed + 100);
            // Random play, with the actions drawn from the full set so the
            // exploration does not presuppose the answer.
            for f in 0..3_000 {
                if env.game_over().unwrap() {
                    break;
                }
                if f % 37 == 0 {
                    states.push(env.clone());
                }
                let acts: Vec<Action> = (0..env.num_players())
                    .map(|_| Action::ALL[rng.gen_range(0..Action::COUNT)])
                    .collect();
                env.act(&acts).unwrap();
            }
        }
    }
    states
}

fn check(name: &str) {
    let states = probe_states(name);
    let sigs: Vec<Vec<Vec<u8>>> = states
        .iter()
        .map(|s| Action::ALL.iter().map(|&a| signature(s, a)).collect())
        .collect();
    let noop = Action::Noop.id() as usize;
    let effective: BTreeSet<u8> = Action::ALL
        .iter()
        .filter(|a| a.id() as usize == noop || sigs.iter().any(|s| s[a.id() as usize] != s[noop]))
        .map(|a| a.id())
        .collect();
    let env = Env::load_game(name).unwrap();
    let declared: BTreeSet<u8> = env.minimal_action_set().iter().map(|a| a.id()).collect();
    assert_eq!(declared, effective, "{name}");
    for &a in &declared {
        for &b in &declared {
            if a < b {
                assert!(
                    sigs.iter().any(|s| s[a as usize] != s[b as usize]),
                    "{name}: {} and {} always act alike",
                    Action::ALL[a as usize],
                    Action::ALL[b as usize]
                );
            }
        }
    }
}

#[test]
fn maze_craze() {
    check("maze_craze");
}

#[test]
fn othello() {
    check("othello");
}

#[test]
fn video_olympics() {
    check("video_olympics");
}

#[test]
fn combat() {
    check("combat");
}

#[test]
fn entombed() {
    check("entombed");
}

#[test]
fn space_invaders() {
    check("space_invaders");
}

#[test]
fn warlords() {
    check("warlords");
}

#[test]
fn spec_examples() {
    use Action::*;
    let six: BTreeSet<Action> = [Noop, Up, Down, Left, Right, Fire].into_iter().collect();
    for name in ["maze_craze", "othello"] {
        let env = Env::load_game(name).unwrap();
        let set: BTreeSet<Action> = env.minimal_action_set().iter().copied().collect();
        assert_eq!(set, six, "{name}");
    }
    let pong = Env::load_game("pong").unwrap();
    assert!(pong.minimal_action_set().contains(&Up));
    assert!(pong.minimal_action_set().contains(&Down));
}
