use maale_core::action::Stick;
use maale_core::games::entombed::Entombed;
use maale_core::games::maze_craze::{exit_block, start_blocks, MazeCraze};
use maale_core::games::space_invaders::SpaceInvaders;
use maale_core::games::{Dynamics, Event, StepOutcome};
use maale_core::rng::{rng_from_seed, GameRng, Rng};
use maale_core::{Action, Env, ModeId};

fn random_episode(name: &str, mode: u8, seed: u64, mut each: impl FnMut(&Env, &[i32])) -> Vec<i32> {
    let mut env = Env::with_mode(name, ModeId(mode)).unwrap();
    env.reset(seed).unwrap();
    let mut rng = rng_from_seed(seed.wrapping_mul(31) + 5);
    let set = env.minimal_action_set();
    let mut totals = vec![0; env.num_players()];
    while !env.game_over().unwrap() {
        let acts: Vec<Action> = (0..env.num_players())
            .map(|_| set[rng.gen_range(0..set.len())])
            .collect();
        let r = env.act(&acts).unwrap();
        for (t, v) in totals.iter_mut().zip(&r) {
            *t += v;
        }
        each(&env, &totals);
    }
    totals
}

#[test]
fn zero_sum_games_sum_to_zero() {
    for (name, mode) in [
        ("video_olympics", 4),
        ("video_olympics", 6),
        ("video_olympics", 33),
        ("combat", 1),
        ("combat", 22),
        ("maze_craze", 0),
        ("maze_craze", 4),
        ("othello", 1),
        ("entombed", 2),
    ] {
        for seed in 0..10 {
            let totals = random_episode(name, mode, seed, |_, _| {});
            assert_eq!(
                totals.iter().sum::<i32>(),
                0,
                "{name} {mode} seed {seed}: {totals:?}"
            );
        }
    }
}

#[test]
fn entombed_coop_totals_stay_equal() {
    let mut positive = 0;
    for seed in 0..100 {
        let totals = random_episode("entombed", 3, seed, |_, t| assert_eq!(t[0], t[1]));
        positive += (totals[0] > 0) as u32;
    }
    assert!(positive > 0);
}

#[test]
fn warlords_ends_with_exactly_one_survivor() {
    for seed in 0..20 {
        let mut dead_seen = [false; 4];
        let totals = random_episode("warlords", 1, seed, |env, _| {
            let lives = env.all_lives().unwrap();
            let r = env.last_rewards();
            for p in 0..4 {
                // Nothing is paid to a player after the frame they died.
                if dead_seen[p] {
                    assert_eq!(r[p], 0);
                }
                dead_seen[p] = lives[p] < 0;
            }
        });
        let alive = dead_seen.iter().filter(|d| !**d).count();
        assert_eq!(alive, 1, "seed {seed}");
        assert_eq!(totals.iter().filter(|&&t| t == 1).count(), 1);
        assert_eq!(totals.iter().filter(|&&t| t == -1).count(), 3);
    }
}

#[test]
fn mazes_connect_starts_to_goals() {
    for seed in 0..100 {
        let mut rng = rng_from_seed(seed);
        let mc = MazeCraze::new(ModeId(0), &mut rng).unwrap();
        assert!(mc.grid().is_connected());
        for s in start_blocks() {
            assert!(mc.grid().reachable(s, exit_block()));
        }
        let en = Entombed::new(ModeId(2), &mut rng).unwrap();
        let grid = en.held_grid();
        assert!(grid.is_connected());
        let bottom = grid.height() as i32 - 2;
        for (col, row) in en.digger_positions() {
            let start = (col, (row - en.base_row()) as i32);
            assert!(grid.reachable(start, (1, bottom)), "seed {seed}");
        }
    }
}

fn random_stick(rng: &mut GameRng) -> Stick {
    let a = maale_core::games::space_invaders::MINIMAL_ACTIONS[rng.gen_range(0..6)];
    Stick::decode(a, maale_core::games::space_invaders::MINIMAL_ACTIONS)
}

#[test]
fn alternating_turns_allow_one_shooter_at_a_time() {
    for seed in 0..5 {
        let mut rng = rng_from_seed(seed);
        let mut g = SpaceInvaders::new(ModeId(33 + 16), &mut rng).unwrap();
        let mut out = StepOutcome::default();
        let mut last_switch = 0;
        let mut shots = [0; 2];
        for frame in 1..5_000 {
            let turn = g.turn().unwrap();
            let sticks = [random_stick(&mut rng), random_stick(&mut rng)];
            out.reset(2);
            g.step(&sticks, &mut rng, &mut out);
            let fired: Vec<usize> = out
                .events
                .iter()
                .filter_map(|e| match e {
                    Event::Fired { player } => Some(*player),
                    _ => None,
                })
                .collect();
            assert!(fired.len() <= 1);
            if let Some(&p) = fired.first() {
                assert_eq!(p, turn);
                shots[p] += 1;
            }
            let now = g.turn().unwrap();
            if now != turn {
                // Switches happen on a shot or when the period runs out.
                assert!(!fired.is_empty() || frame - last_switch >= 120);
                last_switch = frame;
            } else {
                assert!(fired.is_empty());
            }
            if out.terminal.is_some() {
                break;
            }
        }
        assert!(shots[0] > 0 && shots[1] > 0);
    }
}
