use maale_core::games::registry;
use maale_core::rng::{rng_from_seed, Rng};
use maale_core::{Action, Env, EnvError, ModeId};

fn random_actions(env: &Env, rng: &mut impl Rng) -> Vec<Action> {
    let set = env.minimal_action_set();
    (0..env.num_players())
        .map(|_| set[rng.gen_range(0..set.len())])
        .collect()
}

#[test]
fn every_simulated_mode_honours_the_contract() {
    for spec in registry() {
        for info in &spec.modes {
            let mut env = Env::load_game(spec.name).unwrap();
            env.set_mode(info.mode).unwrap();
            if !info.simulated {
                assert!(matches!(
                    env.reset(0),
                    Err(EnvError::UnsupportedMode { .. })
                ));
                continue;
            }
            env.reset(7).unwrap();
            assert!(!env.game_over().unwrap());
            let set = env.minimal_action_set();
            assert!(set.contains(&Action::Noop));
            let mut rng = rng_from_seed(info.mode.0 as u64);
            let mut lives = env.all_lives().unwrap();
            assert_eq!(lives.len(), info.players);
            assert!(
                lives.iter().all(|&l| l >= 0),
                "{} {}: {lives:?}",
                spec.name,
                info.mode
            );
            let mut frames = 0;
            while !env.game_over().unwrap() && frames < 3_000 {
                let acts = random_actions(&env, &mut rng);
                let r = env.act(&acts).unwrap();
                assert_eq!(r.len(), info.players);
                let now = env.all_lives().unwrap();
                assert_eq!(now.len(), info.players);
                for (a, b) in lives.iter().zip(&now) {
                    assert!(b <= a, "{} lives rose: {lives:?} -> {now:?}", spec.name);
                    assert!(*b >= -1);
                }
                lives = now;
                frames += 1;
            }
            if env.game_over().unwrap() {
                assert!(matches!(
                    env.act(&vec![Action::Noop; info.players]),
                    Err(EnvError::ActAfterTerminal)
                ));
            }
            assert!(matches!(
                env.act(&vec![Action::Noop; info.players + 1]),
                Err(EnvError::WrongArity { .. }) | Err(EnvError::ActAfterTerminal)
            ));
        }
    }
}

#[test]
fn available_modes_filtering_matches_registry() {
    for spec in registry() {
        let env = Env::load_game(spec.name).unwrap();
        let all = env.available_modes(None);
        assert!(all.windows(2).all(|w| w[0] < w[1]));
        assert_eq!(all.len(), spec.modes.len());
        for n in 1..=5 {
            let some = env.available_modes(Some(n));
            for m in &some {
                assert!(all.contains(m));
                assert_eq!(spec.mode(*m).unwrap().players, n);
            }
            let expected = spec.modes.iter().filter(|m| m.players == n).count();
            assert_eq!(some.len(), expected);
        }
    }
    let vo = Env::load_game("video_olympics").unwrap();
    let four: Vec<u8> = vo.available_modes(Some(4)).iter().map(|m| m.0).collect();
    assert_eq!(four, vec![6, 21, 33, 41, 49]);
    assert!(!vo.available_modes(Some(2)).contains(&ModeId(33)));
    assert!(Env::load_game("combat")
        .unwrap()
        .available_modes(Some(3))
        .is_empty());
}

#[test]
fn initial_lives_conventions() {
    let lives = |name: &str, mode: u8| {
        let mut env = Env::with_mode(name, ModeId(mode)).unwrap();
        env.reset(0).unwrap();
        env.all_lives().unwrap()
    };
    assert_eq!(lives("space_invaders", 33), vec![1, 1]);
    assert_eq!(lives("entombed", 2), vec![2, 2]);
    assert_eq!(lives("warlords", 1), vec![0, 0, 0, 0]);
    assert_eq!(lives("video_olympics", 4), vec![0, 0]);
}

#[test]
fn entombed_deaths_until_termination_match_initial_lives() {
    // Idle players are crushed together, one life each per stage.
    let mut env = Env::with_mode("entombed", ModeId(2)).unwrap();
    env.reset(3).unwrap();
    let start = env.all_lives().unwrap();
    let mut deaths = 0;
    let mut prev = start.clone();
    while !env.game_over().unwrap() {
        env.act(&[Action::Noop; 2]).unwrap();
        let now = env.all_lives().unwrap();
        deaths += prev.iter().zip(&now).filter(|(a, b)| b < a).count();
        prev = now;
    }
    // Each player's counter runs from its initial value down to -1.
    assert_eq!(deaths as i32, start.iter().map(|l| l + 1).sum::<i32>());
}

#[test]
fn screen_is_pure_and_seeded() {
    for spec in registry() {
        let mut a = Env::load_game(spec.name).unwrap();
        let mut b = Env::load_game(spec.name).unwrap();
        a.reset(0).unwrap();
        b.reset(0).unwrap();
        let first = a.screen_rgb().unwrap().clone();
        assert_eq!(&first, a.screen_rgb().unwrap());
        assert_eq!(&first, b.screen_rgb().unwrap());
    }
}

#[test]
fn maze_layouts_vary_with_seed() {
    let mut differ = 0;
    for i in 0..100u64 {
        let mut a = Env::with_mode("maze_craze", ModeId(0)).unwrap();
        let mut b = Env::with_mode("maze_craze", ModeId(0)).unwrap();
        a.reset(2 * i).unwrap();
        b.reset(2 * i + 1).unwrap();
        if a.screen_rgb().unwrap() != b.screen_rgb().unwrap() {
            differ += 1;
        }
    }
    assert_eq!(differ, 100);
}

#[test]
fn combat_match_ends_at_frame_limit() {
    let mut env = Env::load_game("combat").unwrap();
    env.reset(0).unwrap();
    let mut frames = 0;
    while !env.game_over().unwrap() {
        env.act(&[Action::Noop; 2]).unwrap();
        frames += 1;
    }
    assert_eq!(frames, maale_core::games::combat::MATCH_FRAMES);
}
