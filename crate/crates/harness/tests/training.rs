use maale_core::ModeId;
use maale_harness::eval::TournamentResult;
use maale_harness::train::{curve_csv, CSV_HEADER};
use maale_harness::*;
use proptest::prelude::*;

fn small(steps: u64) -> TrainConfig {
    TrainConfig {
        lr: 0.1,
        train_steps: steps,
        epsilon_timesteps: steps.max(1),
        seed: 5,
        ..TrainConfig::default()
    }
}

fn weights(p: &Policy) -> &[f32] {
    match p {
        Policy::Q(q) => &q.weights,
        _ => panic!("expected a Q policy"),
    }
}

#[test]
fn epsilon_midpoint() {
    let c = TrainConfig::default();
    assert!((c.epsilon_at(c.epsilon_timesteps / 2) - 0.505).abs() < 1e-12);
    assert_eq!(c.epsilon_at(0), 1.0);
    assert_eq!(c.epsilon_at(c.epsilon_timesteps), 0.01);
}

proptest! {
    #[test]
    fn epsilon_schedule_is_piecewise_linear(
        t in 1u64..1_000_000,
        fin in 0.0f64..=1.0,
        step in 0u64..2_000_000,
    ) {
        let c = TrainConfig { epsilon_timesteps: t, final_epsilon: fin, ..TrainConfig::default() };
        let e = c.epsilon_at(step);
        if step >= t {
            prop_assert_eq!(e, fin);
        } else {
            let expect = 1.0 - (1.0 - fin) * step as f64 / t as f64;
            prop_assert!((e - expect).abs() < 1e-12);
            prop_assert!(e >= fin.min(1.0) - 1e-12 && e <= 1.0);
        }
    }
}

#[test]
fn invalid_configs_are_rejected() {
    for c in [
        TrainConfig {
            gamma: 0.0,
            ..small(0)
        },
        TrainConfig {
            gamma: 1.5,
            ..small(0)
        },
        TrainConfig {
            final_epsilon: -0.1,
            ..small(0)
        },
        TrainConfig {
            lr: f64::NAN,
            ..small(0)
        },
    ] {
        assert!(matches!(
            train_self_play("pong", ModeId(4), &c),
            Err(HarnessError::Config(_))
        ));
    }
}

#[test]
fn untrained_policy_plays_uniformly() {
    let p = train_self_play("pong", ModeId(4), &small(0)).unwrap();
    assert!(weights(&p).iter().all(|&w| w == 0.0));
    // All values tie, so every minimal action is drawn about equally often.
    let Policy::Q(q) = &p else { unreachable!() };
    let mut rng = maale_core::rng::rng_from_seed(3);
    let mut counts = vec![0usize; q.actions.len()];
    for _ in 0..50_000 {
        counts[q.greedy(&[1, 2, 3], &mut rng)] += 1;
    }
    let expect = 50_000.0 / q.actions.len() as f64;
    for c in counts {
        assert!((c as f64 - expect).abs() < 0.05 * expect, "{c} vs {expect}");
    }
    // And as a player it is indistinguishable from random play on average.
    let m = evaluate_vs_random(&p, "pong", ModeId(4), 200, 9).unwrap();
    assert!(m.mean_reward_per_step.abs() <= 3.0 * m.stderr, "{m:?}");
}

#[test]
fn identical_configs_give_identical_parameters() {
    let a = train_self_play("pong", ModeId(4), &small(5_000)).unwrap();
    let b = train_self_play("pong", ModeId(4), &small(5_000)).unwrap();
    assert_eq!(weights(&a), weights(&b));
    let c = train_self_play(
        "pong",
        ModeId(4),
        &TrainConfig {
            seed: 6,
            ..small(5_000)
        },
    )
    .unwrap();
    assert_ne!(weights(&a), weights(&c));
}

#[test]
fn one_parameter_set_learns_from_every_seat() {
    // Both seats' bias features must have moved in the one shared table.
    let p = train_self_play("pong", ModeId(4), &small(3_000)).unwrap();
    let Policy::Q(q) = &p else { unreachable!() };
    let env = maale_core::Env::with_mode("pong", ModeId(4)).unwrap();
    let mut pipe = maale_core::preprocess::Pipeline::new(env, Default::default());
    pipe.set_observe(false);
    pipe.reset(0).unwrap();
    let mut f0 = Vec::new();
    let mut f1 = Vec::new();
    q.features.extract(&Observation::new(&pipe, 0), &mut f0);
    q.features.extract(&Observation::new(&pipe, 1), &mut f1);
    assert_ne!(f0, f1, "seat tag is part of the observation");
    let size = q.features.table_size();
    let moved = |f: u32| (0..q.actions.len()).any(|a| q.weights[a * size + f as usize] != 0.0);
    assert!(moved(f0[0]) && moved(f1[0]));
}

#[test]
fn short_training_beats_random_and_tops_tournament() {
    let p = train_self_play("pong", ModeId(4), &small(60_000)).unwrap();
    let trained = evaluate_vs_random(&p, "pong", ModeId(4), 100, 1).unwrap();
    let base = random_baseline("pong", ModeId(4), 100, 1).unwrap();
    assert!(trained.z_over(&base) > 3.0, "{trained:?} vs {base:?}");

    let TournamentResult { ranking, pairs } =
        tournament(&[Policy::Random, p], "pong", ModeId(4), 20, 4).unwrap();
    assert_eq!(ranking[0].policy, 1);
    assert_eq!(pairs.len(), 1);
    assert_eq!(pairs[0].episodes, 40);
}

#[test]
fn random_tournament_is_balanced() {
    let r = tournament(
        &[Policy::Random, Policy::Random, Policy::Random],
        "pong",
        ModeId(4),
        50,
        2,
    )
    .unwrap();
    assert_eq!(r.pairs.len(), 3);
    for p in &r.pairs {
        assert!(p.mean_a.abs() <= 3.0 * p.stderr, "{p:?}");
    }
}

#[test]
fn tournament_preconditions() {
    assert!(matches!(
        tournament(&[Policy::Random], "pong", ModeId(4), 2, 0),
        Err(HarnessError::TooFewPolicies(1))
    ));
    assert!(matches!(
        tournament(
            &[Policy::Random, Policy::Random],
            "warlords",
            ModeId(1),
            2,
            0
        ),
        Err(HarnessError::NotTwoPlayer { players: 4, .. })
    ));
    assert!(matches!(
        tournament(
            &[Policy::Random, Policy::Random],
            "space_invaders",
            ModeId(33),
            2,
            0
        ),
        Err(HarnessError::NotZeroSum { .. })
    ));
}

#[test]
fn trained_policy_only_plays_its_own_game() {
    let p = train_self_play("pong", ModeId(4), &small(0)).unwrap();
    let err = evaluate_vs_random(&p, "combat", ModeId(1), 1, 0).unwrap_err();
    assert!(matches!(err, HarnessError::PolicyMismatch { .. }));
}

#[test]
fn curve_is_csv_with_header() {
    let (_, points) = train_with_curve(
        "pong",
        ModeId(4),
        &small(2_000),
        Some(CurveConfig {
            every: 1_000,
            episodes: 3,
            seed: 0,
        }),
    )
    .unwrap();
    assert_eq!(
        points.iter().map(|p| p.step).collect::<Vec<_>>(),
        vec![1_000, 2_000]
    );
    let csv = curve_csv(&points);
    let mut lines = csv.lines();
    assert_eq!(lines.next(), Some(CSV_HEADER));
    for line in lines {
        let cols: Vec<&str> = line.split(',').collect();
        assert_eq!(cols.len(), 4);
        assert_eq!(cols[3], "3");
        cols[1].parse::<f64>().unwrap();
    }
}
