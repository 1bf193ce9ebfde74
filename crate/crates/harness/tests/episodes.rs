use maale_core::{Action, ModeId, TerminalCause};
use maale_harness::eval::{mean_stderr, run_batch};
use maale_harness::*;

#[test]
fn pong_random_episode_terminates_and_repeats() {
    let r = Policy::Random;
    let a = run_episode("pong", ModeId(4), &[&r, &r], 11, DEFAULT_MAX_STEPS).unwrap();
    assert!(a.length >= 1);
    assert!(matches!(
        a.cause,
        Some(TerminalCause::ScoreLimit) | Some(TerminalCause::Time)
    ));
    let b = run_episode("pong", ModeId(4), &[&r, &r], 11, DEFAULT_MAX_STEPS).unwrap();
    assert_eq!(a, b);
}

#[test]
fn step_cap_cuts_episode() {
    let r = Policy::Random;
    let e = run_episode("pong", ModeId(4), &[&r, &r], 3, 5).unwrap();
    assert_eq!(e.length, 5);
    assert_eq!(e.cause, None);
}

#[test]
fn wrong_policy_count_is_an_error() {
    let r = Policy::Random;
    let err = run_episode("pong", ModeId(4), &[&r], 0, 10).unwrap_err();
    assert!(matches!(
        err,
        HarnessError::PolicyCount {
            expected: 2,
            got: 1
        }
    ));
}

#[test]
fn scripted_action_outside_minimal_set_is_rejected() {
    let p = Policy::Scripted(Action::Fire);
    let err = run_episode("pong", ModeId(4), &[&p, &p], 0, 10).unwrap_err();
    assert!(matches!(err, HarnessError::Config(_)));
}

#[test]
fn cooperative_entombed_totals_are_equal() {
    let r = Policy::Random;
    let (results, _) = run_batch("entombed", ModeId(3), &[&r, &r], 100, 21).unwrap();
    for e in &results {
        assert_eq!(e.totals[0], e.totals[1], "{e:?}");
    }
}

#[test]
fn metric_times_length_is_total() {
    let r = Policy::Random;
    let (results, _) = run_batch("combat", ModeId(1), &[&r, &r], 10, 2).unwrap();
    for e in &results {
        for seat in 0..2 {
            let back = e.reward_per_step(seat) * e.length as f64;
            assert_eq!(back.round() as i64, e.totals[seat]);
            assert!((back - e.totals[seat] as f64).abs() < 1e-9);
        }
    }
}

#[test]
fn single_episode_has_zero_stderr() {
    let m = random_baseline("pong", ModeId(4), 1, 0).unwrap();
    assert_eq!(m.episodes, 1);
    assert_eq!(m.stderr, 0.0);
    assert_eq!(m.seeds.len(), 1);
}

#[test]
fn zero_episodes_is_an_error() {
    assert!(matches!(
        random_baseline("pong", ModeId(4), 0, 0),
        Err(HarnessError::NoEpisodes)
    ));
}

#[test]
fn random_policy_report_is_the_baseline() {
    let a = evaluate_vs_random(&Policy::Random, "combat", ModeId(1), 20, 8).unwrap();
    let b = random_baseline("combat", ModeId(1), 20, 8).unwrap();
    assert_eq!(a, b);
}

#[test]
fn mean_stderr_matches_hand_computation() {
    let (m, se) = mean_stderr(&[1.0, 2.0, 3.0, 6.0]);
    assert_eq!(m, 3.0);
    // sample variance 14/3, stderr sqrt(14/12)
    assert!((se - (14.0f64 / 12.0).sqrt()).abs() < 1e-12);
}

#[test]
fn symmetric_baselines_center_on_zero() {
    for (game, mode) in [("pong", 4), ("combat", 1)] {
        let m = random_baseline(game, ModeId(mode), 200, 40).unwrap();
        assert!(
            m.mean_reward_per_step.abs() <= 3.0 * m.stderr,
            "{game}: {} ± {}",
            m.mean_reward_per_step,
            m.stderr
        );
    }
}

#[test]
fn cooperative_baseline_is_positive() {
    let m = random_baseline("entombed", ModeId(3), 100, 40).unwrap();
    assert!(m.mean_reward_per_step > 0.0, "{m:?}");
}

#[test]
fn seat_swap_leaves_distribution_unchanged() {
    // Identical policies, different seeds: the two batches estimate the same mean.
    let r = Policy::Random;
    let (a, _) = run_batch("combat", ModeId(1), &[&r, &r], 200, 1).unwrap();
    let (b, _) = run_batch("combat", ModeId(1), &[&r, &r], 200, 2).unwrap();
    let xa: Vec<f64> = a.iter().map(|e| e.reward_per_step(0)).collect();
    let xb: Vec<f64> = b.iter().map(|e| e.reward_per_step(1)).collect();
    let (ma, sa) = mean_stderr(&xa);
    let (mb, sb) = mean_stderr(&xb);
    assert!(
        (ma - mb).abs() <= 3.0 * (sa * sa + sb * sb).sqrt(),
        "{ma} vs {mb}"
    );
}

#[test]
fn batch_results_come_back_in_seed_order() {
    let r = Policy::Random;
    let (batch, seeds) = run_batch("pong", ModeId(4), &[&r, &r], 6, 77).unwrap();
    for (e, s) in batch.iter().zip(&seeds) {
        assert_eq!(
            *e,
            run_episode("pong", ModeId(4), &[&r, &r], *s, DEFAULT_MAX_STEPS).unwrap()
        );
    }
}
