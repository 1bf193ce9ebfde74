use std::fmt::Write as _;
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::time::{Duration, Instant};

use anyhow::{Context, Result};
use maale_core::games::catalog;
use maale_core::preprocess::{Pipeline, PipelineConfig};
use maale_core::rng::{derive_seed, rng_from_seed, Rng};
use maale_core::{Action, Env};
use maale_harness::episode::policy_seed;
use maale_harness::eval::TournamentResult;
use maale_harness::train::{csv_row, curve_csv, CSV_HEADER};
use maale_harness::{checkpoint, CurveConfig, MetricReport, Observation, Policy, TrainConfig};

use crate::pnm::{write_pgm, write_ppm};
use crate::{open, usage, Format};

/// Accepts `random`, `scripted:<ACTION>` or a checkpoint path.
fn parse_policy(spec: &str) -> Result<(Policy, u64)> {
    if spec == "random" {
        return Ok((Policy::Random, 0));
    }
    if let Some(name) = spec.strip_prefix("scripted:") {
        let action = Action::ALL
            .iter()
            .find(|a| a.name().eq_ignore_ascii_case(name))
            .ok_or_else(|| usage(format!("unknown action '{name}' in --policy")))?;
        return Ok((Policy::Scripted(*action), 0));
    }
    let path = Path::new(spec);
    if !path.is_file() {
        return Err(usage(format!(
            "--policy must be random, scripted:<ACTION> or a checkpoint file; '{spec}' is none of these"
        )));
    }
    let (q, config) =
        checkpoint::load(path).map_err(|e| usage(format!("cannot load checkpoint {spec}: {e}")))?;
    Ok((Policy::Q(Box::new(q)), config.train_steps))
}

fn emit(out: Option<PathBuf>, text: &str) -> Result<()> {
    match out {
        Some(path) => {
            std::fs::write(&path, text).with_context(|| format!("writing {}", path.display()))
        }
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn report_line(r: &MetricReport) -> String {
    format!(
        "mean_reward_per_step={:.6} stderr={:.6} episodes={} opponent={} seed={}",
        r.mean_reward_per_step, r.stderr, r.episodes, r.opponent, r.base_seed
    )
}

pub fn list_games(format: Format) -> Result<()> {
    let rows = catalog();
    let mut s = String::new();
    match format {
        Format::Csv => {
            s.push_str("name,game_theory,players,categories,modes\n");
            for r in &rows {
                let cats: Vec<_> = r.categories.iter().map(|c| c.label()).collect();
                let modes: Vec<_> = r.modes.iter().map(|m| m.mode.to_string()).collect();
                writeln!(
                    s,
                    "{},{},{},{},{}",
                    r.name,
                    r.game_theory,
                    r.players,
                    cats.join(" "),
                    modes.join(" ")
                )?;
            }
        }
        Format::Table => {
            writeln!(
                s,
                "{:<16} {:<24} {:<8} {:<6} categories",
                "name", "game theory", "players", "modes"
            )?;
            for r in &rows {
                let cats: Vec<_> = r.categories.iter().map(|c| c.label()).collect();
                writeln!(
                    s,
                    "{:<16} {:<24} {:<8} {:<6} {}",
                    r.name,
                    r.game_theory,
                    r.players,
                    r.modes.len(),
                    cats.join(", ")
                )?;
            }
        }
    }
    print!("{s}");
    Ok(())
}

pub fn modes(game: &str, players: Option<usize>, format: Format) -> Result<()> {
    let env = Env::load_game(game)?;
    let ids = env.available_modes(players);
    let mut s = String::new();
    match format {
        Format::Csv => s.push_str("mode,players,category,simulated,label\n"),
        Format::Table => writeln!(
            s,
            "{:<5} {:<8} {:<20} {:<10} label",
            "mode", "players", "category", "simulated"
        )?,
    }
    for id in ids {
        let m = env.spec().mode(id)?;
        match format {
            Format::Csv => writeln!(
                s,
                "{},{},{},{},{}",
                m.mode,
                m.players,
                m.category.label(),
                m.simulated,
                m.label
            )?,
            Format::Table => writeln!(
                s,
                "{:<5} {:<8} {:<20} {:<10} {}",
                m.mode.to_string(),
                m.players,
                m.category.label(),
                m.simulated,
                m.label
            )?,
        }
    }
    print!("{s}");
    Ok(())
}

pub fn rollout(
    game: &str,
    mode: Option<u32>,
    seed: u64,
    steps: u64,
    record: Option<PathBuf>,
    policy: &str,
) -> Result<()> {
    let (policy, _) = parse_policy(policy)?;
    let (env, _) = open(game, mode)?;
    let players = env.num_players();
    let seats: Vec<&Policy> = vec![&policy; players];
    let mut pipe = Pipeline::new(env, PipelineConfig::default());
    pipe.set_observe(record.is_some() || policy.needs_pixels());
    pipe.reset(seed)?;
    if let Policy::Q(q) = &policy {
        let env = pipe.env();
        if q.game != env.spec().name || q.mode != env.mode().0 {
            return Err(usage(format!(
                "checkpoint was trained on {} mode {}, not {} mode {}",
                q.game,
                q.mode,
                env.spec().name,
                env.mode()
            )));
        }
    }

    let mut log = String::from("step,actions,rewards\n");
    let record_frame = |pipe: &mut Pipeline, dir: &Path, step: u64| -> Result<()> {
        let frame = pipe
            .frame_stack()
            .frames()
            .last()
            .expect("observing pipeline")
            .clone();
        write_pgm(&dir.join(format!("frame_{step:06}.pgm")), &frame)?;
        write_ppm(
            &dir.join(format!("frame_{step:06}.ppm")),
            pipe.env_mut().screen_rgb()?,
        )?;
        Ok(())
    };
    if let Some(dir) = &record {
        std::fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
        record_frame(&mut pipe, dir, 0)?;
    }

    let mut rngs: Vec<_> = (0..players)
        .map(|s| rng_from_seed(policy_seed(seed, s)))
        .collect();
    let mut scratch = Vec::new();
    let mut totals = vec![0i64; players];
    let mut step = 0u64;
    let mut terminal = false;
    while step < steps && !terminal {
        let actions: Vec<Action> = seats
            .iter()
            .enumerate()
            .map(|(s, p)| p.act(&Observation::new(&pipe, s), &mut rngs[s], &mut scratch))
            .collect();
        let out = pipe.step(&actions)?;
        step += 1;
        terminal = out.terminal;
        for (t, r) in totals.iter_mut().zip(&out.raw_rewards) {
            *t += *r as i64;
        }
        if let Some(dir) = &record {
            record_frame(&mut pipe, dir, step)?;
            let ids: Vec<_> = actions.iter().map(|a| a.id().to_string()).collect();
            let rs: Vec<_> = out.raw_rewards.iter().map(|r| r.to_string()).collect();
            writeln!(log, "{step},{},{}", ids.join(" "), rs.join(" "))?;
        }
    }
    if let Some(dir) = &record {
        std::fs::write(dir.join("log.csv"), &log)?;
    }
    let cause = match pipe.env().terminal_cause() {
        Some(c) => format!("{c:?}").to_lowercase(),
        None => "step-limit".into(),
    };
    let totals: Vec<_> = totals.iter().map(|t| t.to_string()).collect();
    println!("steps={step} totals={} cause={cause}", totals.join(","));
    Ok(())
}

pub fn train(
    game: &str,
    mode: Option<u32>,
    config: TrainConfig,
    eval_every: u64,
    eval_episodes: usize,
    checkpoint_path: &Path,
    out: Option<PathBuf>,
) -> Result<()> {
    config.validate()?;
    let (env, mode) = open(game, mode)?;
    let curve = CurveConfig {
        every: eval_every,
        episodes: eval_episodes,
        seed: derive_seed(config.seed, 0xe7a1),
    };
    let (policy, points) =
        maale_harness::train_with_curve(env.spec().name, mode, &config, Some(curve))?;
    let Policy::Q(q) = &policy else {
        unreachable!("training returns a Q policy")
    };
    checkpoint::save(checkpoint_path, q, &config)
        .with_context(|| format!("writing checkpoint {}", checkpoint_path.display()))?;
    emit(out, &curve_csv(&points))?;
    if let Some(last) = points.last() {
        eprintln!("{}", report_line(&last.report));
    }
    Ok(())
}

pub fn eval(
    game: &str,
    mode: Option<u32>,
    seed: u64,
    policy: &str,
    episodes: usize,
    out: Option<PathBuf>,
) -> Result<()> {
    let (policy, step) = parse_policy(policy)?;
    let (env, mode) = open(game, mode)?;
    let report = maale_harness::evaluate_vs_random(&policy, env.spec().name, mode, episodes, seed)?;
    emit(out, &format!("{CSV_HEADER}\n{}\n", csv_row(step, &report)))?;
    eprintln!("{}", report_line(&report));
    Ok(())
}

pub fn tournament(
    game: &str,
    mode: Option<u32>,
    seed: u64,
    specs: &[String],
    episodes_per_pair: usize,
    out: Option<PathBuf>,
) -> Result<()> {
    let policies = specs
        .iter()
        .map(|s| parse_policy(s).map(|(p, _)| p))
        .collect::<Result<Vec<_>>>()?;
    let (env, mode) = open(game, mode)?;
    let TournamentResult { ranking, pairs } =
        maale_harness::tournament(&policies, env.spec().name, mode, episodes_per_pair, seed)?;
    let mut s = String::from("a,b,mean_reward_per_step_a,stderr,episodes\n");
    for p in &pairs {
        writeln!(
            s,
            "{},{},{},{},{}",
            specs[p.a], specs[p.b], p.mean_a, p.stderr, p.episodes
        )?;
    }
    emit(out, &s)?;
    for (rank, st) in ranking.iter().enumerate() {
        eprintln!(
            "rank {}: {} score={:.6}",
            rank + 1,
            specs[st.policy],
            st.score
        );
    }
    Ok(())
}

fn random_action<R: Rng>(set: &[Action], rng: &mut R) -> Action {
    set[rng.gen_range(0..set.len())]
}

pub fn bench(game: &str, mode: Option<u32>, seconds: f64) -> Result<()> {
    let (env, _) = open(game, mode)?;
    let budget = Duration::from_secs_f64(seconds);
    let set = env.minimal_action_set();
    let players = env.num_players();
    let mut rng = rng_from_seed(0);

    let mut raw = env.clone();
    raw.reset(0)?;
    let mut env_steps = 0u64;
    let start = Instant::now();
    while start.elapsed() < budget {
        let actions: Vec<Action> = (0..players).map(|_| random_action(set, &mut rng)).collect();
        raw.step(&actions)?;
        raw.screen_rgb()?;
        env_steps += 1;
        if raw.game_over()? {
            raw.reset(env_steps)?;
        }
    }
    let env_sps = env_steps as f64 / start.elapsed().as_secs_f64();

    let mut pipe = Pipeline::new(env, PipelineConfig::default());
    pipe.reset(0)?;
    let mut pipe_steps = 0u64;
    let start = Instant::now();
    while start.elapsed() < budget {
        let actions: Vec<Action> = (0..players).map(|_| random_action(set, &mut rng)).collect();
        let out = pipe.step(&actions)?;
        pipe_steps += 1;
        if out.terminal {
            pipe.reset(pipe_steps)?;
        }
    }
    let pipeline_sps = pipe_steps as f64 / start.elapsed().as_secs_f64();
    println!(
        "env_sps={} pipeline_sps={}",
        env_sps as u64, pipeline_sps as u64
    );
    std::io::stdout().flush()?;
    Ok(())
}
