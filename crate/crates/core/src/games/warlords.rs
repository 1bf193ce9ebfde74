//! Warlords: four castles in the corners, each a warlord behind an L of
//! bricks guarded by a paddle that slides along an L-shaped track. A ball hit
//! on a warlord eliminates that player; the last one standing wins.

use rand::Rng;

use super::{Dynamics, Event, StepOutcome, TerminalCause};
use crate::action::{Action, Stick};
use crate::error::EnvError;
use crate::modes::ModeId;
use crate::rng::GameRng;
use crate::screen::{Rgb, Screen};

pub const MINIMAL_ACTIONS: &[Action] = &[Action::Noop, Action::Right, Action::Left];

pub const PLAYERS: usize = 4;
pub const BALL_SPEED: f32 = 2.0;
pub const SPEEDUP: f32 = 0.25;
pub const MAX_SPEED: f32 = 4.0;
pub const BRICKS: usize = 20;

const FIELD_TOP: i32 = 16;
const FIELD_BOTTOM: i32 = 208;
const FIELD_RIGHT: i32 = 160;
const BRICK: i32 = 4;
const KING: (i32, i32, i32) = (4, 4, 8);
const TRACK: i32 = 28;
const TRACK_LEN: i32 = 2 * TRACK;
const PADDLE: i32 = 6;
const PADDLE_SPEED: i32 = 2;
const BALL: i32 = 2;
const SERVE_DELAY: u32 = 30;

const BACKGROUND: Rgb = Rgb(0, 0, 0);
const BORDER: Rgb = Rgb(170, 170, 170);
const BALL_COLOR: Rgb = Rgb(236, 236, 236);
pub const PLAYER_COLORS: [Rgb; PLAYERS] = [
    Rgb(200, 72, 72),
    Rgb(72, 160, 72),
    Rgb(66, 114, 194),
    Rgb(210, 164, 74),
];

const KING_SPRITE: [u8; 8] = [0x24, 0x7E, 0xFF, 0xDB, 0xFF, 0x7E, 0x3C, 0x7E];

/// Brick offsets inside a castle, relative to its corner.
fn brick_offsets() -> [(i32, i32); BRICKS] {
    let mut v = [(0, 0); BRICKS];
    let mut k = 0;
    for ly in [16, 20] {
        for lx in (0..24).step_by(4) {
            v[k] = (lx, ly);
            k += 1;
        }
    }
    for lx in [16, 20] {
        for ly in (0..16).step_by(4) {
            v[k] = (lx, ly);
            k += 1;
        }
    }
    v
}

/// Maps a rectangle in corner-local coordinates to the screen for `player`'s
/// corner: 0 top-left, 1 top-right, 2 bottom-left, 3 bottom-right.
fn place(player: usize, lx: i32, ly: i32, w: i32, h: i32) -> (i32, i32, i32, i32) {
    let x = if player % 2 == 1 {
        FIELD_RIGHT - lx - w
    } else {
        lx
    };
    let y = if player >= 2 {
        FIELD_BOTTOM - ly - h
    } else {
        FIELD_TOP + ly
    };
    (x, y, w, h)
}

fn overlaps(a: (i32, i32, i32, i32), b: (i32, i32, i32, i32)) -> bool {
    a.0 < b.0 + b.2 && b.0 < a.0 + a.2 && a.1 < b.1 + b.3 && b.1 < a.1 + a.3
}

#[derive(Debug, Clone, Copy)]
struct Castle {
    alive: bool,
    /// Bit `k` set while brick `k` stands.
    bricks: u32,
    /// Paddle position along the track, 0..=TRACK_LEN.
    track: i32,
}

#[derive(Debug, Clone)]
pub struct Warlords {
    castles: [Castle; PLAYERS],
    x: f32,
    y: f32,
    vx: f32,
    vy: f32,
    speed: f32,
    serve: u32,
    offsets: [(i32, i32); BRICKS],
}

enum Hit {
    None,
    Border,
    Brick(usize, usize),
    King(usize),
    Paddle(usize),
}

impl Warlords {
    pub fn new(mode: ModeId, rng: &mut GameRng) -> Result<Self, EnvError> {
        if mode != ModeId(1) {
            return Err(EnvError::InvalidMode {
                game: "warlords".into(),
                mode: mode.0 as u32,
                valid: vec![ModeId(1)],
            });
        }
        let castle = Castle {
            alive: true,
            bricks: (1 << BRICKS) - 1,
            track: TRACK,
        };
        let mut g = Warlords {
            castles: [castle; PLAYERS],
            x: 0.0,
            y: 0.0,
            vx: 0.0,
            vy: 0.0,
            speed: BALL_SPEED,
            serve: 0,
            offsets: brick_offsets(),
        };
        g.serve_ball(rng);
        Ok(g)
    }

    fn serve_ball(&mut self, rng: &mut GameRng) {
        self.x = (FIELD_RIGHT / 2 - BALL / 2) as f32;
        self.y = ((FIELD_TOP + FIELD_BOTTOM) / 2 - BALL / 2) as f32;
        self.speed = BALL_SPEED;
        let angle =
            rng.gen_range(0.3f32..1.27) + rng.gen_range(0..4) as f32 * std::f32::consts::FRAC_PI_2;
        self.vx = angle.cos() * self.speed;
        self.vy = angle.sin() * self.speed;
        self.serve = SERVE_DELAY;
    }

    pub fn alive(&self) -> [bool; PLAYERS] {
        self.castles.map(|c| c.alive)
    }

    pub fn bricks_left(&self, player: usize) -> u32 {
        self.castles[player].bricks.count_ones()
    }

    pub fn ball_speed(&self) -> f32 {
        self.speed
    }

    fn paddle_rect(&self, p: usize) -> (i32, i32, i32, i32) {
        let s = self.castles[p].track;
        let (lx, ly) = if s <= TRACK {
            (TRACK, s)
        } else {
            (TRACK - (s - TRACK), TRACK)
        };
        place(p, lx, ly, PADDLE, PADDLE)
    }

    fn king_rect(p: usize) -> (i32, i32, i32, i32) {
        place(p, KING.0, KING.1, KING.2, KING.2)
    }

    fn brick_rect(&self, p: usize, k: usize) -> (i32, i32, i32, i32) {
        let (lx, ly) = self.offsets[k];
        place(p, lx, ly, BRICK, BRICK)
    }

    fn probe(&self, x: f32, y: f32) -> Hit {
        let (bx, by) = (x.floor() as i32, y.floor() as i32);
        if bx < 0 || by < FIELD_TOP || bx + BALL > FIELD_RIGHT || by + BALL > FIELD_BOTTOM {
            return Hit::Border;
        }
        let ball = (bx, by, BALL, BALL);
        for p in 0..PLAYERS {
            let c = &self.castles[p];
            if !c.alive {
                continue;
            }
            if overlaps(ball, self.paddle_rect(p)) {
                return Hit::Paddle(p);
            }
            if overlaps(ball, Self::king_rect(p)) {
                return Hit::King(p);
            }
            for k in 0..BRICKS {
                if c.bricks & (1 << k) != 0 && overlaps(ball, self.brick_rect(p, k)) {
                    return Hit::Brick(p, k);
                }
            }
        }
        Hit::None
    }

    fn set_velocity(&mut self, angle: f32) {
        self.vx = angle.cos() * self.speed;
        self.vy = angle.sin() * self.speed;
    }

    /// Nudges the heading slightly and keeps it away from the axes, so the
    /// ball cannot settle into a closed loop.
    fn jitter(&mut self, rng: &mut GameRng) {
        let mut a = self.vy.atan2(self.vx) + rng.gen_range(-0.08f32..0.08);
        let quarter = std::f32::consts::FRAC_PI_2;
        let q = (a / quarter).floor();
        let within = a - q * quarter;
        a = q * quarter + within.clamp(0.25, quarter - 0.25);
        self.set_velocity(a);
    }

    fn advance_ball(&mut self, rng: &mut GameRng, out: &mut StepOutcome) {
        let steps = self.speed.ceil().max(1.0) as usize;
        for _ in 0..steps {
            let (dx, dy) = (self.vx / steps as f32, self.vy / steps as f32);
            let (nx, ny) = (self.x + dx, self.y + dy);
            let hit = self.probe(nx, ny);
            if matches!(hit, Hit::None) {
                self.x = nx;
                self.y = ny;
                continue;
            }
            match hit {
                Hit::Brick(p, k) => self.castles[p].bricks &= !(1 << k),
                Hit::King(p) => self.eliminate(p, out),
                Hit::Paddle(p) => {
                    // A paddle slid onto the ball: let the ball pass out of it.
                    if matches!(self.probe(self.x, self.y), Hit::Paddle(q) if q == p) {
                        self.x = nx;
                        self.y = ny;
                        continue;
                    }
                    self.speed = (self.speed + SPEEDUP).min(MAX_SPEED);
                }
                _ => {}
            }
            let blocked_x = !matches!(self.probe(nx, self.y), Hit::None);
            let blocked_y = !matches!(self.probe(self.x, ny), Hit::None);
            if blocked_x || !blocked_y {
                self.vx = -self.vx;
            }
            if blocked_y || !blocked_x {
                self.vy = -self.vy;
            }
            self.jitter(rng);
            return;
        }
    }

    fn eliminate(&mut self, p: usize, out: &mut StepOutcome) {
        let c = &mut self.castles[p];
        c.alive = false;
        c.bricks = 0;
        out.rewards[p] -= 1;
        out.events.push(Event::Eliminated { player: p });
    }
}

impl Dynamics for Warlords {
    fn players(&self) -> usize {
        PLAYERS
    }

    fn step(&mut self, sticks: &[Stick], rng: &mut GameRng, out: &mut StepOutcome) {
        for (p, s) in sticks.iter().enumerate().take(PLAYERS) {
            let c = &mut self.castles[p];
            if c.alive {
                c.track = (c.track + PADDLE_SPEED * s.dx()).clamp(0, TRACK_LEN);
            }
        }
        if self.serve > 0 {
            self.serve -= 1;
        } else {
            self.advance_ball(rng, out);
        }
        let alive: Vec<usize> = (0..PLAYERS).filter(|&p| self.castles[p].alive).collect();
        if alive.len() <= 1 {
            if let Some(&w) = alive.first() {
                out.rewards[w] += 1;
                out.events.push(Event::Point { player: w });
            }
            out.terminal = Some(TerminalCause::Lives);
        }
    }

    fn render(&self, screen: &mut Screen) {
        screen.clear(BACKGROUND);
        screen.fill_rect(0, FIELD_TOP - 2, FIELD_RIGHT, 2, BORDER);
        for p in 0..PLAYERS {
            let c = &self.castles[p];
            if !c.alive {
                continue;
            }
            let color = PLAYER_COLORS[p];
            for k in 0..BRICKS {
                if c.bricks & (1 << k) != 0 {
                    let (x, y, w, h) = self.brick_rect(p, k);
                    screen.fill_rect(x, y, w - 1, h - 1, color);
                }
            }
            let (x, y, _, _) = Self::king_rect(p);
            screen.blit(x, y, &KING_SPRITE, 1, color);
            let (x, y, w, h) = self.paddle_rect(p);
            screen.fill_rect(x, y, w, h, color);
        }
        screen.fill_rect(self.x as i32, self.y as i32, BALL, BALL, BALL_COLOR);
    }

    fn lives(&self) -> Vec<i32> {
        self.castles
            .iter()
            .map(|c| if c.alive { 0 } else { -1 })
            .collect()
    }

    /// Ball position and direction, paddle track positions, alive mask, then
    /// three bytes of brick bits per castle.
    fn ram(&self) -> Vec<u8> {
        let mut ram = vec![
            self.x as u8,
            self.y as u8,
            (self.vx > 0.0) as u8 * 255,
            (self.vy > 0.0) as u8 * 255,
        ];
        ram.extend(self.castles.iter().map(|c| c.track as u8));
        ram.push(
            self.castles
                .iter()
                .enumerate()
                .fold(0u8, |m, (p, c)| m | ((c.alive as u8) << p)),
        );
        for c in &self.castles {
            ram.extend_from_slice(&c.bricks.to_le_bytes()[..3]);
        }
        ram
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::rng_from_seed;

    fn run_idle(seed: u64) -> (Warlords, Vec<i32>, u64) {
        let mut rng = rng_from_seed(seed);
        let mut g = Warlords::new(ModeId(1), &mut rng).unwrap();
        let mut totals = vec![0; PLAYERS];
        let mut out = StepOutcome::default();
        let mut frames = 0u64;
        loop {
            frames += 1;
            out.reset(PLAYERS);
            g.step(&[Stick::default(); PLAYERS], &mut rng, &mut out);
            for p in 0..PLAYERS {
                totals[p] += out.rewards[p];
            }
            if out.terminal.is_some() {
                return (g, totals, frames);
            }
            assert!(frames < 2_000_000, "seed {seed} never ended");
        }
    }

    #[test]
    fn castle_geometry() {
        let offs = brick_offsets();
        let mut uniq = offs.to_vec();
        uniq.sort();
        uniq.dedup();
        assert_eq!(uniq.len(), BRICKS);
        for p in 0..PLAYERS {
            let king = Warlords::king_rect(p);
            for &(lx, ly) in &offs {
                assert!(!overlaps(king, place(p, lx, ly, BRICK, BRICK)));
            }
        }
    }

    #[test]
    fn idle_games_end_with_one_survivor() {
        for seed in 0..5 {
            let (g, totals, _) = run_idle(seed);
            let alive = g.alive();
            assert_eq!(alive.iter().filter(|&&a| a).count(), 1);
            for p in 0..PLAYERS {
                assert_eq!(totals[p], if alive[p] { 1 } else { -1 });
            }
            assert_eq!(g.lives().iter().filter(|&&l| l == -1).count(), 3);
        }
    }

    #[test]
    fn speed_rises_on_paddle_contact_and_caps() {
        let mut rng = rng_from_seed(2);
        let mut g = Warlords::new(ModeId(1), &mut rng).unwrap();
        let mut out = StepOutcome::default();
        for _ in 0..20 {
            out.reset(PLAYERS);
            let (x, y, _, _) = g.paddle_rect(0);
            g.x = (x + 2) as f32;
            g.y = (y + PADDLE + 1) as f32;
            g.vx = 0.0;
            g.vy = -g.speed;
            g.serve = 0;
            let before = g.speed;
            g.advance_ball(&mut rng, &mut out);
            assert_eq!(g.speed, (before + SPEEDUP).min(MAX_SPEED));
        }
        assert_eq!(g.ball_speed(), MAX_SPEED);
    }

    #[test]
    fn eliminated_paddle_ignores_input() {
        let mut rng = rng_from_seed(3);
        let mut g = Warlords::new(ModeId(1), &mut rng).unwrap();
        let mut out = StepOutcome::default();
        out.reset(PLAYERS);
        g.eliminate(3, &mut out);
        assert_eq!(out.rewards[3], -1);
        let before = g.castles[3].track;
        let right = Stick {
            right: true,
            ..Default::default()
        };
        out.reset(PLAYERS);
        g.step(&[right; PLAYERS], &mut rng, &mut out);
        assert_eq!(g.castles[3].track, before);
        assert_eq!(g.lives(), vec![0, 0, 0, -1]);
    }
}
