//! Two-player Space Invaders: both cannons share the bottom row and a pool
//! of three lives. Each alien shot pays the shooter; when a bomb destroys a
//! cannon the other player collects a survivor bonus. The game ends when the
//! pool runs out, when the formation reaches the cannons, or at the frame
//! limit.

use rand::Rng;

use super::{Dynamics, Event, StepOutcome, TerminalCause};
use crate::action::{Action, Stick};
use crate::error::EnvError;
use crate::modes::{ModeId, SpaceInvadersFlags};
use crate::rng::GameRng;
use crate::screen::{Rgb, Screen};

pub const MINIMAL_ACTIONS: &[Action] = &[
    Action::Noop,
    Action::Fire,
    Action::Right,
    Action::Left,
    Action::RightFire,
    Action::LeftFire,
];

pub const ALIEN_ROWS: usize = 6;
pub const ALIEN_COLS: usize = 6;
pub const ALIEN_REWARD: i32 = 10;
pub const SURVIVOR_REWARD: i32 = 20;
pub const SHARED_LIVES: i32 = 3;
pub const TURN_FRAMES: u32 = 120;
pub const FRAME_LIMIT: u32 = 18_000;

pub const CANNON_Y: i32 = 185;
const CANNON_W: i32 = 7;
const CANNON_H: i32 = 6;
const CANNON_MIN_X: i32 = 8;
const CANNON_MAX_X: i32 = 152 - CANNON_W;
const START_X: [i32; 2] = [40, 112];
const RESPAWN_FRAMES: u32 = 60;

const ALIEN_W: i32 = 8;
const ALIEN_H: i32 = 8;
const ALIEN_DX: i32 = 16;
const ALIEN_DY: i32 = 14;
const FORMATION_X: i32 = 24;
const FORMATION_Y: i32 = 32;
const FORMATION_DROP: i32 = 8;
const MARCH_STEP: i32 = 2;

const BULLET_SPEED: i32 = 4;
const BULLET_H: i32 = 4;
const BOMB_H: i32 = 4;
const MAX_BOMBS: usize = 3;
const BOMB_CHANCE: f64 = 1.0 / 24.0;

const SHIELD_Y: i32 = 157;
const SHIELD_X: [i32; 3] = [24, 72, 120];
const SHIELD_COLS: usize = 8;
const SHIELD_ROWS: usize = 6;
/// Each shield cell is a 2×2 pixel chunk.
const CHUNK: i32 = 2;
const SHIELD_SWING: i32 = 16;

const BACKGROUND: Rgb = Rgb(0, 0, 0);
pub const ALIEN_COLOR: Rgb = Rgb(134, 134, 29);
const SHIELD_COLOR: Rgb = Rgb(181, 83, 40);
const BOMB_COLOR: Rgb = Rgb(142, 142, 142);
const GROUND_COLOR: Rgb = Rgb(80, 89, 22);
pub const CANNON_COLORS: [Rgb; 2] = [Rgb(50, 132, 50), Rgb(162, 98, 33)];

const ALIEN_SPRITE: [u8; 8] = [0x18, 0x3C, 0x7E, 0xDB, 0xFF, 0x24, 0x5A, 0xA5];
const CANNON_SPRITE: [u8; 6] = [0x10, 0x38, 0x38, 0xFE, 0xFE, 0xFE];

#[derive(Debug, Clone, Copy)]
struct Cannon {
    x: i32,
    bullet: Option<(i32, i32)>,
    /// Frames until the cannon reappears after being hit.
    down: u32,
    losses: i32,
}

#[derive(Debug, Clone, Copy)]
struct Bomb {
    x: i32,
    y: i32,
}

#[derive(Debug, Clone)]
pub struct SpaceInvaders {
    flags: SpaceInvadersFlags,
    cannons: [Cannon; 2],
    /// Alive flags, row-major from the top row.
    aliens: [[bool; ALIEN_COLS]; ALIEN_ROWS],
    fx: i32,
    fy: i32,
    march_dir: i32,
    march_timer: u32,
    bombs: Vec<Bomb>,
    shields: [[[bool; SHIELD_COLS]; SHIELD_ROWS]; 3],
    pool: i32,
    turn: usize,
    turn_frames: u32,
    frame: u32,
    scores: [u32; 2],
}

impl SpaceInvaders {
    pub fn new(mode: ModeId, _rng: &mut GameRng) -> Result<Self, EnvError> {
        let flags = SpaceInvadersFlags::decode(mode)?;
        let cannon = |x| Cannon {
            x,
            bullet: None,
            down: 0,
            losses: 0,
        };
        Ok(SpaceInvaders {
            flags,
            cannons: [cannon(START_X[0]), cannon(START_X[1])],
            aliens: [[true; ALIEN_COLS]; ALIEN_ROWS],
            fx: FORMATION_X,
            fy: FORMATION_Y,
            march_dir: 1,
            march_timer: 0,
            bombs: Vec::new(),
            shields: [[[true; SHIELD_COLS]; SHIELD_ROWS]; 3],
            pool: SHARED_LIVES,
            turn: 0,
            turn_frames: 0,
            frame: 0,
            scores: [0, 0],
        })
    }

    pub fn flags(&self) -> SpaceInvadersFlags {
        self.flags
    }

    /// The player whose turn it is; both players act when turns are off.
    pub fn turn(&self) -> Option<usize> {
        self.flags.alternating_turns.then_some(self.turn)
    }

    pub fn aliens_alive(&self) -> usize {
        self.aliens.iter().flatten().filter(|&&a| a).count()
    }

    /// Whether the formation is drawn at all.
    pub fn aliens_shown(&self) -> bool {
        !self.flags.invisible_invaders
    }

    fn alien_rect(&self, r: usize, c: usize) -> (i32, i32) {
        (self.fx + c as i32 * ALIEN_DX, self.fy + r as i32 * ALIEN_DY)
    }

    fn shield_offset(&self) -> i32 {
        if !self.flags.moving_shields {
            return 0;
        }
        // Triangle wave between -SWING and +SWING, one pixel every two frames.
        let period = 4 * SHIELD_SWING as u32;
        let t = (self.frame / 2 % period) as i32;
        if t < 2 * SHIELD_SWING {
            t - SHIELD_SWING
        } else {
            3 * SHIELD_SWING - t
        }
    }

    /// Destroys the shield chunk under `(x, y)`, if any.
    fn hit_shield(&mut self, x: i32, y: i32) -> bool {
        let off = self.shield_offset();
        for (s, sx) in SHIELD_X.iter().enumerate() {
            let lx = x - (sx + off);
            let ly = y - SHIELD_Y;
            if lx < 0 || ly < 0 {
                continue;
            }
            let (cx, cy) = ((lx / CHUNK) as usize, (ly / CHUNK) as usize);
            if cx < SHIELD_COLS && cy < SHIELD_ROWS && self.shields[s][cy][cx] {
                self.shields[s][cy][cx] = false;
                return true;
            }
        }
        false
    }

    fn march(&mut self) -> bool {
        let alive = self.aliens_alive() as u32;
        let period = 2 + alive / 2;
        self.march_timer += 1;
        if self.march_timer < period {
            return false;
        }
        self.march_timer = 0;
        let cols: Vec<usize> = (0..ALIEN_COLS)
            .filter(|&c| (0..ALIEN_ROWS).any(|r| self.aliens[r][c]))
            .collect();
        let (Some(&first), Some(&last)) = (cols.first(), cols.last()) else {
            return false;
        };
        let left = self.fx + first as i32 * ALIEN_DX + self.march_dir * MARCH_STEP;
        let right = self.fx + last as i32 * ALIEN_DX + ALIEN_W + self.march_dir * MARCH_STEP;
        if left < CANNON_MIN_X || right > CANNON_MAX_X + CANNON_W {
            self.march_dir = -self.march_dir;
            self.fy += FORMATION_DROP;
        } else {
            self.fx += self.march_dir * MARCH_STEP;
        }
        let bottom = (0..ALIEN_ROWS)
            .rev()
            .find(|&r| self.aliens[r].iter().any(|&a| a))
            .map(|r| self.fy + r as i32 * ALIEN_DY + ALIEN_H);
        matches!(bottom, Some(b) if b >= CANNON_Y)
    }

    fn drop_bombs(&mut self, rng: &mut GameRng) {
        if self.bombs.len() >= MAX_BOMBS || !rng.gen_bool(BOMB_CHANCE) {
            return;
        }
        let c = rng.gen_range(0..ALIEN_COLS);
        if let Some(r) = (0..ALIEN_ROWS).rev().find(|&r| self.aliens[r][c]) {
            let (x, y) = self.alien_rect(r, c);
            self.bombs.push(Bomb {
                x: x + ALIEN_W / 2,
                y: y + ALIEN_H,
            });
        }
    }

    fn cannon_hit(&self, i: usize, x: i32, y: i32) -> bool {
        let c = &self.cannons[i];
        c.down == 0 && x >= c.x && x < c.x + CANNON_W && y >= CANNON_Y && y < CANNON_Y + CANNON_H
    }

    /// Spare lives per player from the shared pool: the survivable losses
    /// are split evenly, any odd one going to whoever has lost fewer.
    pub fn split_lives(pool: i32, losses: [i32; 2]) -> [i32; 2] {
        let spare = pool - 1;
        if spare < 0 {
            return [-1, -1];
        }
        let mut lives = [spare / 2, spare / 2];
        if spare % 2 == 1 {
            let fewer = if losses[1] < losses[0] { 1 } else { 0 };
            lives[fewer] += 1;
        }
        lives
    }

    fn move_cannon(&mut self, i: usize, active: bool, stick: Stick, out: &mut StepOutcome) {
        let c = &mut self.cannons[i];
        if c.down > 0 {
            c.down -= 1;
            return;
        }
        if !active {
            return;
        }
        c.x = (c.x + stick.dx()).clamp(CANNON_MIN_X, CANNON_MAX_X);
        if stick.fire && c.bullet.is_none() {
            c.bullet = Some((c.x + CANNON_W / 2, CANNON_Y - BULLET_H));
            out.events.push(Event::Fired { player: i });
            if self.flags.alternating_turns {
                self.pass_turn();
            }
        }
    }

    fn pass_turn(&mut self) {
        self.turn = 1 - self.turn;
        self.turn_frames = 0;
    }

    fn move_bullets(&mut self, out: &mut StepOutcome) {
        for i in 0..2 {
            let Some((x, mut y)) = self.cannons[i].bullet else {
                continue;
            };
            let mut spent = false;
            for _ in 0..BULLET_SPEED {
                y -= 1;
                if y < 0 || self.hit_shield(x, y) {
                    spent = true;
                    break;
                }
                if let Some((r, c)) = self.alien_at(x, y) {
                    self.aliens[r][c] = false;
                    out.rewards[i] += ALIEN_REWARD;
                    self.scores[i] += ALIEN_REWARD as u32;
                    out.events.push(Event::Point { player: i });
                    spent = true;
                    break;
                }
            }
            self.cannons[i].bullet = if spent { None } else { Some((x, y)) };
        }
    }

    fn alien_at(&self, x: i32, y: i32) -> Option<(usize, usize)> {
        let lx = x - self.fx;
        let ly = y - self.fy;
        if lx < 0 || ly < 0 {
            return None;
        }
        let (c, r) = ((lx / ALIEN_DX) as usize, (ly / ALIEN_DY) as usize);
        let inside = lx % ALIEN_DX < ALIEN_W && ly % ALIEN_DY < ALIEN_H;
        (inside && r < ALIEN_ROWS && c < ALIEN_COLS && self.aliens[r][c]).then_some((r, c))
    }

    fn move_bombs(&mut self, rng: &mut GameRng, out: &mut StepOutcome) -> bool {
        let speed = if self.flags.fast_bombs { 2 } else { 1 };
        let mut bombs = std::mem::take(&mut self.bombs);
        let mut killed = false;
        bombs.retain_mut(|b| {
            if self.flags.zigzag_bombs {
                b.x += rng.gen_range(-1..=1);
            }
            for _ in 0..speed {
                b.y += 1;
                let tip = b.y + BOMB_H - 1;
                if tip >= CANNON_Y + CANNON_H {
                    return false;
                }
                if self.hit_shield(b.x, tip) {
                    return false;
                }
                for i in 0..2 {
                    if self.cannon_hit(i, b.x, tip) {
                        self.destroy_cannon(i, out);
                        killed = true;
                        return false;
                    }
                }
            }
            true
        });
        self.bombs = bombs;
        killed
    }

    fn destroy_cannon(&mut self, i: usize, out: &mut StepOutcome) {
        let c = &mut self.cannons[i];
        c.down = RESPAWN_FRAMES;
        c.losses += 1;
        c.x = START_X[i];
        c.bullet = None;
        self.pool -= 1;
        out.events.push(Event::LifeLost { player: i });
        if self.cannons[1 - i].down == 0 {
            out.rewards[1 - i] += SURVIVOR_REWARD;
            self.scores[1 - i] += SURVIVOR_REWARD as u32;
        }
    }
}

impl Dynamics for SpaceInvaders {
    fn players(&self) -> usize {
        2
    }

    fn step(&mut self, sticks: &[Stick], rng: &mut GameRng, out: &mut StepOutcome) {
        self.frame += 1;
        if self.flags.alternating_turns {
            self.turn_frames += 1;
            if self.turn_frames >= TURN_FRAMES {
                self.pass_turn();
            }
        }
        // The turn is fixed for the whole frame, so a pass on fire only takes
        // effect from the next frame.
        let turn = self.turn;
        for (i, &s) in sticks.iter().enumerate().take(2) {
            let active = !self.flags.alternating_turns || turn == i;
            self.move_cannon(i, active, s, out);
        }
        self.move_bullets(out);
        if self.aliens_alive() == 0 {
            self.aliens = [[true; ALIEN_COLS]; ALIEN_ROWS];
            self.fx = FORMATION_X;
            self.fy = FORMATION_Y;
            self.march_dir = 1;
            self.bombs.clear();
        }
        let invaded = self.march();
        self.drop_bombs(rng);
        self.move_bombs(rng, out);

        if invaded {
            self.pool = 0;
            out.terminal = Some(TerminalCause::Lives);
        } else if self.pool <= 0 {
            out.terminal = Some(TerminalCause::Lives);
        } else if self.frame >= FRAME_LIMIT {
            out.terminal = Some(TerminalCause::Time);
        }
    }

    fn render(&self, screen: &mut Screen) {
        screen.clear(BACKGROUND);
        if self.aliens_shown() {
            for r in 0..ALIEN_ROWS {
                for c in 0..ALIEN_COLS {
                    if self.aliens[r][c] {
                        let (x, y) = self.alien_rect(r, c);
                        screen.blit(x, y, &ALIEN_SPRITE, 1, ALIEN_COLOR);
                    }
                }
            }
        }
        let off = self.shield_offset();
        for (s, sx) in SHIELD_X.iter().enumerate() {
            for cy in 0..SHIELD_ROWS {
                for cx in 0..SHIELD_COLS {
                    if self.shields[s][cy][cx] {
                        screen.fill_rect(
                            sx + off + cx as i32 * CHUNK,
                            SHIELD_Y + cy as i32 * CHUNK,
                            CHUNK,
                            CHUNK,
                            SHIELD_COLOR,
                        );
                    }
                }
            }
        }
        for b in &self.bombs {
            screen.fill_rect(b.x, b.y, 1, BOMB_H, BOMB_COLOR);
        }
        for (i, c) in self.cannons.iter().enumerate() {
            if c.down == 0 {
                screen.blit(c.x, CANNON_Y, &CANNON_SPRITE, 1, CANNON_COLORS[i]);
            }
            if let Some((x, y)) = c.bullet {
                screen.fill_rect(x, y, 1, BULLET_H, CANNON_COLORS[i]);
            }
            let right = if i == 0 { 48 } else { 144 };
            screen.draw_number(right, 6, self.scores[i], 2, CANNON_COLORS[i]);
        }
        screen.fill_rect(0, CANNON_Y + CANNON_H + 4, 160, 2, GROUND_COLOR);
    }

    fn lives(&self) -> Vec<i32> {
        let losses = [self.cannons[0].losses, self.cannons[1].losses];
        Self::split_lives(self.pool, losses).to_vec()
    }

    /// Cannons and bullets, formation origin and direction, bombs, turn,
    /// pool, then the alive mask packed into bytes.
    fn ram(&self) -> Vec<u8> {
        let mut ram = Vec::with_capacity(24);
        for c in &self.cannons {
            let (bx, by) = c.bullet.unwrap_or((0, 0));
            ram.extend([c.x as u8, bx as u8, by as u8, c.down.min(255) as u8]);
        }
        ram.extend([self.fx as u8, self.fy as u8, (self.march_dir > 0) as u8]);
        for k in 0..MAX_BOMBS {
            let (x, y) = self.bombs.get(k).map_or((0, 0), |b| (b.x, b.y));
            ram.extend([x.clamp(0, 255) as u8, y.clamp(0, 255) as u8]);
        }
        ram.extend([self.turn as u8, self.pool.max(0) as u8]);
        let mut bits = 0u64;
        for (k, &a) in self.aliens.iter().flatten().enumerate() {
            bits |= (a as u64) << k;
        }
        ram.extend_from_slice(&bits.to_le_bytes()[..5]);
        ram
    }
}
