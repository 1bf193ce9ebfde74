//! Video Olympics: classic pong (two and four players), quadrapong and
//! volleyball. Foozpong and basketball are registered but not simulated.
//!
//! Ball speed starts at 2 px/frame, gains 0.25 px/frame per paddle contact and
//! caps at 4 px/frame. A point pays +1 to each member of the scoring team and
//! -1 to each member of the conceding team. First team to 10 points, or frame
//! 10,000, ends the match.

use rand::Rng;

use super::{clamp_u8, Dynamics, Event, StepOutcome, TerminalCause, FP};
use crate::action::{Action, Stick};
use crate::error::EnvError;
use crate::modes::{decode_video_olympics, ModeId, OlympicsGame};
use crate::rng::GameRng;
use crate::screen::{Rgb, Screen, SCREEN_WIDTH};

pub const MINIMAL_ACTIONS: &[Action] = &[
    Action::Noop,
    Action::Up,
    Action::Right,
    Action::Left,
    Action::Down,
];

pub const SCORE_LIMIT: u32 = 10;
pub const FRAME_LIMIT: u32 = 10_000;

const BALL: i32 = 2;
const START_SPEED: i32 = 2 * FP;
const SPEED_STEP: i32 = FP / 4;
const MAX_SPEED: i32 = 4 * FP;
const PADDLE_SPEED: i32 = 3 * FP;
const SERVE_DELAY: u32 = 30;

const FIELD_TOP: i32 = 28;
const FIELD_BOTTOM: i32 = 200;
const WIDTH: i32 = SCREEN_WIDTH as i32;

const QUAD_TOP: i32 = 34;
const QUAD_SIZE: i32 = 160;
const QUAD_CORNER: i32 = 12;

const FLOOR: i32 = 196;
const NET_X: i32 = 78;
const NET_W: i32 = 4;
const NET_TOP: i32 = 150;
const GRAVITY: i32 = FP / 10;
const PLAYER_GRAVITY: i32 = FP / 5;
const JUMP_SPEED: i32 = 4 * FP;
const VOLLEY_LIFT: i32 = 4 * FP;

const BACKGROUND: Rgb = Rgb(24, 26, 74);
const WALL: Rgb = Rgb(170, 170, 170);
const TEAM_COLORS: [Rgb; 2] = [Rgb(92, 186, 92), Rgb(213, 130, 74)];
const BALL_COLOR: Rgb = Rgb::WHITE;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Layout {
    Pong,
    Quadrapong,
    Volleyball,
}

/// Which goal a paddle guards; it deflects balls heading toward that goal.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Guard {
    Left,
    Right,
    Top,
    Bottom,
}

#[derive(Debug, Clone)]
struct Paddle {
    x: i32,
    y: i32,
    w: i32,
    h: i32,
    guard: Guard,
    team: usize,
    /// Vertical velocity for volleyball jumpers.
    vy: i32,
}

impl Paddle {
    fn overlaps(&self, x: i32, y: i32, size: i32) -> bool {
        x < self.x + self.w * FP
            && x + size * FP > self.x
            && y < self.y + self.h * FP
            && y + size * FP > self.y
    }
}

#[derive(Debug, Clone, Copy)]
struct Rect {
    x: i32,
    y: i32,
    w: i32,
    h: i32,
}

impl Rect {
    fn hit(&self, x: i32, y: i32) -> bool {
        x < (self.x + self.w) * FP
            && x + BALL * FP > self.x * FP
            && y < (self.y + self.h) * FP
            && y + BALL * FP > self.y * FP
    }
}

#[derive(Debug, Clone)]
pub struct VideoOlympics {
    layout: Layout,
    players: usize,
    paddles: Vec<Paddle>,
    solids: Vec<Rect>,
    ball_x: i32,
    ball_y: i32,
    vx: i32,
    vy: i32,
    speed: i32,
    serve_timer: u32,
    /// Team that receives the next serve.
    serve_to: usize,
    scores: [u32; 2],
    frame: u32,
}

impl VideoOlympics {
    pub fn new(mode: ModeId, rng: &mut GameRng) -> Result<Self, EnvError> {
        let (game, players) = decode_video_olympics(mode)?;
        let layout = match game {
            OlympicsGame::ClassicPong => Layout::Pong,
            OlympicsGame::Quadrapong => Layout::Quadrapong,
            OlympicsGame::Volleyball => Layout::Volleyball,
            OlympicsGame::Foozpong | OlympicsGame::Basketball => {
                return Err(EnvError::UnsupportedMode {
                    game: "video_olympics".into(),
                    mode,
                })
            }
        };
        let mut g = VideoOlympics {
            layout,
            players,
            paddles: Vec::new(),
            solids: Vec::new(),
            ball_x: 0,
            ball_y: 0,
            vx: 0,
            vy: 0,
            speed: START_SPEED,
            serve_timer: SERVE_DELAY,
            serve_to: rng.gen_range(0..2),
            scores: [0; 2],
            frame: 0,
        };
        g.build_court();
        g.place_ball_for_serve();
        Ok(g)
    }

    fn build_court(&mut self) {
        let mid = (FIELD_TOP + FIELD_BOTTOM) / 2 - 8;
        match self.layout {
            Layout::Pong => {
                let mk = |x: i32, guard, team| Paddle {
                    x: x * FP,
                    y: mid * FP,
                    w: 4,
                    h: 16,
                    guard,
                    team,
                    vy: 0,
                };
                self.paddles.push(mk(16, Guard::Left, 0));
                self.paddles.push(mk(140, Guard::Right, 1));
                if self.players == 4 {
                    self.paddles.push(mk(56, Guard::Left, 0));
                    self.paddles.push(mk(100, Guard::Right, 1));
                }
                self.solids.push(Rect {
                    x: 0,
                    y: FIELD_TOP - 4,
                    w: WIDTH,
                    h: 4,
                });
                self.solids.push(Rect {
                    x: 0,
                    y: FIELD_BOTTOM,
                    w: WIDTH,
                    h: 4,
                });
            }
            Layout::Quadrapong => {
                let c = QUAD_SIZE / 2 - 8;
                // Partners guard opposite walls: 0 left + 2 right, 1 top + 3 bottom.
                self.paddles.push(Paddle {
                    x: 6 * FP,
                    y: (QUAD_TOP + c) * FP,
                    w: 4,
                    h: 16,
                    guard: Guard::Left,
                    team: 0,
                    vy: 0,
                });
                self.paddles.push(Paddle {
                    x: c * FP,
                    y: (QUAD_TOP + 6) * FP,
                    w: 16,
                    h: 4,
                    guard: Guard::Top,
                    team: 1,
                    vy: 0,
                });
                self.paddles.push(Paddle {
                    x: (QUAD_SIZE - 10) * FP,
                    y: (QUAD_TOP + c) * FP,
                    w: 4,
                    h: 16,
                    guard: Guard::Right,
                    team: 0,
                    vy: 0,
                });
                self.paddles.push(Paddle {
                    x: c * FP,
                    y: (QUAD_TOP + QUAD_SIZE - 10) * FP,
                    w: 16,
                    h: 4,
                    guard: Guard::Bottom,
                    team: 1,
                    vy: 0,
                });
                for (x, y) in [
                    (0, QUAD_TOP),
                    (QUAD_SIZE - QUAD_CORNER, QUAD_TOP),
                    (0, QUAD_TOP + QUAD_SIZE - QUAD_CORNER),
                    (QUAD_SIZE - QUAD_CORNER, QUAD_TOP + QUAD_SIZE - QUAD_CORNER),
                ] {
                    self.solids.push(Rect {
                        x,
                        y,
                        w: QUAD_CORNER,
                        h: QUAD_CORNER,
                    });
                }
            }
            Layout::Volleyball => {
                let mk = |x: i32, team| Paddle {
                    x: x * FP,
                    y: (FLOOR - 6) * FP,
                    w: 16,
                    h: 6,
                    guard: Guard::Bottom,
                    team,
                    vy: 0,
                };
                self.paddles.push(mk(30, 0));
                self.paddles.push(mk(114, 1));
                if self.players == 4 {
                    self.paddles.push(mk(52, 0));
                    self.paddles.push(mk(92, 1));
                }
                self.solids.push(Rect {
                    x: NET_X,
                    y: NET_TOP,
                    w: NET_W,
                    h: FLOOR - NET_TOP,
                });
                self.solids.push(Rect {
                    x: 0,
                    y: FIELD_TOP - 4,
                    w: WIDTH,
                    h: 4,
                });
            }
        }
    }

    fn place_ball_for_serve(&mut self) {
        self.vx = 0;
        self.vy = 0;
        match self.layout {
            Layout::Pong => {
                self.ball_x = (WIDTH / 2 - BALL / 2) * FP;
                self.ball_y = ((FIELD_TOP + FIELD_BOTTOM) / 2) * FP;
            }
            Layout::Quadrapong => {
                self.ball_x = (QUAD_SIZE / 2 - BALL / 2) * FP;
                self.ball_y = (QUAD_TOP + QUAD_SIZE / 2) * FP;
            }
            Layout::Volleyball => {
                // Dropped over the receiving team's half.
                let x = if self.serve_to == 0 { 38 } else { 120 };
                self.ball_x = x * FP;
                self.ball_y = 60 * FP;
            }
        }
    }

    fn serve(&mut self, rng: &mut GameRng) {
        self.speed = START_SPEED;
        let slope = rng.gen_range(FP / 4..=3 * FP / 4) * if rng.gen_bool(0.5) { 1 } else { -1 };
        let along = self.speed * slope / FP;
        match self.layout {
            Layout::Pong => {
                let dir = if self.serve_to == 0 { -1 } else { 1 };
                self.vx = dir * self.speed;
                self.vy = along;
            }
            Layout::Quadrapong => {
                // Team 0 guards the side walls, team 1 the top and bottom.
                let dir = if rng.gen_bool(0.5) { 1 } else { -1 };
                if self.serve_to == 0 {
                    self.vx = dir * self.speed;
                    self.vy = along;
                } else {
                    self.vy = dir * self.speed;
                    self.vx = along;
                }
            }
            Layout::Volleyball => {
                self.vx = 0;
                self.vy = 0;
            }
        }
    }

    fn move_paddles(&mut self, sticks: &[Stick]) {
        for (p, stick) in self.paddles.iter_mut().zip(sticks) {
            match self.layout {
                Layout::Pong | Layout::Quadrapong => {
                    let horizontal = matches!(p.guard, Guard::Top | Guard::Bottom);
                    if horizontal {
                        let lo = QUAD_CORNER * FP;
                        let hi = (QUAD_SIZE - QUAD_CORNER - p.w) * FP;
                        p.x = (p.x + stick.dx() * PADDLE_SPEED).clamp(lo, hi);
                    } else {
                        let (lo, hi) = if self.layout == Layout::Pong {
                            (FIELD_TOP * FP, (FIELD_BOTTOM - p.h) * FP)
                        } else {
                            (
                                (QUAD_TOP + QUAD_CORNER) * FP,
                                (QUAD_TOP + QUAD_SIZE - QUAD_CORNER - p.h) * FP,
                            )
                        };
                        p.y = (p.y + stick.dy() * PADDLE_SPEED).clamp(lo, hi);
                    }
                }
                Layout::Volleyball => {
                    let (lo, hi) = if p.team == 0 {
                        (0, (NET_X - p.w) * FP)
                    } else {
                        ((NET_X + NET_W) * FP, (WIDTH - p.w) * FP)
                    };
                    p.x = (p.x + stick.dx() * 2 * FP).clamp(lo, hi);
                    let ground = (FLOOR - p.h) * FP;
                    if stick.up && p.y >= ground {
                        p.vy = -JUMP_SPEED;
                    }
                    p.vy += PLAYER_GRAVITY;
                    p.y += p.vy;
                    if p.y >= ground {
                        p.y = ground;
                        p.vy = 0;
                    }
                }
            }
        }
    }

    fn hits_solid(&self, x: i32, y: i32) -> bool {
        self.solids.iter().any(|r| r.hit(x, y))
            || (self.layout == Layout::Volleyball && (x < 0 || x + BALL * FP > WIDTH * FP))
    }

    fn move_ball(&mut self) {
        if self.layout == Layout::Volleyball {
            self.vy += GRAVITY;
        }
        let nx = self.ball_x + self.vx;
        if self.hits_solid(nx, self.ball_y) {
            self.vx = -self.vx;
        } else {
            self.ball_x = nx;
        }
        let ny = self.ball_y + self.vy;
        if self.hits_solid(self.ball_x, ny) {
            self.vy = -self.vy;
        } else {
            self.ball_y = ny;
        }
    }

    fn deflect(&mut self) {
        for i in 0..self.paddles.len() {
            let p = &self.paddles[i];
            if !p.overlaps(self.ball_x, self.ball_y, BALL) {
                continue;
            }
            let incoming = match p.guard {
                Guard::Left => self.vx < 0,
                Guard::Right => self.vx > 0,
                Guard::Top => self.vy < 0,
                Guard::Bottom if self.layout == Layout::Volleyball => self.vy > -VOLLEY_LIFT / 2,
                Guard::Bottom => self.vy > 0,
            };
            if !incoming {
                continue;
            }
            self.speed = (self.speed + SPEED_STEP).min(MAX_SPEED);
            let (center, half, ball_c) = match p.guard {
                Guard::Left | Guard::Right => (
                    p.y + p.h * FP / 2,
                    p.h * FP / 2,
                    self.ball_y + BALL * FP / 2,
                ),
                Guard::Top | Guard::Bottom => (
                    p.x + p.w * FP / 2,
                    p.w * FP / 2,
                    self.ball_x + BALL * FP / 2,
                ),
            };
            let offset = ((ball_c - center) * FP / half).clamp(-FP, FP);
            let along = self.speed * offset * 3 / 4 / FP;
            match (self.layout, p.guard) {
                (Layout::Volleyball, _) => {
                    let dir = if p.team == 0 { 1 } else { -1 };
                    self.vx = dir * self.speed + along / 2;
                    self.vy = -VOLLEY_LIFT;
                }
                (_, Guard::Left) => {
                    self.vx = self.speed;
                    self.vy = along;
                }
                (_, Guard::Right) => {
                    self.vx = -self.speed;
                    self.vy = along;
                }
                (_, Guard::Top) => {
                    self.vy = self.speed;
                    self.vx = along;
                }
                (_, Guard::Bottom) => {
                    self.vy = -self.speed;
                    self.vx = along;
                }
            }
            return;
        }
    }

    /// Team that concedes because the ball left play, if it did.
    fn conceding_team(&self) -> Option<usize> {
        let x = self.ball_x / FP;
        let y = self.ball_y / FP;
        match self.layout {
            Layout::Pong => {
                if x + BALL < 0 {
                    Some(0)
                } else if x > WIDTH {
                    Some(1)
                } else {
                    None
                }
            }
            Layout::Quadrapong => {
                if x + BALL < 0 || x > QUAD_SIZE {
                    Some(0)
                } else if y + BALL < QUAD_TOP || y > QUAD_TOP + QUAD_SIZE {
                    Some(1)
                } else {
                    None
                }
            }
            Layout::Volleyball => {
                if y + BALL >= FLOOR {
                    Some(if x + BALL / 2 < NET_X + NET_W / 2 {
                        0
                    } else {
                        1
                    })
                } else {
                    None
                }
            }
        }
    }

    fn team_of(&self, player: usize) -> usize {
        self.paddles[player].team
    }

    pub fn scores(&self) -> [u32; 2] {
        self.scores
    }
}

impl Dynamics for VideoOlympics {
    fn players(&self) -> usize {
        self.players
    }

    fn step(&mut self, sticks: &[Stick], rng: &mut GameRng, out: &mut StepOutcome) {
        self.frame += 1;
        self.move_paddles(sticks);

        if self.serve_timer > 0 {
            self.serve_timer -= 1;
            if self.serve_timer == 0 {
                self.serve(rng);
            }
        } else {
            self.move_ball();
            self.deflect();
            if let Some(loser) = self.conceding_team() {
                let winner = 1 - loser;
                self.scores[winner] += 1;
                for p in 0..self.players {
                    out.rewards[p] = if self.team_of(p) == winner { 1 } else { -1 };
                }
                out.events.push(Event::Point { player: winner });
                self.serve_to = loser;
                self.serve_timer = SERVE_DELAY;
                self.place_ball_for_serve();
                if self.scores[winner] >= SCORE_LIMIT {
                    out.terminal = Some(TerminalCause::ScoreLimit);
                }
            }
        }
        if out.terminal.is_none() && self.frame >= FRAME_LIMIT {
            out.terminal = Some(TerminalCause::Time);
        }
    }

    fn render(&self, screen: &mut Screen) {
        screen.clear(BACKGROUND);
        for r in &self.solids {
            screen.fill_rect(r.x, r.y, r.w, r.h, WALL);
        }
        screen.draw_number(48, 6, self.scores[0], 2, TEAM_COLORS[0]);
        screen.draw_number(128, 6, self.scores[1], 2, TEAM_COLORS[1]);
        for p in &self.paddles {
            screen.fill_rect(p.x / FP, p.y / FP, p.w, p.h, TEAM_COLORS[p.team]);
        }
        if self.serve_timer == 0 {
            screen.fill_rect(self.ball_x / FP, self.ball_y / FP, BALL, BALL, BALL_COLOR);
        }
    }

    fn lives(&self) -> Vec<i32> {
        vec![0; self.players]
    }

    /// `[ball_x, ball_y, ball moving right, ball moving down, paddle coords…]`,
    /// each paddle contributing its coordinate along its axis of travel.
    fn ram(&self) -> Vec<u8> {
        let mut ram = vec![
            clamp_u8(self.ball_x / FP),
            clamp_u8(self.ball_y / FP),
            if self.vx > 0 { 255 } else { 0 },
            if self.vy > 0 { 255 } else { 0 },
        ];
        for p in &self.paddles {
            let coord = match (self.layout, p.guard) {
                (Layout::Volleyball, _) => p.x,
                (_, Guard::Top | Guard::Bottom) => p.x,
                _ => p.y,
            };
            ram.push(clamp_u8(coord / FP));
        }
        ram
    }
}
