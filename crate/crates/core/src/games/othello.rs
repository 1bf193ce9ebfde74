//! Othello on bitboards. Each player steers a cursor over the board and
//! presses FIRE to place a disc; illegal placements do nothing. Forced passes
//! happen automatically. Bit `8 * row + col` is the square at `(row, col)`.

use super::{Dynamics, Event, StepOutcome, TerminalCause};
use crate::action::{Action, Stick};
use crate::error::EnvError;
use crate::modes::ModeId;
use crate::rng::GameRng;
use crate::screen::{Rgb, Screen};

pub const MINIMAL_ACTIONS: &[Action] = &[
    Action::Noop,
    Action::Fire,
    Action::Up,
    Action::Right,
    Action::Left,
    Action::Down,
];

const NOT_A_FILE: u64 = 0xfefe_fefe_fefe_fefe;
const NOT_H_FILE: u64 = 0x7f7f_7f7f_7f7f_7f7f;

/// Shifts every disc one square in direction `d` (0..8), dropping wrap-around.
fn shift(b: u64, d: usize) -> u64 {
    match d {
        0 => (b << 1) & NOT_A_FILE, // east
        1 => (b >> 1) & NOT_H_FILE, // west
        2 => b << 8,                // south
        3 => b >> 8,                // north
        4 => (b << 9) & NOT_A_FILE, // south-east
        5 => (b << 7) & NOT_H_FILE, // south-west
        6 => (b >> 7) & NOT_A_FILE, // north-east
        _ => (b >> 9) & NOT_H_FILE, // north-west
    }
}

/// Squares where `me` may legally place a disc.
pub fn legal_moves(me: u64, opp: u64) -> u64 {
    let empty = !(me | opp);
    let mut moves = 0;
    for d in 0..8 {
        let mut run = shift(me, d) & opp;
        for _ in 0..5 {
            run |= shift(run, d) & opp;
        }
        moves |= shift(run, d) & empty;
    }
    moves
}

/// Opponent discs flipped by `me` placing on square `sq`.
pub fn flips(me: u64, opp: u64, sq: u32) -> u64 {
    let origin = 1u64 << sq;
    if (me | opp) & origin != 0 {
        return 0;
    }
    let mut all = 0;
    for d in 0..8 {
        let mut line = 0;
        let mut cur = shift(origin, d);
        while cur & opp != 0 {
            line |= cur;
            cur = shift(cur, d);
        }
        if cur & me != 0 {
            all |= line;
        }
    }
    all
}

pub const INITIAL_BLACK: u64 = (1 << 28) | (1 << 35);
pub const INITIAL_WHITE: u64 = (1 << 27) | (1 << 36);

const MOVE_PERIOD: u8 = 4;
const CELL_W: i32 = 16;
const CELL_H: i32 = 20;
const ORIGIN_X: i32 = 16;
const ORIGIN_Y: i32 = 30;

const BOARD: Rgb = Rgb(26, 102, 26);
const GRID: Rgb = Rgb(12, 60, 12);
const BACKGROUND: Rgb = Rgb(0, 0, 0);
const DISC_COLORS: [Rgb; 2] = [Rgb(20, 20, 20), Rgb(236, 236, 236)];
const CURSOR_COLORS: [Rgb; 2] = [Rgb(252, 100, 100), Rgb(100, 180, 252)];

#[derive(Debug, Clone, Copy)]
struct Cursor {
    col: i32,
    row: i32,
    timer: u8,
}

#[derive(Debug, Clone)]
pub struct Othello {
    /// `discs[0]` is black (player 0), `discs[1]` white.
    discs: [u64; 2],
    mover: usize,
    cursors: [Cursor; 2],
    idle_frames: u32,
}

impl Othello {
    pub fn new(mode: ModeId, _rng: &mut GameRng) -> Result<Self, EnvError> {
        if mode != ModeId(1) {
            return Err(EnvError::InvalidMode {
                game: "othello".into(),
                mode: mode.0 as u32,
                valid: vec![ModeId(1)],
            });
        }
        let cursor = Cursor {
            col: 3,
            row: 3,
            timer: 0,
        };
        Ok(Othello {
            discs: [INITIAL_BLACK, INITIAL_WHITE],
            mover: 0,
            cursors: [cursor; 2],
            idle_frames: 0,
        })
    }

    pub fn discs(&self) -> [u64; 2] {
        self.discs
    }

    pub fn mover(&self) -> usize {
        self.mover
    }

    pub fn cursor(&self, p: usize) -> (i32, i32) {
        (self.cursors[p].col, self.cursors[p].row)
    }

    fn steer(&mut self, p: usize, s: Stick) {
        let c = &mut self.cursors[p];
        if s.dx() == 0 && s.dy() == 0 {
            c.timer = 0;
            return;
        }
        if c.timer > 0 {
            c.timer -= 1;
            return;
        }
        c.col = (c.col + s.dx()).clamp(0, 7);
        c.row = (c.row + s.dy()).clamp(0, 7);
        c.timer = MOVE_PERIOD - 1;
    }

    /// Places the mover's disc on `sq` if legal and advances the turn.
    /// Returns false for an illegal placement.
    pub fn place(&mut self, sq: u32) -> bool {
        let (me, opp) = (self.discs[self.mover], self.discs[1 - self.mover]);
        if legal_moves(me, opp) & (1 << sq) == 0 {
            return false;
        }
        let f = flips(me, opp, sq);
        self.discs[self.mover] = me | f | (1 << sq);
        self.discs[1 - self.mover] = opp & !f;
        let next = 1 - self.mover;
        if legal_moves(self.discs[next], self.discs[self.mover]) != 0 {
            self.mover = next;
        }
        true
    }

    pub fn finished(&self) -> bool {
        legal_moves(self.discs[0], self.discs[1]) == 0
            && legal_moves(self.discs[1], self.discs[0]) == 0
    }

    fn cell_rect(col: i32, row: i32) -> (i32, i32) {
        (ORIGIN_X + col * CELL_W, ORIGIN_Y + row * CELL_H)
    }
}

impl Dynamics for Othello {
    fn players(&self) -> usize {
        2
    }

    fn step(&mut self, sticks: &[Stick], _rng: &mut GameRng, out: &mut StepOutcome) {
        self.idle_frames = self.idle_frames.saturating_add(1);
        for (p, &s) in sticks.iter().enumerate().take(2) {
            self.steer(p, s);
        }
        let p = self.mover;
        if sticks[p].fire {
            let c = self.cursors[p];
            if self.place((8 * c.row + c.col) as u32) {
                self.idle_frames = 0;
                out.events.push(Event::Progress);
            }
        }
        if self.finished() {
            let (b, w) = (self.discs[0].count_ones(), self.discs[1].count_ones());
            let r = (b as i32 - w as i32).signum();
            out.rewards[0] += r;
            out.rewards[1] -= r;
            out.terminal = Some(TerminalCause::ScoreLimit);
        }
    }

    fn render(&self, screen: &mut Screen) {
        screen.clear(BACKGROUND);
        screen.fill_rect(ORIGIN_X, ORIGIN_Y, 8 * CELL_W, 8 * CELL_H, BOARD);
        for i in 0..=8 {
            screen.fill_rect(ORIGIN_X + i * CELL_W, ORIGIN_Y, 1, 8 * CELL_H, GRID);
            screen.fill_rect(ORIGIN_X, ORIGIN_Y + i * CELL_H, 8 * CELL_W, 1, GRID);
        }
        for sq in 0..64 {
            let (col, row) = (sq % 8, sq / 8);
            let (x, y) = Self::cell_rect(col, row);
            for p in 0..2 {
                if self.discs[p] & (1 << sq) != 0 {
                    screen.fill_rect(x + 4, y + 5, CELL_W - 7, CELL_H - 9, DISC_COLORS[p]);
                }
            }
        }
        let c = self.cursors[self.mover];
        let (x, y) = Self::cell_rect(c.col, c.row);
        let color = CURSOR_COLORS[self.mover];
        screen.fill_rect(x + 1, y + 1, CELL_W - 1, 2, color);
        screen.fill_rect(x + 1, y + CELL_H - 2, CELL_W - 1, 2, color);
        for p in 0..2 {
            let right = if p == 0 { 48 } else { 144 };
            screen.draw_number(right, 8, self.discs[p].count_ones(), 2, CURSOR_COLORS[p]);
        }
    }

    fn lives(&self) -> Vec<i32> {
        vec![0, 0]
    }

    /// Both bitboards, the mover, cursors, and frames since the last disc.
    fn ram(&self) -> Vec<u8> {
        let mut ram = Vec::with_capacity(22);
        ram.extend_from_slice(&self.discs[0].to_le_bytes());
        ram.extend_from_slice(&self.discs[1].to_le_bytes());
        ram.push(self.mover as u8);
        for c in &self.cursors {
            ram.extend([c.col as u8, c.row as u8]);
        }
        ram.push(self.idle_frames.min(255) as u8);
        ram
    }

    fn staller(&self) -> Option<usize> {
        Some(self.mover)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::rng_from_seed;

    #[test]
    fn opening_moves() {
        let m = legal_moves(INITIAL_BLACK, INITIAL_WHITE);
        // d3, c4, f5, e6
        let expected = (1u64 << 19) | (1 << 26) | (1 << 37) | (1 << 44);
        assert_eq!(m, expected);
        assert_eq!(flips(INITIAL_BLACK, INITIAL_WHITE, 19), 1 << 27);
    }

    #[test]
    fn shifts_do_not_wrap() {
        let h_file = 0x8080_8080_8080_8080u64;
        assert_eq!(shift(h_file, 0), 0);
        assert_eq!(shift(h_file >> 7, 1), 0);
    }

    #[test]
    fn cursor_placement_and_illegal_noop() {
        let mut rng = rng_from_seed(0);
        let mut g = Othello::new(ModeId(1), &mut rng).unwrap();
        let fire = Stick {
            fire: true,
            ..Default::default()
        };
        let mut out = StepOutcome::default();
        out.reset(2);
        // (3,3) is occupied: illegal.
        g.step(&[fire, Stick::default()], &mut rng, &mut out);
        assert!(!out.has(Event::Progress));
        assert_eq!(g.mover(), 0);
        // Up one row to d3 (row 2, col 3) is legal for black.
        let up = Stick {
            up: true,
            ..Default::default()
        };
        out.reset(2);
        g.step(&[up, Stick::default()], &mut rng, &mut out);
        assert_eq!(g.cursor(0), (3, 2));
        out.reset(2);
        g.step(&[fire, Stick::default()], &mut rng, &mut out);
        assert!(out.has(Event::Progress));
        assert_eq!(g.mover(), 1);
        assert_eq!(g.discs()[0].count_ones(), 4);
    }
}
