//! Entombed: both players descend an endlessly scrolling maze. The maze
//! scrolls up one block row every 40 frames; a player pushed off the top, or
//! walled in with no make-break charge, loses a life and the stage restarts.
//!
//! Competitive scoring (mode 2) pays +1 to a player whenever the opponent
//! loses a life and -1 to the player who lost it. Cooperative scoring
//! (mode 3) pays both players +1 each time either of them first enters a new
//! maze section (five per stage) and each time a stage restarts after a
//! non-final death.

use std::collections::VecDeque;

use rand::Rng;

use super::maze::{carve_perfect_maze, BlockGrid};
use super::{Dynamics, Event, StepOutcome, TerminalCause};
use crate::action::{Action, Stick};
use crate::error::EnvError;
use crate::modes::{EntombedScoring, ModeId};
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

pub const SCROLL_PERIOD: u32 = 40;
pub const SECTIONS_PER_STAGE: u32 = 5;
pub const INITIAL_LIVES: i32 = 2;
pub const FRAME_LIMIT: u32 = 18_000;

const CELL_COLS: usize = 9;
const SECTION_CELL_ROWS: usize = 8;
pub(crate) const COLS: i32 = 2 * CELL_COLS as i32 + 1;
/// Block rows per section; adjacent sections share a border row.
pub(crate) const SECTION_ROWS: i64 = 2 * SECTION_CELL_ROWS as i64;
const VIEW_ROWS: i64 = 22;
const BLOCK_W: i32 = 8;
const BLOCK_H: i32 = 8;
const ORIGIN_X: i32 = 4;
const ORIGIN_Y: i32 = 24;
const MOVE_PERIOD: u8 = 4;
const FIRE_COOLDOWN: u8 = 16;
const MAX_CHARGES: u8 = 3;
/// Every stage starts with at least this many make-break charges.
const STAGE_CHARGES: u8 = 1;
const POWERUPS_PER_SECTION: usize = 2;
const START_COLS: [i32; 2] = [3, 15];

const BACKGROUND: Rgb = Rgb(0, 0, 0);
const WALL_COLORS: [Rgb; 4] = [
    Rgb(132, 144, 252),
    Rgb(104, 200, 120),
    Rgb(200, 120, 200),
    Rgb(210, 180, 90),
];
const PLAYER_COLORS: [Rgb; 2] = [Rgb(252, 96, 96), Rgb(96, 220, 252)];
const POWERUP: Rgb = Rgb(252, 252, 84);

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) struct Digger {
    pub col: i32,
    pub row: i64,
    facing: (i32, i32),
    move_timer: u8,
    fire_timer: u8,
    pub charges: u8,
    pub lives: i32,
}

#[derive(Debug, Clone)]
pub struct Entombed {
    scoring: EntombedScoring,
    /// Wall bitmasks, bit `c` set when column `c` is solid.
    rows: VecDeque<u32>,
    /// World index of `rows[0]`.
    base: i64,
    /// Number of sections generated since the stage started.
    generated: i64,
    pub(crate) scroll: i64,
    powerups: Vec<(i32, i64)>,
    pub(crate) diggers: [Digger; 2],
    /// Deepest section any player has entered this stage.
    reached_section: i64,
    sections_passed: u32,
    frame: u32,
    stage_frame: u32,
}

impl Entombed {
    pub fn new(mode: ModeId, rng: &mut GameRng) -> Result<Self, EnvError> {
        let scoring = EntombedScoring::decode(mode)?;
        let digger = |col| Digger {
            col,
            row: 1,
            facing: (0, 1),
            move_timer: 0,
            fire_timer: 0,
            charges: 0,
            lives: INITIAL_LIVES,
        };
        let mut g = Entombed {
            scoring,
            rows: VecDeque::new(),
            base: 0,
            generated: 0,
            scroll: 0,
            powerups: Vec::new(),
            diggers: [digger(START_COLS[0]), digger(START_COLS[1])],
            reached_section: 0,
            sections_passed: 0,
            frame: 0,
            stage_frame: 0,
        };
        g.start_stage(rng);
        Ok(g)
    }

    fn start_stage(&mut self, rng: &mut GameRng) {
        self.rows.clear();
        self.base = 0;
        self.generated = 0;
        self.scroll = 0;
        self.powerups.clear();
        self.reached_section = 0;
        self.stage_frame = 0;
        for (d, col) in self.diggers.iter_mut().zip(START_COLS) {
            d.col = col;
            d.row = 1;
            d.facing = (0, 1);
            d.move_timer = 0;
            d.fire_timer = 0;
            d.charges = d.charges.max(STAGE_CHARGES);
        }
        self.ensure_rows(rng);
    }

    fn append_section(&mut self, rng: &mut GameRng) {
        let maze = carve_perfect_maze(CELL_COLS, SECTION_CELL_ROWS, rng);
        let first = self.rows.is_empty();
        if !first {
            // Open the shared border so the new section hangs off the old one.
            let c = 2 * rng.gen_range(0..CELL_COLS as i32) + 1;
            if let Some(last) = self.rows.back_mut() {
                *last &= !(1 << c);
            }
        }
        let top_row_world = self.base + self.rows.len() as i64 - if first { 0 } else { 1 };
        let skip = if first { 0 } else { 1 };
        for y in skip..maze.height() as i32 {
            let mut bits = 0u32;
            for x in 0..COLS {
                if maze.is_wall(x, y) {
                    bits |= 1 << x;
                }
            }
            self.rows.push_back(bits);
        }
        for _ in 0..POWERUPS_PER_SECTION {
            let cx = 2 * rng.gen_range(0..CELL_COLS as i32) + 1;
            let cy = 2 * rng.gen_range(0..SECTION_CELL_ROWS as i64) + 1;
            let pos = (cx, top_row_world + cy);
            if pos.1 > 2 && !self.powerups.contains(&pos) {
                self.powerups.push(pos);
            }
        }
        self.generated += 1;
    }

    fn ensure_rows(&mut self, rng: &mut GameRng) {
        while self.base + (self.rows.len() as i64) < self.scroll + VIEW_ROWS + 2 {
            self.append_section(rng);
        }
        while self.base < self.scroll - 1 {
            self.rows.pop_front();
            self.base += 1;
        }
        let scroll = self.scroll;
        self.powerups.retain(|p| p.1 >= scroll);
    }

    pub(crate) fn is_wall(&self, col: i32, row: i64) -> bool {
        if !(0..COLS).contains(&col) || row < self.base {
            return true;
        }
        match self.rows.get((row - self.base) as usize) {
            Some(bits) => bits & (1 << col) != 0,
            None => true,
        }
    }

    fn set_wall(&mut self, col: i32, row: i64, wall: bool) {
        if row < self.base {
            return;
        }
        if let Some(bits) = self.rows.get_mut((row - self.base) as usize) {
            if wall {
                *bits |= 1 << col;
            } else {
                *bits &= !(1 << col);
            }
        }
    }

    fn passable(&self, col: i32, row: i64) -> bool {
        row >= self.scroll && !self.is_wall(col, row)
    }

    fn section_of(row: i64) -> i64 {
        (row - 1).max(0) / SECTION_ROWS
    }

    /// The block grid of the rows currently held, for connectivity checks.
    pub fn held_grid(&self) -> BlockGrid {
        let mut g = BlockGrid::filled(COLS as usize, self.rows.len());
        for (y, bits) in self.rows.iter().enumerate() {
            for x in 0..COLS {
                g.set_wall(x, y as i32, bits & (1 << x) != 0);
            }
        }
        g
    }

    /// Each player's (column, world row).
    pub fn digger_positions(&self) -> [(i32, i64); 2] {
        self.diggers.map(|d| (d.col, d.row))
    }

    pub fn base_row(&self) -> i64 {
        self.base
    }

    fn move_digger(&mut self, i: usize, stick: Stick) {
        let (dx, dy) = (stick.dx(), stick.dy());
        let d = self.diggers[i];
        if dx == 0 && dy == 0 {
            self.diggers[i].move_timer = 0;
            return;
        }
        // Vertical input wins when both axes are held.
        let step = if dy != 0 { (0, dy) } else { (dx, 0) };
        self.diggers[i].facing = step;
        if d.move_timer > 0 {
            self.diggers[i].move_timer -= 1;
            return;
        }
        let (nc, nr) = (d.col + step.0, d.row + step.1 as i64);
        if self.passable(nc, nr) {
            let d = &mut self.diggers[i];
            d.col = nc;
            d.row = nr;
            d.move_timer = MOVE_PERIOD - 1;
        }
    }

    fn make_break(&mut self, i: usize, stick: Stick) {
        let d = self.diggers[i];
        if d.fire_timer > 0 {
            self.diggers[i].fire_timer -= 1;
        }
        if !stick.fire || d.fire_timer > 0 || d.charges == 0 {
            return;
        }
        let (tc, tr) = (d.col + d.facing.0, d.row + d.facing.1 as i64);
        // The outer columns are permanent.
        if tc <= 0 || tc >= COLS - 1 || tr < self.scroll {
            return;
        }
        if self.is_wall(tc, tr) {
            self.set_wall(tc, tr, false);
        } else {
            let occupied = self.diggers.iter().any(|o| (o.col, o.row) == (tc, tr))
                || self.powerups.contains(&(tc, tr));
            if occupied {
                return;
            }
            self.set_wall(tc, tr, true);
        }
        let d = &mut self.diggers[i];
        d.charges -= 1;
        d.fire_timer = FIRE_COOLDOWN;
    }

    fn collect(&mut self, i: usize) {
        let pos = (self.diggers[i].col, self.diggers[i].row);
        if let Some(k) = self.powerups.iter().position(|&p| p == pos) {
            self.powerups.swap_remove(k);
            let d = &mut self.diggers[i];
            d.charges = (d.charges + 1).min(MAX_CHARGES);
        }
    }

    fn trapped(&self, i: usize) -> bool {
        let d = self.diggers[i];
        d.charges == 0
            && [(1, 0), (-1, 0), (0, 1), (0, -1)]
                .iter()
                .all(|&(dx, dy)| !self.passable(d.col + dx, d.row + dy))
    }

    pub fn sections_passed(&self) -> u32 {
        self.sections_passed
    }
}

impl Dynamics for Entombed {
    fn players(&self) -> usize {
        2
    }

    fn step(&mut self, sticks: &[Stick], rng: &mut GameRng, out: &mut StepOutcome) {
        self.frame += 1;
        self.stage_frame += 1;
        for (i, &s) in sticks.iter().enumerate().take(2) {
            self.make_break(i, s);
            self.move_digger(i, s);
            self.collect(i);
        }

        let deepest = self
            .diggers
            .iter()
            .map(|d| Self::section_of(d.row))
            .max()
            .unwrap_or(0);
        while self.reached_section < deepest {
            self.reached_section += 1;
            self.sections_passed += 1;
            out.events.push(Event::SectionPassed);
            if self.scoring == EntombedScoring::Cooperative {
                out.rewards[0] += 1;
                out.rewards[1] += 1;
            }
        }

        if self.stage_frame % SCROLL_PERIOD == 0 {
            self.scroll += 1;
            self.ensure_rows(rng);
        }

        let lost: Vec<usize> = (0..2)
            .filter(|&i| self.diggers[i].row < self.scroll || self.trapped(i))
            .collect();
        if !lost.is_empty() {
            for &i in &lost {
                self.diggers[i].lives -= 1;
                out.events.push(Event::LifeLost { player: i });
                if self.scoring == EntombedScoring::Competitive {
                    out.rewards[i] -= 1;
                    out.rewards[1 - i] += 1;
                }
            }
            if self.diggers.iter().any(|d| d.lives < 0) {
                out.terminal = Some(TerminalCause::Lives);
                return;
            }
            self.start_stage(rng);
            out.events.push(Event::StageRestart);
            if self.scoring == EntombedScoring::Cooperative {
                out.rewards[0] += 1;
                out.rewards[1] += 1;
            }
        }

        if self.frame >= FRAME_LIMIT {
            out.terminal = Some(TerminalCause::Time);
        }
    }

    fn render(&self, screen: &mut Screen) {
        screen.clear(BACKGROUND);
        let stage = (self.sections_passed / SECTIONS_PER_STAGE) as usize;
        let wall = WALL_COLORS[stage % WALL_COLORS.len()];
        for vy in 0..VIEW_ROWS {
            let row = self.scroll + vy;
            for col in 0..COLS {
                if self.is_wall(col, row) {
                    screen.fill_rect(
                        ORIGIN_X + col * BLOCK_W,
                        ORIGIN_Y + vy as i32 * BLOCK_H,
                        BLOCK_W,
                        BLOCK_H,
                        wall,
                    );
                }
            }
        }
        for &(col, row) in &self.powerups {
            let vy = row - self.scroll;
            if (0..VIEW_ROWS).contains(&vy) {
                screen.fill_rect(
                    ORIGIN_X + col * BLOCK_W + 2,
                    ORIGIN_Y + vy as i32 * BLOCK_H + 2,
                    4,
                    4,
                    POWERUP,
                );
            }
        }
        for (i, d) in self.diggers.iter().enumerate() {
            let vy = d.row - self.scroll;
            if (0..VIEW_ROWS).contains(&vy) {
                screen.fill_rect(
                    ORIGIN_X + d.col * BLOCK_W + 1,
                    ORIGIN_Y + vy as i32 * BLOCK_H + 1,
                    6,
                    6,
                    PLAYER_COLORS[i],
                );
            }
            let hud_x = if i == 0 { 24 } else { 136 };
            screen.draw_number(hud_x, 4, d.lives.max(0) as u32, 2, PLAYER_COLORS[i]);
            screen.draw_number(hud_x + 14, 4, d.charges as u32, 2, POWERUP);
        }
        screen.draw_number(88, 4, self.sections_passed, 2, wall);
    }

    fn lives(&self) -> Vec<i32> {
        self.diggers.iter().map(|d| d.lives.max(-1)).collect()
    }

    /// Player positions relative to the top of the view, charges, the scroll
    /// phase, then three bytes of wall bits per visible row.
    fn ram(&self) -> Vec<u8> {
        let mut ram = Vec::with_capacity(7 + 3 * VIEW_ROWS as usize);
        for d in &self.diggers {
            ram.push(d.col as u8);
            ram.push((d.row - self.scroll).clamp(0, 255) as u8);
            ram.push(d.charges);
        }
        ram.push((self.stage_frame % SCROLL_PERIOD) as u8);
        for vy in 0..VIEW_ROWS {
            let row = self.scroll + vy;
            let bits = (0..COLS).fold(0u32, |acc, c| acc | ((self.is_wall(c, row) as u32) << c));
            ram.extend_from_slice(&bits.to_le_bytes()[..3]);
        }
        ram
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::rng_from_seed;

    #[test]
    fn fresh_stage_is_connected_from_both_starts() {
        for seed in 0..50 {
            let mut rng = rng_from_seed(seed);
            let g = Entombed::new(ModeId(2), &mut rng).unwrap();
            let grid = g.held_grid();
            let bottom = grid.height() as i32 - 2;
            for d in &g.diggers {
                let start = (d.col, (d.row - g.base_row()) as i32);
                assert!(!grid.is_wall(start.0, start.1));
                // Every cell of the deepest generated row is reachable.
                for cx in 0..CELL_COLS as i32 {
                    assert!(grid.reachable(start, (2 * cx + 1, bottom)), "seed {seed}");
                }
            }
        }
    }

    #[test]
    fn idle_players_are_crushed_and_restart() {
        let mut rng = rng_from_seed(4);
        let mut g = Entombed::new(ModeId(3), &mut rng).unwrap();
        let mut out = StepOutcome::default();
        let mut restarts = 0;
        let mut deaths = 0;
        let mut totals = [0, 0];
        loop {
            out.reset(2);
            g.step(&[Stick::default(); 2], &mut rng, &mut out);
            totals[0] += out.rewards[0];
            totals[1] += out.rewards[1];
            assert_eq!(totals[0], totals[1]);
            restarts += out
                .events
                .iter()
                .filter(|e| **e == Event::StageRestart)
                .count();
            deaths += out
                .events
                .iter()
                .filter(|e| matches!(e, Event::LifeLost { .. }))
                .count();
            if out.terminal.is_some() {
                break;
            }
        }
        // Both idle players die together each stage: three deaths each.
        assert_eq!(deaths, 2 * (INITIAL_LIVES as usize + 1));
        assert_eq!(restarts, INITIAL_LIVES as usize);
        assert_eq!(totals[0], INITIAL_LIVES);
        assert_eq!(out.terminal, Some(TerminalCause::Lives));
    }

    #[test]
    fn make_break_toggles_walls_and_spends_charges() {
        let mut rng = rng_from_seed(8);
        let mut g = Entombed::new(ModeId(2), &mut rng).unwrap();
        g.diggers[0].charges = 2;
        let (c, r) = (g.diggers[0].col, g.diggers[0].row);
        let target = (c, r + 1);
        let was_wall = g.is_wall(target.0, target.1);
        let fire = Stick {
            fire: true,
            ..Default::default()
        };
        let mut out = StepOutcome::default();
        out.reset(2);
        g.step(&[fire, Stick::default()], &mut rng, &mut out);
        if !g.powerups.contains(&target) {
            assert_ne!(g.is_wall(target.0, target.1), was_wall);
            assert_eq!(g.diggers[0].charges, 1);
        }
    }

    #[test]
    fn descending_a_section_pays_both_in_coop() {
        let mut rng = rng_from_seed(0);
        let mut g = Entombed::new(ModeId(3), &mut rng).unwrap();
        // Teleport player 0 just past the first section border.
        g.diggers[0].row = SECTION_ROWS + 1;
        let mut out = StepOutcome::default();
        out.reset(2);
        g.step(&[Stick::default(); 2], &mut rng, &mut out);
        assert_eq!(out.rewards, vec![1, 1]);
        assert!(out.has(Event::SectionPassed));
    }
}
