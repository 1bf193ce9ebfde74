//! Maze Craze: two cops race through a random perfect maze to the exit on
//! the right edge. Optional robbers wander the maze; depending on the game
//! type they either kill on contact or must all be caught before the exit
//! counts. The visibility setting hides walls outside a radius around the
//! players, or hides them entirely.

use rand::Rng;

use super::maze::{carve_perfect_maze, BlockGrid};
use super::{Dynamics, Event, StepOutcome, TerminalCause};
use crate::action::{Action, Stick};
use crate::error::EnvError;
use crate::modes::{MazeCrazeGame, MazeCrazeMode, ModeId, Visibility};
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

pub const CELL_COLS: usize = 15;
pub const CELL_ROWS: usize = 10;
pub const TIME_LIMIT: u32 = 7_200;
pub const ROBBERS: usize = 3;
pub const MAX_FAKE_WALLS: u8 = 3;

pub const BLOCK_W: i32 = 5;
pub const BLOCK_H: i32 = 9;
pub const ORIGIN_X: i32 = 2;
pub const ORIGIN_Y: i32 = 18;

pub const BACKGROUND: Rgb = Rgb(24, 26, 167);
pub const WALL_COLOR: Rgb = Rgb(200, 200, 120);
pub const PLAYER_COLORS: [Rgb; 2] = [Rgb(252, 144, 144), Rgb(132, 252, 212)];
const ROBBER_COLOR: Rgb = Rgb(236, 236, 236);
const EXIT_COLOR: Rgb = Rgb(252, 188, 116);

const MOVE_PERIOD: u8 = 4;
const ROBBER_PERIOD: u8 = 10;
const BLOCK_COLS: i32 = 2 * CELL_COLS as i32 + 1;
const BLOCK_ROWS: i32 = 2 * CELL_ROWS as i32 + 1;
const DIRS: [(i32, i32); 4] = [(1, 0), (-1, 0), (0, 1), (0, -1)];

fn cell_block(cx: i32, cy: i32) -> (i32, i32) {
    (2 * cx + 1, 2 * cy + 1)
}

/// The exit block, cut into the right border beside the middle cell row.
pub fn exit_block() -> (i32, i32) {
    (BLOCK_COLS - 1, 2 * (CELL_ROWS as i32 / 2) + 1)
}

pub fn start_blocks() -> [(i32, i32); 2] {
    [cell_block(0, 0), cell_block(0, CELL_ROWS as i32 - 1)]
}

#[derive(Debug, Clone, Copy)]
struct Cop {
    pos: (i32, i32),
    move_timer: u8,
    fire_held: bool,
    fakes_left: u8,
    /// Bit `r` set once robber `r` has been caught.
    caught: u8,
}

#[derive(Debug, Clone, Copy)]
struct Robber {
    pos: (i32, i32),
    heading: (i32, i32),
    timer: u8,
}

#[derive(Debug, Clone)]
pub struct MazeCraze {
    mode: MazeCrazeMode,
    grid: BlockGrid,
    cops: [Cop; 2],
    robbers: Vec<Robber>,
    /// Fake walls: drawn like walls, walkable.
    fakes: Vec<(i32, i32)>,
    frame: u32,
}

impl MazeCraze {
    pub fn new(mode: ModeId, rng: &mut GameRng) -> Result<Self, EnvError> {
        let mode = MazeCrazeMode::decode(mode)?;
        let mut grid = carve_perfect_maze(CELL_COLS, CELL_ROWS, rng);
        let (ex, ey) = exit_block();
        grid.set_wall(ex, ey, false);
        let cop = |pos| Cop {
            pos,
            move_timer: 0,
            fire_held: false,
            fakes_left: if mode.game == MazeCrazeGame::Capture {
                MAX_FAKE_WALLS
            } else {
                0
            },
            caught: 0,
        };
        let starts = start_blocks();
        let robbers = if mode.game == MazeCrazeGame::Race {
            Vec::new()
        } else {
            (0..ROBBERS)
                .map(|_| {
                    // Keep robbers away from the starting column.
                    let cx = rng.gen_range(CELL_COLS as i32 / 3..CELL_COLS as i32);
                    let cy = rng.gen_range(0..CELL_ROWS as i32);
                    Robber {
                        pos: cell_block(cx, cy),
                        heading: (0, 0),
                        timer: ROBBER_PERIOD,
                    }
                })
                .collect()
        };
        Ok(MazeCraze {
            mode,
            grid,
            cops: [cop(starts[0]), cop(starts[1])],
            robbers,
            fakes: Vec::new(),
            frame: 0,
        })
    }

    pub fn grid(&self) -> &BlockGrid {
        &self.grid
    }

    pub fn mode(&self) -> MazeCrazeMode {
        self.mode
    }

    pub fn player_block(&self, i: usize) -> (i32, i32) {
        self.cops[i].pos
    }

    fn move_cop(&mut self, i: usize, stick: Stick) {
        let (dx, dy) = (stick.dx(), stick.dy());
        let cop = &mut self.cops[i];
        if dx == 0 && dy == 0 {
            cop.move_timer = 0;
            return;
        }
        if cop.move_timer > 0 {
            cop.move_timer -= 1;
            return;
        }
        let step = if dy != 0 { (0, dy) } else { (dx, 0) };
        let next = (cop.pos.0 + step.0, cop.pos.1 + step.1);
        if !self.grid.is_wall(next.0, next.1) {
            cop.pos = next;
            cop.move_timer = MOVE_PERIOD - 1;
        }
    }

    fn drop_fake(&mut self, i: usize, stick: Stick) {
        let cop = &mut self.cops[i];
        let pressed = stick.fire && !cop.fire_held;
        cop.fire_held = stick.fire;
        if !pressed || cop.fakes_left == 0 || self.fakes.contains(&cop.pos) {
            return;
        }
        cop.fakes_left -= 1;
        self.fakes.push(cop.pos);
    }

    fn move_robbers(&mut self, rng: &mut GameRng) {
        for r in &mut self.robbers {
            r.timer -= 1;
            if r.timer > 0 {
                continue;
            }
            r.timer = ROBBER_PERIOD;
            let at_cell = r.pos.0 % 2 == 1 && r.pos.1 % 2 == 1;
            if at_cell {
                let open: Vec<(i32, i32)> = DIRS
                    .iter()
                    .copied()
                    .filter(|&(dx, dy)| !self.grid.is_wall(r.pos.0 + dx, r.pos.1 + dy))
                    // The exit is for cops only.
                    .filter(|&(dx, dy)| (r.pos.0 + dx, r.pos.1 + dy) != exit_block())
                    .collect();
                let forward: Vec<(i32, i32)> = open
                    .iter()
                    .copied()
                    .filter(|&d| d != (-r.heading.0, -r.heading.1))
                    .collect();
                let pool = if forward.is_empty() { &open } else { &forward };
                if pool.is_empty() {
                    continue;
                }
                r.heading = pool[rng.gen_range(0..pool.len())];
            }
            r.pos = (r.pos.0 + r.heading.0, r.pos.1 + r.heading.1);
        }
    }

    fn visible(&self, x: i32, y: i32) -> bool {
        match self.mode.visibility_rule() {
            Visibility::Full => true,
            Visibility::Hidden => false,
            Visibility::Radius(r) => {
                let reach = 2 * r as i32;
                self.cops
                    .iter()
                    .any(|c| (c.pos.0 - x).abs() <= reach && (c.pos.1 - y).abs() <= reach)
            }
        }
    }

    fn all_caught() -> u8 {
        (1u8 << ROBBERS) - 1
    }
}

impl Dynamics for MazeCraze {
    fn players(&self) -> usize {
        2
    }

    fn step(&mut self, sticks: &[Stick], rng: &mut GameRng, out: &mut StepOutcome) {
        self.frame += 1;
        for (i, &s) in sticks.iter().enumerate().take(2) {
            if self.mode.game == MazeCrazeGame::Capture {
                self.drop_fake(i, s);
            }
            self.move_cop(i, s);
        }
        self.move_robbers(rng);

        match self.mode.game {
            MazeCrazeGame::Race => {}
            MazeCrazeGame::Robbers => {
                let dead: Vec<usize> = (0..2)
                    .filter(|&i| self.robbers.iter().any(|r| r.pos == self.cops[i].pos))
                    .collect();
                if !dead.is_empty() {
                    for &i in &dead {
                        out.rewards[i] -= 1;
                        out.rewards[1 - i] += 1;
                        out.events.push(Event::LifeLost { player: i });
                    }
                    out.terminal = Some(TerminalCause::Lives);
                    return;
                }
            }
            MazeCrazeGame::Capture => {
                for cop in &mut self.cops {
                    for (k, r) in self.robbers.iter().enumerate() {
                        if r.pos == cop.pos && cop.caught & (1 << k) == 0 {
                            cop.caught |= 1 << k;
                            out.events.push(Event::Progress);
                        }
                    }
                }
            }
        }

        let exit = exit_block();
        let escaped: Vec<usize> = (0..2)
            .filter(|&i| {
                self.cops[i].pos == exit
                    && (self.mode.game != MazeCrazeGame::Capture
                        || self.cops[i].caught == Self::all_caught())
            })
            .collect();
        if escaped.len() == 1 {
            let w = escaped[0];
            out.rewards[w] += 1;
            out.rewards[1 - w] -= 1;
            out.events.push(Event::Point { player: w });
        }
        if !escaped.is_empty() {
            out.terminal = Some(TerminalCause::ScoreLimit);
            return;
        }
        if self.frame >= TIME_LIMIT {
            out.terminal = Some(TerminalCause::Time);
        }
    }

    fn render(&self, screen: &mut Screen) {
        screen.clear(BACKGROUND);
        let block = |screen: &mut Screen, (x, y): (i32, i32), inset: i32, c: Rgb| {
            screen.fill_rect(
                ORIGIN_X + x * BLOCK_W + inset,
                ORIGIN_Y + y * BLOCK_H + inset,
                BLOCK_W - 2 * inset,
                BLOCK_H - 2 * inset,
                c,
            )
        };
        for y in 0..BLOCK_ROWS {
            for x in 0..BLOCK_COLS {
                let solid = self.grid.is_wall(x, y) || self.fakes.contains(&(x, y));
                if solid && self.visible(x, y) {
                    block(screen, (x, y), 0, WALL_COLOR);
                }
            }
        }
        block(screen, exit_block(), 1, EXIT_COLOR);
        for r in &self.robbers {
            block(screen, r.pos, 1, ROBBER_COLOR);
        }
        for (i, c) in self.cops.iter().enumerate() {
            block(screen, c.pos, 1, PLAYER_COLORS[i]);
        }
        let secs = TIME_LIMIT.saturating_sub(self.frame) / 60;
        screen.draw_number(90, 4, secs, 2, ROBBER_COLOR);
    }

    fn lives(&self) -> Vec<i32> {
        vec![0, 0]
    }

    /// Cop positions, capture masks and fake-wall stock, then robber positions.
    fn ram(&self) -> Vec<u8> {
        let mut ram = Vec::with_capacity(8 + 2 * ROBBERS);
        for c in &self.cops {
            ram.extend([c.pos.0 as u8, c.pos.1 as u8, c.caught, c.fakes_left]);
        }
        for k in 0..ROBBERS {
            let p = self.robbers.get(k).map_or((0, 0), |r| r.pos);
            ram.extend([p.0 as u8, p.1 as u8]);
        }
        ram
    }
}
