//! Combat: two tanks (optionally in a maze, with ricocheting or guided shells,
//! optionally invisible) or two planes (bi-planes or faster jets, with straight
//! or guided missiles). A hit pays +1 to the shooter and -1 to the victim, who
//! respawns. Matches last 3,600 frames.

use super::{clamp_u8, Dynamics, Event, StepOutcome, TerminalCause, FP};
use crate::action::{Action, Stick};
use crate::error::EnvError;
use crate::modes::{CombatFlags, CombatStyle, ModeId};
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

pub const MATCH_FRAMES: u32 = 3_600;

const LEFT: i32 = 4;
const RIGHT: i32 = 156;
const TOP: i32 = 28;
const BOTTOM: i32 = 200;
const HALF: i32 = 4;
const TURN_PERIOD: u8 = 6;
const SHELL_SPEED: i32 = 3;
const SHELL_TTL: u16 = 90;

/// Unit direction vectors for the 16 headings, scaled by [`FP`]; heading 0
/// points right and headings advance counter-clockwise on screen.
const DIRS: [(i32, i32); 16] = [
    (256, 0),
    (237, -98),
    (181, -181),
    (98, -237),
    (0, -256),
    (-98, -237),
    (-181, -181),
    (-237, -98),
    (-256, 0),
    (-237, 98),
    (-181, 181),
    (-98, 237),
    (0, 256),
    (98, 237),
    (181, 181),
    (237, 98),
];

const BACKGROUND: Rgb = Rgb(162, 134, 56);
const WALL: Rgb = Rgb(66, 72, 200);
pub const TANK_COLORS: [Rgb; 2] = [Rgb(240, 128, 128), Rgb(84, 160, 197)];

/// Heading after bouncing off a vertical surface.
pub fn reflect_x(h: u8) -> u8 {
    (8 + 16 - h) % 16
}

/// Heading after bouncing off a horizontal surface.
pub fn reflect_y(h: u8) -> u8 {
    (16 - h) % 16
}

#[derive(Debug, Clone, Copy)]
struct Wall {
    x: i32,
    y: i32,
    w: i32,
    h: i32,
}

impl Wall {
    fn contains(&self, px: i32, py: i32) -> bool {
        px >= self.x && px < self.x + self.w && py >= self.y && py < self.y + self.h
    }

    fn overlaps_box(&self, cx: i32, cy: i32) -> bool {
        cx - HALF < self.x + self.w
            && cx + HALF > self.x
            && cy - HALF < self.y + self.h
            && cy + HALF > self.y
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) struct Shell {
    pub x: i32,
    pub y: i32,
    pub heading: u8,
    pub ttl: u16,
    /// Set on frames where the shell ricocheted.
    pub bounced: bool,
}

#[derive(Debug, Clone)]
pub(crate) struct Vehicle {
    pub x: i32,
    pub y: i32,
    pub heading: u8,
    turn_timer: u8,
    spawn: (i32, i32, u8),
    pub shell: Option<Shell>,
    /// Fired on the current frame.
    pub fired: bool,
    /// Ran into a wall, obstacle or the other vehicle on the current frame.
    pub collided: bool,
}

#[derive(Debug, Clone)]
pub struct Combat {
    flags: CombatFlags,
    walls: Vec<Wall>,
    pub(crate) vehicles: [Vehicle; 2],
    scores: [u32; 2],
    frame: u32,
}

impl Combat {
    pub fn new(mode: ModeId, _rng: &mut GameRng) -> Result<Self, EnvError> {
        let flags = CombatFlags::decode(mode)?;
        let mut walls = Vec::new();
        if let CombatStyle::Tank { maze, .. } = flags.style {
            walls.extend([
                Wall {
                    x: 0,
                    y: TOP - 4,
                    w: 160,
                    h: 4,
                },
                Wall {
                    x: 0,
                    y: BOTTOM,
                    w: 160,
                    h: 4,
                },
                Wall {
                    x: 0,
                    y: TOP - 4,
                    w: LEFT,
                    h: BOTTOM - TOP + 8,
                },
                Wall {
                    x: RIGHT,
                    y: TOP - 4,
                    w: 160 - RIGHT,
                    h: BOTTOM - TOP + 8,
                },
            ]);
            if maze {
                walls.extend([
                    Wall {
                        x: 76,
                        y: 94,
                        w: 8,
                        h: 40,
                    },
                    Wall {
                        x: 36,
                        y: 56,
                        w: 8,
                        h: 28,
                    },
                    Wall {
                        x: 116,
                        y: 56,
                        w: 8,
                        h: 28,
                    },
                    Wall {
                        x: 36,
                        y: 144,
                        w: 8,
                        h: 28,
                    },
                    Wall {
                        x: 116,
                        y: 144,
                        w: 8,
                        h: 28,
                    },
                    Wall {
                        x: 64,
                        y: 46,
                        w: 32,
                        h: 6,
                    },
                    Wall {
                        x: 64,
                        y: 176,
                        w: 32,
                        h: 6,
                    },
                ]);
            }
        }
        let mid = (TOP + BOTTOM) / 2;
        let vehicle = |x: i32, heading: u8| Vehicle {
            x: x * FP,
            y: mid * FP,
            heading,
            turn_timer: 0,
            spawn: (x * FP, mid * FP, heading),
            shell: None,
            fired: false,
            collided: false,
        };
        Ok(Combat {
            flags,
            walls,
            vehicles: [vehicle(16, 0), vehicle(144, 8)],
            scores: [0; 2],
            frame: 0,
        })
    }

    fn speed_num_den(&self) -> (i32, i32) {
        match self.flags.style {
            CombatStyle::Tank { .. } => (1, 1),
            CombatStyle::Plane { jet: true, .. } => (2, 1),
            CombatStyle::Plane { jet: false, .. } => (3, 2),
        }
    }

    fn shells_guided(&self) -> bool {
        match self.flags.style {
            CombatStyle::Tank { billiards, .. } => !billiards,
            CombatStyle::Plane { guided, .. } => guided,
        }
    }

    fn ricochet(&self) -> bool {
        matches!(
            self.flags.style,
            CombatStyle::Tank {
                billiards: true,
                ..
            }
        )
    }

    fn invisible(&self) -> bool {
        matches!(
            self.flags.style,
            CombatStyle::Tank {
                invisible: true,
                ..
            }
        )
    }

    fn is_plane(&self) -> bool {
        !self.flags.is_tank()
    }

    fn box_blocked(&self, cx: i32, cy: i32, other: &Vehicle) -> bool {
        let (px, py) = (cx / FP, cy / FP);
        if self.walls.iter().any(|w| w.overlaps_box(px, py)) {
            return true;
        }
        let (ox, oy) = (other.x / FP, other.y / FP);
        (px - ox).abs() < 2 * HALF && (py - oy).abs() < 2 * HALF
    }

    fn point_blocked(&self, x: i32, y: i32) -> bool {
        let (px, py) = (x / FP, y / FP);
        self.walls.iter().any(|w| w.contains(px, py))
    }

    fn drive(&mut self, i: usize, stick: Stick) {
        let plane = self.is_plane();
        let (num, den) = self.speed_num_den();
        let v = &mut self.vehicles[i];
        v.fired = false;
        v.collided = false;

        let turn = stick.dx();
        if turn == 0 {
            v.turn_timer = 0;
        } else if v.turn_timer == 0 {
            // Right turns clockwise, which is decreasing heading.
            v.heading = ((v.heading as i32 - turn).rem_euclid(16)) as u8;
            v.turn_timer = TURN_PERIOD;
        } else {
            v.turn_timer -= 1;
        }

        // Planes always fly forward.
        let throttle = if plane || stick.up {
            1
        } else if stick.down {
            -1
        } else {
            0
        };
        if throttle == 0 {
            return;
        }
        let (dx, dy) = DIRS[v.heading as usize];
        let nx = v.x + throttle * dx * num / den;
        let ny = v.y + throttle * dy * num / den;
        if plane {
            let w = (RIGHT - LEFT) * FP;
            let h = (BOTTOM - TOP) * FP;
            let v = &mut self.vehicles[i];
            v.x = LEFT * FP + (nx - LEFT * FP).rem_euclid(w);
            v.y = TOP * FP + (ny - TOP * FP).rem_euclid(h);
            return;
        }
        let other = self.vehicles[1 - i].clone();
        if self.box_blocked(nx, ny, &other) {
            self.vehicles[i].collided = true;
        } else {
            let v = &mut self.vehicles[i];
            v.x = nx;
            v.y = ny;
        }
    }

    fn fire(&mut self, i: usize, stick: Stick) {
        let v = &mut self.vehicles[i];
        if !stick.fire || v.shell.is_some() {
            return;
        }
        let (dx, dy) = DIRS[v.heading as usize];
        v.shell = Some(Shell {
            x: v.x + dx * (HALF + 1),
            y: v.y + dy * (HALF + 1),
            heading: v.heading,
            ttl: SHELL_TTL,
            bounced: false,
        });
        v.fired = true;
    }

    fn fly_shell(&mut self, i: usize) {
        let guided = self.shells_guided();
        let ricochet = self.ricochet();
        let plane = self.is_plane();
        let owner_heading = self.vehicles[i].heading;
        let Some(mut s) = self.vehicles[i].shell else {
            return;
        };
        s.bounced = false;
        if guided {
            s.heading = owner_heading;
        }
        if s.ttl == 0 {
            self.vehicles[i].shell = None;
            return;
        }
        s.ttl -= 1;

        let outside =
            |x: i32, y: i32| x < LEFT * FP || x >= RIGHT * FP || y < TOP * FP || y >= BOTTOM * FP;
        let (dx, dy) = DIRS[s.heading as usize];
        let nx = s.x + dx * SHELL_SPEED;
        let blocked_x = if plane {
            outside(nx, s.y)
        } else {
            self.point_blocked(nx, s.y)
        };
        if blocked_x {
            if !ricochet {
                self.vehicles[i].shell = None;
                return;
            }
            s.heading = reflect_x(s.heading);
            s.bounced = true;
        } else {
            s.x = nx;
        }
        let ny = s.y + dy * SHELL_SPEED;
        let blocked_y = if plane {
            outside(s.x, ny)
        } else {
            self.point_blocked(s.x, ny)
        };
        if blocked_y {
            if !ricochet {
                self.vehicles[i].shell = None;
                return;
            }
            s.heading = reflect_y(s.heading);
            s.bounced = true;
        } else {
            s.y = ny;
        }
        self.vehicles[i].shell = Some(s);
    }

    fn check_hit(&mut self, shooter: usize, out: &mut StepOutcome) {
        let victim = 1 - shooter;
        let Some(s) = self.vehicles[shooter].shell else {
            return;
        };
        let t = &self.vehicles[victim];
        let (px, py) = (s.x / FP, s.y / FP);
        let (tx, ty) = (t.x / FP, t.y / FP);
        if px >= tx - HALF && px < tx + HALF && py >= ty - HALF && py < ty + HALF {
            out.rewards[shooter] += 1;
            out.rewards[victim] -= 1;
            out.events.push(Event::Point { player: shooter });
            self.scores[shooter] += 1;
            self.vehicles[shooter].shell = None;
            let t = &mut self.vehicles[victim];
            (t.x, t.y, t.heading) = t.spawn;
            t.shell = None;
            t.turn_timer = 0;
        }
    }

    fn vehicle_visible(&self, v: &Vehicle) -> bool {
        !self.invisible() || v.fired || v.collided
    }

    pub fn flags(&self) -> CombatFlags {
        self.flags
    }

    /// Screen pixels covered by vehicle `i`'s sprite when drawn.
    pub(crate) fn sprite_pixels(&self, i: usize) -> Vec<(i32, i32)> {
        let v = &self.vehicles[i];
        let (cx, cy) = (v.x / FP, v.y / FP);
        let mut px = Vec::new();
        for y in cy - 3..cy + 3 {
            for x in cx - 3..cx + 3 {
                px.push((x, y));
            }
        }
        let (dx, dy) = DIRS[v.heading as usize];
        for r in 2..=4 {
            px.push((cx + dx * r / FP, cy + dy * r / FP));
        }
        px
    }
}

impl Dynamics for Combat {
    fn players(&self) -> usize {
        2
    }

    fn step(&mut self, sticks: &[Stick], _rng: &mut GameRng, out: &mut StepOutcome) {
        self.frame += 1;
        for (i, &stick) in sticks.iter().enumerate().take(2) {
            self.drive(i, stick);
        }
        for (i, &stick) in sticks.iter().enumerate().take(2) {
            self.fire(i, stick);
        }
        for i in 0..2 {
            self.fly_shell(i);
            self.check_hit(i, out);
        }
        if self.frame >= MATCH_FRAMES {
            out.terminal = Some(TerminalCause::Time);
        }
    }

    fn render(&self, screen: &mut Screen) {
        screen.clear(BACKGROUND);
        for w in &self.walls {
            screen.fill_rect(w.x, w.y, w.w, w.h, WALL);
        }
        screen.draw_number(48, 6, self.scores[0], 2, TANK_COLORS[0]);
        screen.draw_number(128, 6, self.scores[1], 2, TANK_COLORS[1]);
        for (i, v) in self.vehicles.iter().enumerate() {
            if self.vehicle_visible(v) {
                for (x, y) in self.sprite_pixels(i) {
                    screen.set_pixel(x, y, TANK_COLORS[i]);
                }
            }
        }
        for (i, v) in self.vehicles.iter().enumerate() {
            if let Some(s) = v.shell {
                screen.fill_rect(s.x / FP, s.y / FP, 1, 2, TANK_COLORS[i]);
            }
        }
    }

    fn lives(&self) -> Vec<i32> {
        vec![0, 0]
    }

    fn ram(&self) -> Vec<u8> {
        let mut ram = Vec::with_capacity(12);
        for v in &self.vehicles {
            ram.push(clamp_u8(v.x / FP));
            ram.push(clamp_u8(v.y / FP));
            ram.push(v.heading * 16);
        }
        for v in &self.vehicles {
            match v.shell {
                Some(s) => ram.extend([clamp_u8(s.x / FP), clamp_u8(s.y / FP), 255]),
                None => ram.extend([0, 0, 0]),
            }
        }
        ram
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::{rng_from_seed, Rng};

    fn random_stick(rng: &mut GameRng) -> Stick {
        let a = MINIMAL_ACTIONS[rng.gen_range(0..MINIMAL_ACTIONS.len())];
        Stick::decode(a, MINIMAL_ACTIONS)
    }

    #[test]
    fn reflections_are_involutions_and_mirror_vectors() {
        for h in 0..16u8 {
            assert_eq!(reflect_x(reflect_x(h)), h);
            assert_eq!(reflect_y(reflect_y(h)), h);
            let (dx, dy) = DIRS[h as usize];
            assert_eq!(DIRS[reflect_x(h) as usize], (-dx, dy));
            assert_eq!(DIRS[reflect_y(h) as usize], (dx, -dy));
        }
    }

    #[test]
    fn idle_match_runs_full_length() {
        let mut rng = rng_from_seed(0);
        let mut g = Combat::new(ModeId(1), &mut rng).unwrap();
        let mut out = StepOutcome::default();
        let mut frames = 0;
        loop {
            out.reset(2);
            g.step(&[Stick::default(); 2], &mut rng, &mut out);
            frames += 1;
            assert_eq!(out.rewards, vec![0, 0]);
            if out.terminal.is_some() {
                break;
            }
        }
        assert_eq!(frames, MATCH_FRAMES);
        assert_eq!(out.terminal, Some(TerminalCause::Time));
    }

    #[test]
    fn facing_shot_scores() {
        let mut rng = rng_from_seed(0);
        let mut g = Combat::new(ModeId(1), &mut rng).unwrap();
        let fire = Stick {
            fire: true,
            ..Default::default()
        };
        let mut out = StepOutcome::default();
        let mut total = [0, 0];
        for _ in 0..100 {
            out.reset(2);
            g.step(&[fire, Stick::default()], &mut rng, &mut out);
            total[0] += out.rewards[0];
            total[1] += out.rewards[1];
        }
        assert!(total[0] >= 1);
        assert_eq!(total[0], -total[1]);
    }

    /// Heading rules for shells: guided shells follow the shooter and never
    /// bounce; ricocheting shells change heading only on wall contact.
    #[test]
    fn shell_heading_rules() {
        for mode in [1u8, 2, 8, 9, 15, 16, 21, 22] {
            let mut rng = rng_from_seed(mode as u64);
            let mut g = Combat::new(ModeId(mode), &mut rng).unwrap();
            let guided = g.shells_guided();
            let mut out = StepOutcome::default();
            let mut checked = 0;
            for _ in 0..3_000 {
                let sticks = [random_stick(&mut rng), random_stick(&mut rng)];
                let before: Vec<Option<(u8, u8)>> = g
                    .vehicles
                    .iter()
                    .map(|v| v.shell.map(|s| (s.heading, v.heading)))
                    .collect();
                out.reset(2);
                g.step(&sticks, &mut rng, &mut out);
                for i in 0..2 {
                    let (Some((shell_h, tank_h)), Some(s)) = (before[i], g.vehicles[i].shell)
                    else {
                        continue;
                    };
                    checked += 1;
                    let tank_now = g.vehicles[i].heading;
                    if guided {
                        assert!(!s.bounced);
                        assert_eq!(s.heading, tank_now);
                        assert_eq!(s.heading != shell_h, tank_now != tank_h);
                    } else {
                        assert_eq!(s.heading != shell_h, s.bounced, "mode {mode}");
                    }
                }
            }
            assert!(checked > 100, "mode {mode} exercised only {checked} frames");
        }
    }

    #[test]
    fn ricochets_happen_in_billiards_mode() {
        let mut rng = rng_from_seed(9);
        let mut g = Combat::new(ModeId(9), &mut rng).unwrap();
        let mut bounces = 0;
        let mut out = StepOutcome::default();
        for _ in 0..3_000 {
            let sticks = [random_stick(&mut rng), random_stick(&mut rng)];
            out.reset(2);
            g.step(&sticks, &mut rng, &mut out);
            bounces += g
                .vehicles
                .iter()
                .filter(|v| v.shell.is_some_and(|s| s.bounced))
                .count();
        }
        assert!(bounces > 0);
    }

    #[test]
    fn jets_outrun_biplanes() {
        let dist = |mode: u8| {
            let mut rng = rng_from_seed(0);
            let mut g = Combat::new(ModeId(mode), &mut rng).unwrap();
            let x0 = g.vehicles[0].x;
            let mut out = StepOutcome::default();
            for _ in 0..10 {
                out.reset(2);
                g.step(&[Stick::default(); 2], &mut rng, &mut out);
            }
            g.vehicles[0].x - x0
        };
        assert_eq!(dist(15), 15 * FP);
        assert_eq!(dist(21), 20 * FP);
    }

    #[test]
    fn invisible_tanks_differ_only_in_hidden_sprites() {
        let mut rng = rng_from_seed(21);
        let mut seen = rng_from_seed(0);
        let mut hidden = rng_from_seed(0);
        let mut a = Combat::new(ModeId(1), &mut seen).unwrap();
        let mut b = Combat::new(ModeId(10), &mut hidden).unwrap();
        let (mut sa, mut sb) = (Screen::new(), Screen::new());
        let mut out = StepOutcome::default();
        let mut hidden_frames = 0;
        for _ in 0..2_000 {
            let sticks = [random_stick(&mut rng), random_stick(&mut rng)];
            out.reset(2);
            a.step(&sticks, &mut seen, &mut out);
            out.reset(2);
            b.step(&sticks, &mut hidden, &mut out);
            if out.terminal.is_some() {
                break;
            }
            a.render(&mut sa);
            b.render(&mut sb);
            let mut allowed = std::collections::HashSet::new();
            for i in 0..2 {
                let v = &b.vehicles[i];
                if !(v.fired || v.collided) {
                    hidden_frames += 1;
                    allowed.extend(b.sprite_pixels(i));
                }
            }
            for y in 0..Screen::HEIGHT {
                for x in 0..Screen::WIDTH {
                    if sa.pixel(x, y) != sb.pixel(x, y) {
                        assert!(allowed.contains(&(x as i32, y as i32)), "({x},{y})");
                        assert_eq!(sb.pixel(x, y), BACKGROUND);
                    }
                }
            }
        }
        assert!(hidden_frames > 0);
    }
}
