//! Perfect-maze carving on a block grid.
//!
//! A maze of `cols × rows` cells occupies a `(2·cols+1) × (2·rows+1)` block
//! grid: cells sit at odd block coordinates, and the blocks between them are
//! walls unless carved into passages.

use std::collections::VecDeque;

use rand::seq::SliceRandom;
use rand::Rng;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BlockGrid {
    width: usize,
    height: usize,
    wall: Vec<bool>,
}

impl BlockGrid {
    pub fn filled(width: usize, height: usize) -> Self {
        BlockGrid {
            width,
            height,
            wall: vec![true; width * height],
        }
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn in_bounds(&self, x: i32, y: i32) -> bool {
        x >= 0 && y >= 0 && (x as usize) < self.width && (y as usize) < self.height
    }

    /// Out-of-bounds blocks count as walls.
    pub fn is_wall(&self, x: i32, y: i32) -> bool {
        !self.in_bounds(x, y) || self.wall[y as usize * self.width + x as usize]
    }

    pub fn set_wall(&mut self, x: i32, y: i32, wall: bool) {
        if self.in_bounds(x, y) {
            self.wall[y as usize * self.width + x as usize] = wall;
        }
    }

    /// Open blocks reachable from `start` through 4-neighbour moves.
    pub fn flood_fill(&self, start: (i32, i32)) -> Vec<bool> {
        let mut seen = vec![false; self.width * self.height];
        if self.is_wall(start.0, start.1) {
            return seen;
        }
        let mut queue = VecDeque::from([start]);
        seen[start.1 as usize * self.width + start.0 as usize] = true;
        while let Some((x, y)) = queue.pop_front() {
            for (dx, dy) in [(1, 0), (-1, 0), (0, 1), (0, -1)] {
                let (nx, ny) = (x + dx, y + dy);
                if self.is_wall(nx, ny) {
                    continue;
                }
                let i = ny as usize * self.width + nx as usize;
                if !seen[i] {
                    seen[i] = true;
                    queue.push_back((nx, ny));
                }
            }
        }
        seen
    }

    pub fn reachable(&self, from: (i32, i32), to: (i32, i32)) -> bool {
        if !self.in_bounds(to.0, to.1) {
            return false;
        }
        self.flood_fill(from)[to.1 as usize * self.width + to.0 as usize]
    }

    /// True when every open block is reachable from every other.
    pub fn is_connected(&self) -> bool {
        let first = (0..self.height as i32)
            .flat_map(|y| (0..self.width as i32).map(move |x| (x, y)))
            .find(|&(x, y)| !self.is_wall(x, y));
        let Some(start) = first else { return true };
        let seen = self.flood_fill(start);
        self.wall.iter().zip(&seen).all(|(&w, &s)| w || s)
    }
}

/// Carves a perfect maze of `cols × rows` cells by randomized depth-first
/// search (iterative backtracker) starting from a random cell.
pub fn carve_perfect_maze<R: Rng>(cols: usize, rows: usize, rng: &mut R) -> BlockGrid {
    let mut grid = BlockGrid::filled(2 * cols + 1, 2 * rows + 1);
    let mut visited = vec![false; cols * rows];
    let start = (rng.gen_range(0..cols), rng.gen_range(0..rows));
    let mut stack = vec![start];
    visited[start.1 * cols + start.0] = true;
    grid.set_wall(2 * start.0 as i32 + 1, 2 * start.1 as i32 + 1, false);

    let mut dirs = [(1i32, 0i32), (-1, 0), (0, 1), (0, -1)];
    while let Some(&(cx, cy)) = stack.last() {
        dirs.shuffle(rng);
        let next = dirs.iter().find_map(|&(dx, dy)| {
            let nx = cx as i32 + dx;
            let ny = cy as i32 + dy;
            let inside = nx >= 0 && ny >= 0 && (nx as usize) < cols && (ny as usize) < rows;
            (inside && !visited[ny as usize * cols + nx as usize]).then_some((nx, ny, dx, dy))
        });
        match next {
            Some((nx, ny, dx, dy)) => {
                visited[ny as usize * cols + nx as usize] = true;
                let (bx, by) = (2 * cx as i32 + 1, 2 * cy as i32 + 1);
                grid.set_wall(bx + dx, by + dy, false);
                grid.set_wall(bx + 2 * dx, by + 2 * dy, false);
                stack.push((nx as usize, ny as usize));
            }
            None => {
                stack.pop();
            }
        }
    }
    grid
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::rng_from_seed;

    #[test]
    fn carved_maze_is_perfect() {
        for seed in 0..50 {
            let mut rng = rng_from_seed(seed);
            let g = carve_perfect_maze(15, 10, &mut rng);
            assert!(g.is_connected());
            // A spanning tree over 150 cells carves exactly 149 passages.
            let open = (0..g.height() as i32)
                .flat_map(|y| (0..g.width() as i32).map(move |x| (x, y)))
                .filter(|&(x, y)| !g.is_wall(x, y))
                .count();
            assert_eq!(open, 150 + 149);
            assert!(g.reachable((1, 1), (29, 19)));
        }
    }

    #[test]
    fn seeds_change_layout() {
        let a = carve_perfect_maze(15, 10, &mut rng_from_seed(1));
        let b = carve_perfect_maze(15, 10, &mut rng_from_seed(2));
        assert_ne!(a, b);
    }
}
