//! Grid laser puzzles.
//!
//! A ray leaves the beam in one of sixteen directions and travels over the
//! grid one lattice step at a time, interacting only with the cells it lands
//! on exactly. Mirrors re-emit it in any direction the player picks, items
//! are collected as it passes over them, and the level is won once every
//! item has been hit and the ray reaches the exit.
//!
//! [`solve_deflektor`] decides levels through reachability graphs over the
//! elements, one per combined phase of the rotating polarizers.
//! [`solve_ray_brute`] enumerates configurations directly and serves as the
//! reference. [`reduce_mindbender`] turns directed connectivity into a level
//! whose polarizers are set by the player.

mod brute;
mod deflektor;
mod mindbender;
mod trace;

use std::fmt;

use thiserror::Error;

pub use brute::{solve_ray_brute, BruteBounds, BruteReport};
pub use deflektor::{build_reachability_graph, solve_deflektor, DeflektorOutcome, PlanStep, ReachArc, ReachGraph};
pub use mindbender::{reduce_mindbender, EdgeColour, MindbenderGadget, MindbenderLevel};
pub use trace::{simulate, trace_ray, RayConfig, SimEnd, Simulation, Trace, TraceEnd};

/// Grid coordinates `(x, y)`; `y` grows downwards.
pub type Pos = (usize, usize);

/// One of the sixteen ray directions, clockwise on screen (y grows
/// downwards) starting from east.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Direction(u8);

const STEPS: [(i32, i32); 16] = [
    (1, 0),
    (2, 1),
    (1, 1),
    (1, 2),
    (0, 1),
    (-1, 2),
    (-1, 1),
    (-2, 1),
    (-1, 0),
    (-2, -1),
    (-1, -1),
    (-1, -2),
    (0, -1),
    (1, -2),
    (1, -1),
    (2, -1),
];

impl Direction {
    pub const EAST: Direction = Direction(0);
    pub const NORTH: Direction = Direction(12);

    /// Panics unless `k < 16`.
    pub fn new(k: u8) -> Self {
        assert!(k < 16, "direction index {k} out of range");
        Direction(k)
    }

    pub fn all() -> impl Iterator<Item = Direction> {
        (0..16).map(Direction)
    }

    pub fn index(self) -> u8 {
        self.0
    }

    pub fn step(self) -> (i32, i32) {
        STEPS[self.0 as usize]
    }

    pub fn opposite(self) -> Direction {
        Direction((self.0 + 8) % 16)
    }

    /// The polarizer orientation that lets this direction through.
    pub fn axis(self) -> u8 {
        self.0 / 2
    }
}

impl fmt::Display for Direction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Combined offset of all rotating polarizers, `0..8`.
pub type Phase = u8;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Cell {
    Empty,
    Opaque,
    Reflecting,
    Mirror,
    Beam,
    Exit,
    Item,
    Mine,
    /// Fixed orientation `0..8`.
    Polarizer(u8),
    /// Orientation `(base + phase) mod 8`.
    Rotating(u8),
    /// Orientation chosen by the player, like a mirror's.
    Orientable,
    /// Pair id, a lowercase letter other than `o`.
    Teleporter(u8),
}

impl Cell {
    pub fn is_polarizer(self) -> bool {
        matches!(self, Cell::Polarizer(_) | Cell::Rotating(_) | Cell::Orientable)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ElementKind {
    Beam,
    Mirror,
    Item,
    Exit,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Element {
    pub kind: ElementKind,
    pub pos: Pos,
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum RayError {
    #[error("invalid ray level: {0}")]
    Invalid(String),
    #[error("no beam or mirror at ({}, {})", .0.0, .0.1)]
    BadOrigin(Pos),
    #[error("{count} {what} exceed the bound of {bound}")]
    TooLarge { what: &'static str, count: usize, bound: usize },
    #[error("player-orientable polarizers are not supported here")]
    OrientablePolarizer,
    #[error("vertex {vertex} has more than two incoming or outgoing arcs")]
    DegreeViolation { vertex: u32 },
    #[error("{0}")]
    BadParams(String),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RayLevel {
    width: usize,
    height: usize,
    cells: Vec<Cell>,
    /// Twin of each teleporter cell, by cell index.
    twins: Vec<Option<usize>>,
}

impl RayLevel {
    /// `cells` is row-major.
    pub fn new(width: usize, height: usize, cells: Vec<Cell>) -> Result<Self, RayError> {
        if width == 0 || height == 0 || cells.len() != width * height {
            return Err(RayError::Invalid(format!("{} cells do not fill a {width}x{height} grid", cells.len())));
        }
        let count = |c: Cell| cells.iter().filter(|&&x| x == c).count();
        for (cell, name) in [(Cell::Beam, "beam"), (Cell::Exit, "exit")] {
            let n = count(cell);
            if n != 1 {
                return Err(RayError::Invalid(format!("expected exactly one {name}, found {n}")));
            }
        }
        let mut twins = vec![None; cells.len()];
        let mut first: [Option<usize>; 26] = [None; 26];
        let mut seen = [0usize; 26];
        for (i, c) in cells.iter().enumerate() {
            match *c {
                Cell::Teleporter(id) => {
                    if !id.is_ascii_lowercase() || id == b'o' {
                        return Err(RayError::Invalid(format!("bad teleporter id {id}")));
                    }
                    let slot = (id - b'a') as usize;
                    seen[slot] += 1;
                    match first[slot] {
                        None => first[slot] = Some(i),
                        Some(j) => {
                            twins[i] = Some(j);
                            twins[j] = Some(i);
                        }
                    }
                }
                Cell::Polarizer(o) | Cell::Rotating(o) if o >= 8 => {
                    return Err(RayError::Invalid(format!("polarizer orientation {o} is not below 8")));
                }
                _ => {}
            }
        }
        if let Some(slot) = seen.iter().position(|&n| n != 0 && n != 2) {
            return Err(RayError::Invalid(format!(
                "teleporter `{}` occurs {} times instead of twice",
                (b'a' + slot as u8) as char,
                seen[slot]
            )));
        }
        Ok(RayLevel { width, height, cells, twins })
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn cells(&self) -> &[Cell] {
        &self.cells
    }

    pub fn cell(&self, (x, y): Pos) -> Cell {
        self.cells[y * self.width + x]
    }

    pub(crate) fn index(&self, (x, y): Pos) -> usize {
        y * self.width + x
    }

    pub(crate) fn pos(&self, i: usize) -> Pos {
        (i % self.width, i / self.width)
    }

    pub(crate) fn twin(&self, p: Pos) -> Option<Pos> {
        self.twins[self.index(p)].map(|i| self.pos(i))
    }

    /// The cell one step from `p` in direction `k`, if still on the grid.
    pub fn advance(&self, (x, y): Pos, k: Direction) -> Option<Pos> {
        let (dx, dy) = k.step();
        let nx = x as i64 + i64::from(dx);
        let ny = y as i64 + i64::from(dy);
        (0..self.width as i64).contains(&nx).then_some(())?;
        (0..self.height as i64).contains(&ny).then_some(())?;
        Some((nx as usize, ny as usize))
    }

    pub fn positions_of(&self, cell: Cell) -> Vec<Pos> {
        (0..self.cells.len()).filter(|&i| self.cells[i] == cell).map(|i| self.pos(i)).collect()
    }

    pub fn beam(&self) -> Pos {
        self.positions_of(Cell::Beam)[0]
    }

    pub fn exit(&self) -> Pos {
        self.positions_of(Cell::Exit)[0]
    }

    /// Item positions in row-major order; an item's index is its place here.
    pub fn items(&self) -> Vec<Pos> {
        self.positions_of(Cell::Item)
    }

    pub fn mirrors(&self) -> Vec<Pos> {
        self.positions_of(Cell::Mirror)
    }

    pub fn polarizer_count(&self) -> usize {
        self.cells.iter().filter(|c| c.is_polarizer()).count()
    }

    pub fn has_rotating(&self) -> bool {
        self.cells.iter().any(|c| matches!(c, Cell::Rotating(_)))
    }

    /// Beam, mirrors, items and exit, in row-major order.
    pub fn elements(&self) -> Vec<Element> {
        self.cells
            .iter()
            .enumerate()
            .filter_map(|(i, c)| {
                let kind = match c {
                    Cell::Beam => ElementKind::Beam,
                    Cell::Mirror => ElementKind::Mirror,
                    Cell::Item => ElementKind::Item,
                    Cell::Exit => ElementKind::Exit,
                    _ => return None,
                };
                Some(Element { kind, pos: self.pos(i) })
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn directions_are_distinct_and_opposites_pair_up() {
        let steps: std::collections::HashSet<_> = Direction::all().map(Direction::step).collect();
        assert_eq!(steps.len(), 16);
        for k in Direction::all() {
            assert_eq!(k.opposite().opposite(), k);
            let ((a, b), (c, d)) = (k.step(), k.opposite().step());
            assert_eq!((a + c, b + d), (0, 0));
        }
    }

    #[test]
    fn opposite_directions_need_different_polarizer_orientations() {
        for k in Direction::all() {
            assert_ne!(k.axis(), k.opposite().axis());
        }
    }

    #[test]
    fn level_invariants() {
        let ok = RayLevel::new(3, 1, vec![Cell::Beam, Cell::Empty, Cell::Exit]);
        assert!(ok.is_ok());
        assert!(RayLevel::new(3, 1, vec![Cell::Beam, Cell::Beam, Cell::Exit]).is_err());
        assert!(RayLevel::new(3, 1, vec![Cell::Beam, Cell::Teleporter(b'a'), Cell::Exit]).is_err());
        assert!(RayLevel::new(2, 1, vec![Cell::Beam, Cell::Exit, Cell::Empty]).is_err());
        assert!(RayLevel::new(3, 1, vec![Cell::Beam, Cell::Teleporter(b'o'), Cell::Exit]).is_err());
    }
}
