use std::collections::{BTreeSet, HashMap, HashSet};

use super::trace::{walk, TraceEnd};
use super::{Cell, Direction, Phase, Pos, RayError, RayLevel};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct BruteBounds {
    pub mirrors: usize,
    pub polarizers: usize,
}

impl Default for BruteBounds {
    fn default() -> Self {
        BruteBounds { mirrors: 5, polarizers: 4 }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BruteReport {
    pub solvable: bool,
    pub items_hit: BTreeSet<Pos>,
    pub exit_hit: bool,
    /// Ray segments traced over the whole search.
    pub segments: u64,
}

/// Tries every configuration of the beam, the mirrors and the
/// player-orientable polarizers at every phase, and answers whether each
/// item and the exit can be hit. Items never block a ray, so what one
/// configuration hits does not depend on what was collected before, and
/// the level is solvable exactly when every item and the exit are each hit
/// by some configuration.
///
/// Configurations are enumerated along the ray: an element's setting is
/// chosen when the ray first reaches it, since elements the ray never
/// touches cannot change the outcome.
pub fn solve_ray_brute(level: &RayLevel, bounds: BruteBounds) -> Result<BruteReport, RayError> {
    let mirrors = level.mirrors().len();
    if mirrors > bounds.mirrors {
        return Err(RayError::TooLarge { what: "mirrors", count: mirrors, bound: bounds.mirrors });
    }
    let polarizers = level.polarizer_count();
    if polarizers > bounds.polarizers {
        return Err(RayError::TooLarge { what: "polarizers", count: polarizers, bound: bounds.polarizers });
    }
    let mut search = Search {
        level,
        phase: 0,
        aims: HashMap::new(),
        polarizers: HashMap::new(),
        emitted: HashSet::new(),
        items_hit: BTreeSet::new(),
        exit_hit: false,
        wanted: level.items().len(),
        segments: 0,
    };
    let phases: Phase = if level.has_rotating() { 8 } else { 1 };
    for phase in 0..phases {
        search.phase = phase;
        let beam = level.beam();
        for k in Direction::all() {
            search.emit(beam, k);
        }
    }
    let solvable = search.exit_hit && search.items_hit.len() == search.wanted;
    Ok(BruteReport { solvable, items_hit: search.items_hit, exit_hit: search.exit_hit, segments: search.segments })
}

struct Search<'a> {
    level: &'a RayLevel,
    phase: Phase,
    aims: HashMap<Pos, Direction>,
    polarizers: HashMap<Pos, u8>,
    emitted: HashSet<(Pos, Direction)>,
    items_hit: BTreeSet<Pos>,
    exit_hit: bool,
    wanted: usize,
    segments: u64,
}

impl Search<'_> {
    fn done(&self) -> bool {
        self.exit_hit && self.items_hit.len() == self.wanted
    }

    /// Continues the ray leaving emitter `at` in direction `k`.
    fn emit(&mut self, at: Pos, k: Direction) {
        if self.done() || !self.emitted.insert((at, k)) {
            return;
        }
        self.aims.insert(at, k);
        self.run(at, k);
        self.aims.remove(&at);
        self.emitted.remove(&(at, k));
    }

    /// Follows a straight run from `from`, which is either an emitter or a
    /// player polarizer the ray has just passed.
    fn run(&mut self, from: Pos, k: Direction) {
        self.segments += 1;
        let polarizers = &self.polarizers;
        let t = walk(self.level, from, k, self.phase, &|p| polarizers.get(&p).copied());
        self.items_hit.extend(t.items);
        match t.end {
            TraceEnd::Element(p) => match self.level.cell(p) {
                Cell::Exit => self.exit_hit = true,
                Cell::Mirror => match self.aims.get(&p) {
                    Some(&d) => self.emit(p, d),
                    None => {
                        for d in Direction::all() {
                            self.emit(p, d);
                        }
                    }
                },
                _ => {}
            },
            TraceEnd::Orientable(p, k) => {
                // Any of the seven other orientations absorbs the ray.
                self.polarizers.insert(p, k.axis());
                self.run(p, k);
                self.polarizers.remove(&p);
            }
            TraceEnd::Absorbed(_) | TraceEnd::Periodic => {}
        }
    }
}
