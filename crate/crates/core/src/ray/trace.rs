use std::collections::{BTreeSet, HashMap, HashSet};

use fixedbitset::FixedBitSet;

use super::{Cell, Direction, Phase, Pos, RayError, RayLevel};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum TraceEnd {
    /// Landed on a beam, mirror or exit.
    Element(Pos),
    /// Absorbed at the given cell, or by leaving the grid (`None`).
    Absorbed(Option<Pos>),
    Periodic,
    /// Reached a player-orientable polarizer whose orientation is not known,
    /// travelling in the given direction.
    Orientable(Pos, Direction),
}

/// One straight run of a ray between emitters.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Trace {
    pub end: TraceEnd,
    /// Items passed over, in order, possibly repeated.
    pub items: Vec<Pos>,
    pub crossed_polarizer: bool,
}

/// Moves a ray from `from` in direction `k` until something stops it.
/// `orientable` supplies the orientation of player-set polarizers.
pub(crate) fn walk(
    level: &RayLevel,
    from: Pos,
    mut k: Direction,
    phase: Phase,
    orientable: &dyn Fn(Pos) -> Option<u8>,
) -> Trace {
    let mut seen = FixedBitSet::with_capacity(level.cells().len() * 16);
    let mut items = Vec::new();
    let mut crossed_polarizer = false;
    let mut pos = from;
    let end = loop {
        let Some(next) = level.advance(pos, k) else { break TraceEnd::Absorbed(None) };
        pos = next;
        let key = level.index(pos) * 16 + k.index() as usize;
        if seen.put(key) {
            break TraceEnd::Periodic;
        }
        let orientation = match level.cell(pos) {
            Cell::Empty => continue,
            Cell::Opaque | Cell::Mine => break TraceEnd::Absorbed(Some(pos)),
            Cell::Reflecting => {
                k = k.opposite();
                continue;
            }
            Cell::Beam | Cell::Mirror | Cell::Exit => break TraceEnd::Element(pos),
            Cell::Item => {
                items.push(pos);
                continue;
            }
            Cell::Teleporter(_) => {
                pos = level.twin(pos).expect("validated levels pair every teleporter");
                continue;
            }
            Cell::Polarizer(o) => o,
            Cell::Rotating(base) => (base + phase) % 8,
            Cell::Orientable => match orientable(pos) {
                Some(o) => o,
                None => break TraceEnd::Orientable(pos, k),
            },
        };
        if orientation != k.axis() {
            break TraceEnd::Absorbed(Some(pos));
        }
        crossed_polarizer = true;
    };
    Trace { end, items, crossed_polarizer }
}

/// Traces a single segment from an emitter. Player-orientable polarizers
/// stop the trace with [`TraceEnd::Orientable`].
pub fn trace_ray(level: &RayLevel, from: Pos, k: Direction, phase: Phase) -> Result<Trace, RayError> {
    let inside = from.0 < level.width() && from.1 < level.height();
    if !inside || !matches!(level.cell(from), Cell::Beam | Cell::Mirror) {
        return Err(RayError::BadOrigin(from));
    }
    Ok(walk(level, from, k, phase, &|_| None))
}

/// A full or partial choice of everything the player controls.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct RayConfig {
    pub phase: Phase,
    /// Direction of the beam and of each mirror.
    pub aims: HashMap<Pos, Direction>,
    /// Orientation of each player-orientable polarizer.
    pub polarizers: HashMap<Pos, u8>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SimEnd {
    Exit,
    /// The ray came back into the beam.
    Beam,
    Absorbed,
    Periodic,
    /// The ray met an element or polarizer the configuration leaves unset.
    Unset(Pos),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Simulation {
    pub items: BTreeSet<Pos>,
    pub end: SimEnd,
    /// Emitters the ray left, with their directions, in order.
    pub path: Vec<(Pos, Direction)>,
}

/// Follows the ray from the beam through every mirror under `config`.
pub fn simulate(level: &RayLevel, config: &RayConfig) -> Simulation {
    let mut items = BTreeSet::new();
    let mut path = Vec::new();
    let mut emitted = HashSet::new();
    let mut at = level.beam();
    let orientable = |p: Pos| config.polarizers.get(&p).copied();
    let end = loop {
        let Some(&k) = config.aims.get(&at) else { break SimEnd::Unset(at) };
        if !emitted.insert((at, k)) {
            break SimEnd::Periodic;
        }
        path.push((at, k));
        let t = walk(level, at, k, config.phase, &orientable);
        items.extend(t.items);
        match t.end {
            TraceEnd::Element(p) => match level.cell(p) {
                Cell::Exit => break SimEnd::Exit,
                Cell::Beam => break SimEnd::Beam,
                _ => at = p,
            },
            TraceEnd::Absorbed(_) => break SimEnd::Absorbed,
            TraceEnd::Periodic => break SimEnd::Periodic,
            TraceEnd::Orientable(p, _) => break SimEnd::Unset(p),
        }
    };
    Simulation { items, end, path }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formats::parse_ray_level;

    fn level(rows: &[&str]) -> RayLevel {
        let text = format!("ray {} {}\n{}\n", rows[0].len(), rows.len(), rows.join("\n"));
        parse_ray_level(&text).unwrap()
    }

    #[test]
    fn border_absorbs() {
        let l = level(&["#####", "#B..#", "#...#", "#..X#", "#####"]);
        let t = trace_ray(&l, (1, 1), Direction::EAST, 0).unwrap();
        assert_eq!(t.end, TraceEnd::Absorbed(Some((4, 1))));
    }

    #[test]
    fn mirror_stops_the_segment() {
        let l = level(&["B..M", "...X"]);
        let t = trace_ray(&l, (0, 0), Direction::EAST, 0).unwrap();
        assert_eq!(t.end, TraceEnd::Element((3, 0)));
    }

    #[test]
    fn static_polarizer_passes_one_way() {
        let l = level(&["M0.M", "B..X"]);
        let east = trace_ray(&l, (0, 0), Direction::EAST, 0).unwrap();
        assert_eq!(east.end, TraceEnd::Element((3, 0)));
        assert!(east.crossed_polarizer);
        let west = trace_ray(&l, (3, 0), Direction::new(8), 0).unwrap();
        assert_eq!(west.end, TraceEnd::Absorbed(Some((1, 0))));
    }

    #[test]
    fn rotating_polarizer_follows_the_phase() {
        let l = level(&["BR.M", "...X"]);
        assert_eq!(trace_ray(&l, (0, 0), Direction::EAST, 0).unwrap().end, TraceEnd::Element((3, 0)));
        assert_eq!(trace_ray(&l, (0, 0), Direction::EAST, 3).unwrap().end, TraceEnd::Absorbed(Some((1, 0))));
    }

    #[test]
    fn items_do_not_stop_rays_and_teleporters_keep_direction() {
        let l = level(&["B*a#", "#a.X"]);
        let t = trace_ray(&l, (0, 0), Direction::EAST, 0).unwrap();
        assert_eq!(t.items, vec![(1, 0)]);
        assert_eq!(t.end, TraceEnd::Element((3, 1)));
    }

    #[test]
    fn reflecting_wall_sends_the_ray_back() {
        let l = level(&["B.=", "..X"]);
        assert_eq!(trace_ray(&l, (0, 0), Direction::EAST, 0).unwrap().end, TraceEnd::Element((0, 0)));
    }

    #[test]
    fn teleporter_and_wall_bring_the_ray_home() {
        let l = level(&["#.b.=", "Bb..X"]);
        let t = trace_ray(&l, (0, 1), Direction::EAST, 0).unwrap();
        assert_eq!(t.end, TraceEnd::Element((0, 1)));
    }

    #[test]
    fn bad_origin() {
        let l = level(&["B.X"]);
        assert_eq!(trace_ray(&l, (1, 0), Direction::EAST, 0), Err(RayError::BadOrigin((1, 0))));
    }

    #[test]
    fn knight_steps_skip_intermediate_cells() {
        let l = level(&["B#.", "#.M", "..X"]);
        let t = trace_ray(&l, (0, 0), Direction::new(1), 0).unwrap();
        assert_eq!(t.end, TraceEnd::Element((2, 1)));
    }

    #[test]
    fn simulation_follows_mirrors() {
        let l = level(&["B..M", "...*", "...X"]);
        let mut c = RayConfig::default();
        c.aims.insert((0, 0), Direction::EAST);
        c.aims.insert((3, 0), Direction::new(4));
        let s = simulate(&l, &c);
        assert_eq!(s.end, SimEnd::Exit);
        assert_eq!(s.items.into_iter().collect::<Vec<_>>(), vec![(3, 1)]);
        c.aims.remove(&(3, 0));
        assert_eq!(simulate(&l, &c).end, SimEnd::Unset((3, 0)));
    }
}
