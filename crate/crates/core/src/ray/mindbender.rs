use super::trace::RayConfig;
use super::{Cell, Direction, Pos, RayError, RayLevel};
use crate::instance::DGraph;

/// Which pair of ports an arc uses: `H` leaves through the right port and
/// enters through the left one, `V` leaves through the top and enters
/// through the bottom.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum EdgeColour {
    H,
    V,
}

/// Cell positions of one vertex gadget.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct MindbenderGadget {
    pub polarizer: Pos,
    pub left: Pos,
    pub bottom: Pos,
    pub right: Pos,
    pub top: Pos,
    /// Mirror on the horizontal line, east of the polarizer.
    pub mirror_h: Pos,
    /// Mirror on the vertical line, north of the polarizer.
    pub mirror_v: Pos,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MindbenderLevel {
    pub level: RayLevel,
    pub gadgets: Vec<MindbenderGadget>,
    /// Colour of each input arc; `None` for arcs into the source or out of
    /// the target, which no simple path between them uses.
    pub colours: Vec<Option<EdgeColour>>,
    pub source: u32,
    pub target: u32,
}

/// Side of the square each gadget occupies, padding included.
const BOX: usize = 10;
/// Polarizer position inside its box.
const CENTRE: (i32, i32) = (3, 6);
const H_TO_V: Direction = Direction(10);
const V_TO_H: Direction = Direction(2);
/// Polarizer orientations letting a ray through eastwards and northwards.
const PASS_EAST: u8 = 0;
const PASS_NORTH: u8 = 6;
const TELEPORTER_IDS: &[u8] = b"abcdefghijklmnpqrstuvwxyz";

fn gadget(index: usize) -> MindbenderGadget {
    let x0 = (index * BOX) as i32 + CENTRE.0;
    let p = |dx: i32, dy: i32| -> Pos { ((x0 + dx) as usize, (CENTRE.1 + dy) as usize) };
    MindbenderGadget {
        polarizer: p(0, 0),
        left: p(-1, 0),
        bottom: p(0, 1),
        right: p(4, 0),
        top: p(0, -4),
        mirror_h: p(3, 0),
        mirror_v: p(0, -3),
    }
}

/// Gives every kept arc a colour so that no vertex has two outgoing or two
/// incoming arcs of the same colour. With both degrees at most two the
/// out-copy/in-copy graph splits into paths and even cycles, which are
/// coloured alternately.
fn colour_arcs(n: usize, arcs: &[(u32, u32)], kept: &[bool]) -> Vec<Option<EdgeColour>> {
    let mut incident: Vec<Vec<usize>> = vec![Vec::new(); 2 * n];
    for (e, &(u, v)) in arcs.iter().enumerate() {
        if kept[e] {
            incident[u as usize].push(e);
            incident[n + v as usize].push(e);
        }
    }
    let mut colours: Vec<Option<EdgeColour>> = vec![None; arcs.len()];
    let other = |e: usize, node: usize| {
        let (u, v) = arcs[e];
        if node == u as usize && node < n {
            n + v as usize
        } else {
            u as usize
        }
    };
    // Path ends first, so paths are walked from one end; then cycles.
    let starts: Vec<usize> =
        (0..2 * n).filter(|&x| incident[x].len() == 1).chain((0..2 * n).filter(|&x| incident[x].len() == 2)).collect();
    for start in starts {
        let mut node = start;
        let mut colour = EdgeColour::H;
        while let Some(&e) = incident[node].iter().find(|&&e| colours[e].is_none()) {
            colours[e] = Some(colour);
            colour = if colour == EdgeColour::H { EdgeColour::V } else { EdgeColour::H };
            node = other(e, node);
        }
    }
    colours
}

/// Builds a level that can be won exactly when `t` is reachable from `s`.
///
/// Each vertex gets a gadget whose left and bottom ports receive incoming
/// arcs and whose right and top ports send outgoing ones, with matching
/// ports joined by a teleporter pair. A ray entering from the left meets
/// the horizontal mirror, one entering from the bottom meets the vertical
/// mirror, and the two mirrors can pass the ray to each other, so either
/// entry can leave through either exit. The player-set polarizer at the
/// crossing lets the ray through eastwards or northwards but never back
/// towards an entry port. The beam sits at the left port of `s`, the exit at
/// the right port of `t`.
pub fn reduce_mindbender(g: &DGraph, s: u32, t: u32) -> Result<MindbenderLevel, RayError> {
    let n = g.n;
    if s as usize >= n || t as usize >= n {
        return Err(RayError::BadParams(format!("source {s} or target {t} is not a vertex of a {n}-vertex graph")));
    }
    g.check_max_degree_two().map_err(|vertex| RayError::DegreeViolation { vertex })?;
    let kept: Vec<bool> = g.arcs.iter().map(|&(u, v)| v != s && u != t).collect();
    if kept.iter().filter(|&&k| k).count() > TELEPORTER_IDS.len() {
        return Err(RayError::BadParams(format!("more than {} arcs need teleporters", TELEPORTER_IDS.len())));
    }
    let colours = colour_arcs(n, &g.arcs, &kept);
    let gadgets: Vec<MindbenderGadget> = (0..n).map(gadget).collect();

    let width = n * BOX;
    let mut cells = vec![Cell::Opaque; width * BOX];
    let mut put = |(x, y): Pos, c: Cell| cells[y * width + x] = c;
    for gd in &gadgets {
        let (px, py) = gd.polarizer;
        put(gd.polarizer, Cell::Orientable);
        for (dx, dy) in [(1, 0), (2, 0), (0, -1), (0, -2), (2, -1), (1, -2)] {
            put(((px as i32 + dx) as usize, (py as i32 + dy) as usize), Cell::Empty);
        }
        put(gd.mirror_h, Cell::Mirror);
        put(gd.mirror_v, Cell::Mirror);
    }
    let mut ids = TELEPORTER_IDS.iter();
    for (e, &(u, v)) in g.arcs.iter().enumerate() {
        let Some(colour) = colours[e] else { continue };
        let id = *ids.next().expect("arc count checked above");
        let (from, to) = match colour {
            EdgeColour::H => (gadgets[u as usize].right, gadgets[v as usize].left),
            EdgeColour::V => (gadgets[u as usize].top, gadgets[v as usize].bottom),
        };
        put(from, Cell::Teleporter(id));
        put(to, Cell::Teleporter(id));
    }
    put(gadgets[s as usize].left, Cell::Beam);
    put(gadgets[t as usize].right, Cell::Exit);
    let level = RayLevel::new(width, BOX, cells)?;
    Ok(MindbenderLevel { level, gadgets, colours, source: s, target: t })
}

impl MindbenderLevel {
    /// Settings that carry the ray along `path`, a walk from the source to
    /// the target without repeated vertices, given as its vertices.
    pub fn decode_path(&self, g: &DGraph, path: &[u32]) -> Result<RayConfig, RayError> {
        let bad = |msg: String| Err(RayError::BadParams(msg));
        if path.first() != Some(&self.source) || path.last() != Some(&self.target) {
            return bad(format!("path must run from {} to {}", self.source, self.target));
        }
        let mut seen = vec![false; g.n];
        let mut hops = Vec::with_capacity(path.len());
        for w in path.windows(2) {
            let colour = g
                .arcs
                .iter()
                .zip(&self.colours)
                .find_map(|(&arc, &c)| if arc == (w[0], w[1]) { c } else { None });
            match colour {
                Some(c) => hops.push(c),
                None => return bad(format!("no usable arc from {} to {}", w[0], w[1])),
            }
        }
        let mut config = RayConfig::default();
        config.aims.insert(self.gadgets[self.source as usize].left, Direction::EAST);
        for (i, &v) in path.iter().enumerate() {
            if std::mem::replace(&mut seen[v as usize], true) {
                return bad(format!("vertex {v} repeats"));
            }
            let gd = &self.gadgets[v as usize];
            let entry = if i == 0 { EdgeColour::H } else { hops[i - 1] };
            let exit = hops.get(i).copied().unwrap_or(EdgeColour::H);
            let pass = if entry == EdgeColour::H { PASS_EAST } else { PASS_NORTH };
            config.polarizers.insert(gd.polarizer, pass);
            let aims: &[(Pos, Direction)] = match (entry, exit) {
                (EdgeColour::H, EdgeColour::H) => &[(gd.mirror_h, Direction::EAST)],
                (EdgeColour::H, EdgeColour::V) => &[(gd.mirror_h, H_TO_V), (gd.mirror_v, Direction::NORTH)],
                (EdgeColour::V, EdgeColour::V) => &[(gd.mirror_v, Direction::NORTH)],
                (EdgeColour::V, EdgeColour::H) => &[(gd.mirror_v, V_TO_H), (gd.mirror_h, Direction::EAST)],
            };
            config.aims.extend(aims.iter().copied());
        }
        Ok(config)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ray::{simulate, solve_ray_brute, BruteBounds, SimEnd};

    fn wide() -> BruteBounds {
        BruteBounds { mirrors: 64, polarizers: 32 }
    }

    #[test]
    fn single_arc_towards_the_target() {
        let g = DGraph::new(2, vec![(0, 1)]);
        let m = reduce_mindbender(&g, 0, 1).unwrap();
        assert!(solve_ray_brute(&m.level, wide()).unwrap().solvable);
        let config = m.decode_path(&g, &[0, 1]).unwrap();
        assert_eq!(simulate(&m.level, &config).end, SimEnd::Exit);
    }

    #[test]
    fn arc_the_wrong_way() {
        let g = DGraph::new(2, vec![(1, 0)]);
        let m = reduce_mindbender(&g, 0, 1).unwrap();
        assert!(!solve_ray_brute(&m.level, wide()).unwrap().solvable);
    }

    #[test]
    fn colouring_separates_ports() {
        let g = DGraph::new(3, vec![(0, 1), (0, 2), (1, 2), (2, 1), (1, 0), (2, 0)]);
        let kept = vec![true; g.arcs.len()];
        let c = colour_arcs(3, &g.arcs, &kept);
        for v in 0..3u32 {
            for colour in [EdgeColour::H, EdgeColour::V] {
                let out = g.arcs.iter().zip(&c).filter(|(a, &x)| a.0 == v && x == Some(colour)).count();
                let inn = g.arcs.iter().zip(&c).filter(|(a, &x)| a.1 == v && x == Some(colour)).count();
                assert!(out <= 1 && inn <= 1);
            }
        }
        assert!(c.iter().all(Option::is_some));
    }

    #[test]
    fn vertical_entry_cannot_turn_back() {
        // 0 -> 1 -> 2 with a detour 0 -> 2 absent; 1 is entered from
        // below when the arc 0 -> 1 is coloured V.
        let g = DGraph::new(3, vec![(0, 1), (0, 2), (1, 2)]);
        let m = reduce_mindbender(&g, 0, 2).unwrap();
        assert!(solve_ray_brute(&m.level, wide()).unwrap().solvable);
        for path in [&[0, 2][..], &[0, 1, 2][..]] {
            let config = m.decode_path(&g, path).unwrap();
            assert_eq!(simulate(&m.level, &config).end, SimEnd::Exit, "path {path:?}");
        }
    }

    #[test]
    fn degree_bound() {
        let g = DGraph::new(4, vec![(0, 1), (0, 2), (0, 3)]);
        assert_eq!(reduce_mindbender(&g, 0, 1), Err(RayError::DegreeViolation { vertex: 0 }));
    }
}
