use std::collections::{HashMap, VecDeque};

use super::trace::{walk, RayConfig, TraceEnd};
use super::{Cell, Direction, Element, ElementKind, Phase, Pos, RayError, RayLevel};

/// `from` sends a ray in direction `k` that reaches `to`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct ReachArc {
    pub from: usize,
    pub to: usize,
    pub k: Direction,
    pub crossed_polarizer: bool,
}

/// Which elements can redirect a ray onto which, at one phase. Vertex ids
/// index [`RayLevel::elements`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReachGraph {
    pub phase: Phase,
    pub elements: Vec<Element>,
    pub arcs: Vec<ReachArc>,
}

impl ReachGraph {
    pub fn has_arc(&self, from: usize, to: usize) -> bool {
        self.arcs.iter().any(|a| a.from == from && a.to == to)
    }
}

/// An arc of the product graph with the aim it stands for, if any.
type Hop = (usize, Option<(Pos, Direction)>);

fn element_index(elements: &[Element]) -> HashMap<Pos, usize> {
    elements.iter().enumerate().map(|(i, e)| (e.pos, i)).collect()
}

/// Shoots all sixteen rays from the beam and from every mirror. Each item
/// passed over and the element the ray lands on become arcs.
pub fn build_reachability_graph(level: &RayLevel, phase: Phase) -> Result<ReachGraph, RayError> {
    if level.cells().contains(&Cell::Orientable) {
        return Err(RayError::OrientablePolarizer);
    }
    let elements = level.elements();
    let index = element_index(&elements);
    let mut arcs = Vec::new();
    for (from, e) in elements.iter().enumerate() {
        if !matches!(e.kind, ElementKind::Beam | ElementKind::Mirror) {
            continue;
        }
        for k in Direction::all() {
            let t = walk(level, e.pos, k, phase, &|_| None);
            let crossed_polarizer = t.crossed_polarizer;
            let mut targets: Vec<usize> = t.items.iter().map(|p| index[p]).collect();
            if let TraceEnd::Element(p) = t.end {
                targets.push(index[&p]);
            }
            targets.dedup();
            arcs.extend(targets.into_iter().map(|to| ReachArc { from, to, k, crossed_polarizer }));
        }
    }
    Ok(ReachGraph { phase, elements, arcs })
}

/// One stage of a solution: at this phase, aim the listed emitters as
/// given and the ray reaches `target`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PlanStep {
    pub target: Pos,
    pub phase: Phase,
    /// Beam first, then each mirror along the ray.
    pub aims: Vec<(Pos, Direction)>,
}

impl PlanStep {
    pub fn config(&self) -> RayConfig {
        RayConfig { phase: self.phase, aims: self.aims.iter().copied().collect(), polarizers: HashMap::new() }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DeflektorOutcome {
    pub solvable: bool,
    /// One step per item in row-major order, then one for the exit.
    pub plan: Option<Vec<PlanStep>>,
    pub vertices: usize,
    pub arcs: usize,
}

/// Decides a level by reachability in a chained product graph.
///
/// Stage `j` holds the eight phase graphs side by side plus a stage beam
/// vertex joined to each copy of the beam. Every copy of the `j`-th target
/// (items in row-major order, then the exit) links to the next stage's beam
/// vertex, and the exit copies of the last stage link to a final vertex.
/// Arcs into the beam are left out since a ray that returns to the beam
/// goes no further.
pub fn solve_deflektor(level: &RayLevel) -> Result<DeflektorOutcome, RayError> {
    let graphs = (0..8).map(|i| build_reachability_graph(level, i)).collect::<Result<Vec<_>, _>>()?;
    let elements = level.elements();
    let index = element_index(&elements);
    let e = elements.len();
    let beam = index[&level.beam()];
    let targets: Vec<usize> = level.items().iter().chain([&level.exit()]).map(|p| index[p]).collect();

    let stage_size = 1 + 8 * e;
    let end = targets.len() * stage_size;
    let copy = |j: usize, i: usize, v: usize| j * stage_size + 1 + i * e + v;
    // `None` labels the links that carry no ray.
    let mut adj: Vec<Vec<Hop>> = vec![Vec::new(); end + 1];
    for (j, &target) in targets.iter().enumerate() {
        let next = if j + 1 == targets.len() { end } else { (j + 1) * stage_size };
        for (i, g) in graphs.iter().enumerate() {
            adj[j * stage_size].push((copy(j, i, beam), None));
            for a in g.arcs.iter().filter(|a| a.to != beam) {
                adj[copy(j, i, a.from)].push((copy(j, i, a.to), Some((elements[a.from].pos, a.k))));
            }
            adj[copy(j, i, target)].push((next, None));
        }
    }
    let arc_count = adj.iter().map(Vec::len).sum();

    let mut parent: Vec<Option<Hop>> = vec![None; end + 1];
    let mut seen = vec![false; end + 1];
    seen[0] = true;
    let mut queue = VecDeque::from([0]);
    while let Some(v) = queue.pop_front() {
        for &(w, label) in &adj[v] {
            if !seen[w] {
                seen[w] = true;
                parent[w] = Some((v, label));
                queue.push_back(w);
            }
        }
    }
    let plan = seen[end].then(|| {
        let mut hops = Vec::new();
        let mut v = end;
        while let Some((u, label)) = parent[v] {
            hops.push((u, v, label));
            v = u;
        }
        hops.reverse();
        let element_of = |v: usize| ((v % stage_size - 1) / e, (v % stage_size - 1) % e);
        let mut steps: Vec<PlanStep> = Vec::new();
        for (u, v, label) in hops {
            if u % stage_size == 0 {
                let (phase, _) = element_of(v);
                steps.push(PlanStep { target: level.beam(), phase: phase as Phase, aims: Vec::new() });
                continue;
            }
            let step = steps.last_mut().expect("every stage starts at its beam vertex");
            match label {
                Some(aim) => step.aims.push(aim),
                None => step.target = elements[element_of(u).1].pos,
            }
        }
        steps
    });
    Ok(DeflektorOutcome { solvable: seen[end], plan, vertices: end + 1, arcs: arc_count })
}
