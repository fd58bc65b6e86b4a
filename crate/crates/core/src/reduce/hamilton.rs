//! Hamiltonian-cycle reductions. Original vertex `i` keeps level id `i`.

use std::collections::BTreeMap;

use super::builder::{EdgeOpts, LevelBuilder};
use super::gadgets::{press, single_use_buttons, single_use_plates, traverse};
use super::witness::{HamPlan, Plan};
use super::{LevelBundle, ReduceError, Role, Target};
use crate::arena::{Capacity, DoorAction, VertexId};
use crate::instance::{DGraph, UGraph};

/// Which of a construction's three versions to build.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Variant {
    A,
    B,
    C,
}

fn cubic(g: &UGraph, v: u32) -> Result<(), ReduceError> {
    g.check_cubic().map_err(|vertex| ReduceError::DegreeViolation { vertex })?;
    if v as usize >= g.n {
        return Err(ReduceError::BadParams(format!("vertex {v} is not in a graph on {} vertices", g.n)));
    }
    Ok(())
}

fn degree_valid(g: &DGraph) -> Result<u32, ReduceError> {
    g.check_degree_valid().map_err(|vertex| ReduceError::DegreeViolation { vertex })?;
    g.start_candidate().ok_or(ReduceError::NoValidStartVertex)
}

/// Shared skeleton: the original vertices, then whatever each reduction adds.
struct Skeleton {
    b: LevelBuilder,
    roles: BTreeMap<Role, Target>,
    plan: HamPlan,
}

impl Skeleton {
    fn new(n: usize, arcs: &[(u32, u32)], directed: bool, start: u32) -> Self {
        let mut b = LevelBuilder::new();
        let mut roles = BTreeMap::new();
        for i in 0..n as u32 {
            b.vertex();
            roles.insert(Role::Vertex(i), Target::Vertex(i));
        }
        b.level_mut().start = start;
        let plan = HamPlan {
            directed,
            start,
            arcs: arcs.to_vec(),
            routes: Vec::with_capacity(arcs.len()),
            on_visit: vec![Vec::new(); n],
            finish: Vec::new(),
        };
        Skeleton { b, roles, plan }
    }

    /// One level edge per source edge, same id.
    fn simple_edges(&mut self, opts: EdgeOpts) {
        for (j, &(a, c)) in self.plan.arcs.clone().iter().enumerate() {
            let e = self.b.edge(a, c, opts);
            self.roles.insert(Role::Edge(j as u32), Target::Edge(e));
            self.plan.routes.push((vec![traverse(e)], vec![traverse(e)]));
        }
    }

    /// A chain of `len` edges from `from` to a fresh final vertex.
    fn chain(&mut self, from: VertexId, len: usize, mut opts: impl FnMut(&mut LevelBuilder, usize) -> EdgeOpts) -> VertexId {
        let mut cur = from;
        for i in 0..len {
            let next = self.b.vertex();
            let o = opts(&mut self.b, i);
            let e = self.b.edge(cur, next, o);
            self.plan.finish.push(traverse(e));
            cur = next;
        }
        cur
    }

    fn dangling(&mut self, u: VertexId, exit: bool) {
        self.roles.insert(Role::Dangling, Target::Vertex(u));
        if exit {
            let level = self.b.level_mut();
            level.require_exit = true;
            level.vertices[u as usize].exit = true;
        }
    }

    fn must_visit_all(&mut self) {
        for v in &mut self.b.level_mut().vertices {
            v.must_visit = true;
        }
    }

    fn finish(self, uses_one_way: bool) -> LevelBundle {
        LevelBundle {
            level: self.b.finish(),
            role_map: self.roles,
            marked_edge: None,
            uses_one_way,
            plan: Plan::Hamilton(self.plan),
        }
    }
}

/// Every vertex must be visited and every edge is single-use; a fresh
/// vertex `u` dangles from the start `v`.
pub fn reduce_meta1(g: &UGraph, v: u32, require_exit: bool) -> Result<LevelBundle, ReduceError> {
    cubic(g, v)?;
    let mut s = Skeleton::new(g.n, &g.edges, false, v);
    s.simple_edges(EdgeOpts::plain().single_use());
    let u = s.chain(v, 1, |_, _| EdgeOpts::plain().single_use());
    s.must_visit_all();
    s.dangling(u, require_exit);
    Ok(s.finish(false))
}

/// Toll edges everywhere; the variants differ in where tokens come from.
///
/// Variant B also requires ending on `u`: with `n + 1` carried tokens and
/// location traversal alone, the walk `v, u, v` followed by a Hamiltonian
/// path from `v` would win without any Hamiltonian cycle.
pub fn reduce_meta1b(g: &UGraph, v: u32, variant: Variant) -> Result<LevelBundle, ReduceError> {
    cubic(g, v)?;
    let n = g.n;
    let mut s = Skeleton::new(n, &g.edges, false, v);
    s.simple_edges(EdgeOpts::plain().toll());
    let chain_len = if variant == Variant::C { n } else { 1 };
    let u = s.chain(v, chain_len, |_, _| EdgeOpts::plain().toll());
    let level = s.b.level_mut();
    match variant {
        Variant::A => {
            level.token_capacity = Capacity::One;
            for w in 0..n {
                level.vertices[w].tokens = 1;
            }
            level.vertices[v as usize].tokens = 2;
        }
        Variant::B => level.initial_tokens = n as u32 + 1,
        Variant::C => {
            for w in 0..n {
                level.vertices[w].tokens = 2;
            }
        }
    }
    if variant != Variant::C {
        s.must_visit_all();
    }
    s.dangling(u, variant != Variant::A);
    Ok(s.finish(false))
}

/// Every arc becomes a one-way edge behind a closed door; keys pay for the
/// doors. The start is the lowest vertex with indegree 2 and outdegree 1.
pub fn reduce_meta1c(g: &DGraph, variant: Variant) -> Result<LevelBundle, ReduceError> {
    let v = degree_valid(g)?;
    let n = g.n;
    let mut s = Skeleton::new(n, &g.arcs, true, v);
    for (j, &(a, c)) in g.arcs.iter().enumerate() {
        let door = s.b.door(false);
        let e = s.b.edge(a, c, EdgeOpts::door(door).one_way());
        s.roles.insert(Role::Edge(j as u32), Target::Edge(e));
        s.plan.routes.push((vec![traverse(e)], Vec::new()));
    }
    let u = if variant == Variant::C {
        s.chain(v, n, |b, _| EdgeOpts::door(b.door(false)).one_way())
    } else {
        s.chain(v, 1, |_, _| EdgeOpts::plain().one_way())
    };
    let level = s.b.level_mut();
    match variant {
        Variant::A => {
            level.key_capacity = Capacity::One;
            for w in 0..n {
                level.vertices[w].keys = 1;
            }
        }
        Variant::B => level.initial_keys = n as u32,
        Variant::C => {
            for w in 0..n {
                level.vertices[w].keys = 2;
            }
        }
    }
    if variant != Variant::C {
        s.must_visit_all();
    }
    s.dangling(u, variant == Variant::C);
    Ok(s.finish(true))
}

/// Exit `u` sits behind a chain of closed doors hanging off the start, one
/// per original vertex and opened from there.
fn exit_chain(s: &mut Skeleton, n: usize) -> Vec<u32> {
    let doors: Vec<u32> = (0..n).map(|_| s.b.door(false)).collect();
    let start = s.plan.start;
    let u = s.chain(start, n, |_, i| EdgeOpts::door(doors[i]));
    s.dangling(u, true);
    doors
}

/// Directed Hamiltonian cycle with the two-plate single-use corridor per
/// arc and location traversal enforced by the exit chain.
pub fn reduce_meta2b(g: &DGraph) -> Result<LevelBundle, ReduceError> {
    let v = degree_valid(g)?;
    let mut s = Skeleton::new(g.n, &g.arcs, true, v);
    let doors = exit_chain(&mut s, g.n);
    for (w, &d) in doors.iter().enumerate() {
        s.b.plate(w as u32, DoorAction::open(d));
    }
    for (j, &(a, c)) in g.arcs.iter().enumerate() {
        let path = single_use_plates(&mut s.b, a, c);
        s.roles.insert(Role::Edge(j as u32), Target::Edge(path.first_edge));
        s.plan.routes.push((path.forward, Vec::new()));
    }
    Ok(s.finish(false))
}

/// Undirected Hamiltonian cycle with the 2-button single-use corridor per
/// edge; each location's exit door opens by a 2-button whose second action
/// closes a door that no edge carries.
pub fn reduce_meta3b(g: &UGraph, v: u32) -> Result<LevelBundle, ReduceError> {
    cubic(g, v)?;
    let mut s = Skeleton::new(g.n, &g.edges, false, v);
    let doors = exit_chain(&mut s, g.n);
    for (w, &d) in doors.iter().enumerate() {
        let dummy = s.b.door(false);
        let k = s.b.button(w as u32, vec![DoorAction::open(d), DoorAction::close(dummy)]);
        s.plan.on_visit[w] = vec![press(w as u32, k)];
    }
    for (j, &(a, c)) in g.edges.iter().enumerate() {
        let path = single_use_buttons(&mut s.b, a, c);
        s.roles.insert(Role::Edge(j as u32), Target::Edge(path.first_edge));
        s.plan.routes.push((path.forward, path.backward));
    }
    Ok(s.finish(false))
}
