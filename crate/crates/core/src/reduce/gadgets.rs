//! Level fragments shared by the reductions, and [`build_gadget`] for
//! inspecting any of them in isolation.

use std::collections::BTreeMap;

use super::builder::{EdgeOpts, LevelBuilder};
use super::ReduceError;
use crate::arena::{DoorAction, DoorId, EdgeId, Level, Move, VertexId};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GadgetKind {
    /// Two parallel doored corridors into one chamber.
    OrGate,
    /// Two doored corridors in series.
    AndGate,
    /// Directed single-use corridor built from two closing plates.
    SingleUsePath,
    /// Parallel one-way corridors, one literal door each.
    Clause { literals: usize },
    Existential { positive: usize, negative: usize },
    Universal { positive: usize, negative: usize },
    /// A plate on a dead-end spur acts as an optional button.
    ButtonViaPlate { open: bool },
    /// Two-way single-use corridor built from 2-buttons.
    SingleUseButtons,
    /// Three 3-buttons standing in for one plate crossed left to right.
    PlateSimulator { open: bool },
}

/// A standalone gadget: a level whose start is the entry port, the named
/// ports and doors, and scripted move sequences (`routes`) that realise
/// the gadget's intended traversals.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Fragment {
    pub level: Level,
    pub ports: BTreeMap<String, VertexId>,
    pub doors: BTreeMap<String, DoorId>,
    pub routes: BTreeMap<String, Vec<Move>>,
}

impl Fragment {
    pub fn port(&self, name: &str) -> VertexId {
        self.ports[name]
    }

    pub fn door(&self, name: &str) -> DoorId {
        self.doors[name]
    }

    pub fn route(&self, name: &str) -> &[Move] {
        &self.routes[name]
    }
}

/// How the plate-driven reductions realise their actuators.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Actuator {
    Plate,
    /// One 1-button per plate action, at the same vertex.
    Button1,
    /// Every plate action becomes a three-button simulator on the way in.
    Button3,
}

pub(crate) fn traverse(e: EdgeId) -> Move {
    Move::Traverse(e)
}

pub(crate) fn press(vertex: VertexId, button: u32) -> Move {
    Move::Press { vertex, button }
}

/// `from --[DA open]-- g1 --[DB open]-- g2 -- to`; `g1` closes DA and `g2`
/// closes DB, so only one crossing from `from` to `to` ever succeeds.
pub(crate) struct PlatePath {
    pub first_edge: EdgeId,
    pub g1: VertexId,
    pub g2: VertexId,
    pub da: DoorId,
    pub db: DoorId,
    pub forward: Vec<Move>,
}

pub(crate) fn single_use_plates(b: &mut LevelBuilder, from: VertexId, to: VertexId) -> PlatePath {
    let (g1, g2) = (b.vertex(), b.vertex());
    let (da, db) = (b.door(true), b.door(true));
    let e1 = b.edge(from, g1, EdgeOpts::door(da));
    let e2 = b.edge(g1, g2, EdgeOpts::door(db));
    let e3 = b.edge(g2, to, EdgeOpts::plain());
    b.plate(g1, DoorAction::close(da));
    b.plate(g2, DoorAction::close(db));
    PlatePath { first_edge: e1, g1, g2, da, db, forward: vec![traverse(e1), traverse(e2), traverse(e3)] }
}

/// `x --[a open]-- m1 --[b closed]-- m2 --[c open]-- y` with 2-buttons
/// `m1: {+b, -a}` and `m2: {+b, -c}`.
pub(crate) struct ButtonPath {
    pub first_edge: EdgeId,
    pub m1: VertexId,
    pub m2: VertexId,
    pub doors: [DoorId; 3],
    pub forward: Vec<Move>,
    pub backward: Vec<Move>,
}

pub(crate) fn single_use_buttons(b: &mut LevelBuilder, x: VertexId, y: VertexId) -> ButtonPath {
    let (m1, m2) = (b.vertex(), b.vertex());
    let (da, db, dc) = (b.door(true), b.door(false), b.door(true));
    let e1 = b.edge(x, m1, EdgeOpts::door(da));
    let e2 = b.edge(m1, m2, EdgeOpts::door(db));
    let e3 = b.edge(m2, y, EdgeOpts::door(dc));
    let k1 = b.button(m1, vec![DoorAction::open(db), DoorAction::close(da)]);
    let k2 = b.button(m2, vec![DoorAction::open(db), DoorAction::close(dc)]);
    ButtonPath {
        first_edge: e1,
        m1,
        m2,
        doors: [da, db, dc],
        forward: vec![traverse(e1), press(m1, k1), traverse(e2), traverse(e3)],
        backward: vec![traverse(e3), press(m2, k2), traverse(e2), traverse(e1)],
    }
}

pub(crate) struct Simulator {
    pub left: VertexId,
    pub right: VertexId,
    pub g: [VertexId; 3],
    pub doors: [DoorId; 3],
    pub forward: Vec<Move>,
}

/// `L -- g1 --[A]-- g2 --[B]-- g3 --[C]-- R`, all three doors closed, with
/// buttons `g1: {+A, -C, act}`, `g2: {+B, -A, act}`, `g3: {+C, -B}`.
pub(crate) fn plate_simulator(b: &mut LevelBuilder, act: DoorAction) -> Simulator {
    let left = b.vertex();
    let g = [b.vertex(), b.vertex(), b.vertex()];
    let right = b.vertex();
    let doors = [b.door(false), b.door(false), b.door(false)];
    let [da, db, dc] = doors;
    let e0 = b.edge(left, g[0], EdgeOpts::plain());
    let e1 = b.edge(g[0], g[1], EdgeOpts::door(da));
    let e2 = b.edge(g[1], g[2], EdgeOpts::door(db));
    let e3 = b.edge(g[2], right, EdgeOpts::door(dc));
    let k1 = b.button(g[0], vec![DoorAction::open(da), DoorAction::close(dc), act]);
    let k2 = b.button(g[1], vec![DoorAction::open(db), DoorAction::close(da), act]);
    let k3 = b.button(g[2], vec![DoorAction::open(dc), DoorAction::close(db)]);
    Simulator {
        left,
        right,
        g,
        doors,
        forward: vec![
            traverse(e0),
            press(g[0], k1),
            traverse(e1),
            press(g[1], k2),
            traverse(e2),
            press(g[2], k3),
            traverse(e3),
        ],
    }
}

/// A one-way step from `from` through `door` to a fresh vertex where
/// `actions` take effect. Returns the fresh vertex and the moves that reach
/// it (presses included).
pub(crate) fn actuated_step(
    b: &mut LevelBuilder,
    from: VertexId,
    door: Option<DoorId>,
    actions: &[DoorAction],
    mode: Actuator,
) -> (VertexId, Vec<Move>) {
    let mut moves = Vec::new();
    let mut cur = from;
    let mut entry_door = door;
    if mode == Actuator::Button3 {
        for &act in actions {
            let sim = plate_simulator(b, act);
            moves.push(traverse(b.edge(cur, sim.left, EdgeOpts::plain().one_way().with_door(entry_door))));
            moves.extend(sim.forward);
            entry_door = None;
            cur = sim.right;
        }
    }
    let site = b.vertex();
    moves.push(traverse(b.edge(cur, site, EdgeOpts::plain().one_way().with_door(entry_door))));
    match mode {
        Actuator::Plate => {
            for &act in actions {
                b.plate(site, act);
            }
        }
        Actuator::Button1 => {
            for &act in actions {
                let k = b.button(site, vec![act]);
                moves.push(press(site, k));
            }
        }
        Actuator::Button3 => {}
    }
    (site, moves)
}

/// Where a quantifier gadget attaches: the top row runs `top_in → top_out`,
/// the bottom row `bottom_in → bottom_out`.
#[derive(Clone, Copy, Debug)]
pub(crate) struct QuantPorts {
    pub top_in: VertexId,
    pub top_out: VertexId,
    pub bottom_in: VertexId,
    pub bottom_out: VertexId,
}

/// Move scripts through one quantifier gadget.
#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) enum QuantPlan {
    Exists { var: u32, set_true: Vec<Move>, set_false: Vec<Move>, back: Vec<Move> },
    /// `first` sets the variable true on the way down, `again` reroutes
    /// from the bottom row to the top with the variable false, `back`
    /// passes on once both values were tried.
    Forall { var: u32, first: Vec<Move>, again: Vec<Move>, back: Vec<Move> },
}

fn literal_settings(value: bool, positive: &[DoorId], negative: &[DoorId]) -> Vec<DoorAction> {
    let set = |door: DoorId, open: bool| if open { DoorAction::open(door) } else { DoorAction::close(door) };
    positive
        .iter()
        .map(|&d| set(d, value))
        .chain(negative.iter().map(|&d| set(d, !value)))
        .collect()
}

pub(crate) struct Gadget {
    pub plan: QuantPlan,
    /// First vertex entered when setting the variable true.
    pub anchor: VertexId,
    pub doors: BTreeMap<String, DoorId>,
    pub sites: BTreeMap<String, VertexId>,
}

/// Two guarded branches on top, each setting every occurrence door of the
/// variable and shutting the other branch's guard; the bottom path
/// reopens both guards.
pub(crate) fn existential(
    b: &mut LevelBuilder,
    p: QuantPorts,
    var: u32,
    positive: &[DoorId],
    negative: &[DoorId],
    mode: Actuator,
) -> Gadget {
    let guard_t = b.door(true);
    let guard_f = b.door(true);
    let branch = |b: &mut LevelBuilder, value: bool, own: DoorId, other: DoorId| {
        let mut actions = literal_settings(value, positive, negative);
        actions.push(DoorAction::close(other));
        let (site, mut moves) = actuated_step(b, p.top_in, Some(own), &actions, mode);
        moves.push(traverse(b.edge(site, p.top_out, EdgeOpts::plain().one_way())));
        (site, moves)
    };
    let (t_site, set_true) = branch(b, true, guard_t, guard_f);
    let (f_site, set_false) = branch(b, false, guard_f, guard_t);
    let rearm = [DoorAction::open(guard_t), DoorAction::open(guard_f)];
    let (r_site, mut back) = actuated_step(b, p.bottom_in, None, &rearm, mode);
    back.push(traverse(b.edge(r_site, p.bottom_out, EdgeOpts::plain().one_way())));
    Gadget {
        plan: QuantPlan::Exists { var, set_true, set_false, back },
        anchor: t_site,
        doors: BTreeMap::from([("guard_true".into(), guard_t), ("guard_false".into(), guard_f)]),
        sites: BTreeMap::from([("true".into(), t_site), ("false".into(), f_site), ("rearm".into(), r_site)]),
    }
}

/// Door `a` guards the top entry, `e` the reroute from the bottom row and
/// `d` the bottom exit. Entering from the top sets the variable true,
/// closes `d` and opens `e`; the first return along the bottom is forced
/// up through `e`, setting the variable false, reopening `d` and closing
/// `e` and `a`; the second return leaves through `d` and reopens `a`.
pub(crate) fn universal(
    b: &mut LevelBuilder,
    p: QuantPorts,
    var: u32,
    positive: &[DoorId],
    negative: &[DoorId],
    mode: Actuator,
) -> Gadget {
    let a = b.door(true);
    let d = b.door(true);
    let e = b.door(false);

    let mut on_true = literal_settings(true, positive, negative);
    on_true.extend([DoorAction::close(d), DoorAction::open(e)]);
    let (t_site, mut first) = actuated_step(b, p.top_in, Some(a), &on_true, mode);
    first.push(traverse(b.edge(t_site, p.top_out, EdgeOpts::plain().one_way())));

    let mut on_false = literal_settings(false, positive, negative);
    on_false.extend([DoorAction::open(d), DoorAction::close(e), DoorAction::close(a)]);
    let (f_site, mut again) = actuated_step(b, p.bottom_in, Some(e), &on_false, mode);
    again.push(traverse(b.edge(f_site, p.top_out, EdgeOpts::plain().one_way())));

    let (w_site, mut back) = actuated_step(b, p.bottom_in, Some(d), &[DoorAction::open(a)], mode);
    back.push(traverse(b.edge(w_site, p.bottom_out, EdgeOpts::plain().one_way())));

    Gadget {
        plan: QuantPlan::Forall { var, first, again, back },
        anchor: t_site,
        doors: BTreeMap::from([("a".into(), a), ("d".into(), d), ("e".into(), e)]),
        sites: BTreeMap::from([("true".into(), t_site), ("false".into(), f_site), ("pass".into(), w_site)]),
    }
}

/// Parallel one-way edges `from → to`, edge `i` guarded by `doors[i]`.
pub(crate) fn clause(b: &mut LevelBuilder, from: VertexId, to: VertexId, doors: &[DoorId]) -> Vec<EdgeId> {
    doors
        .iter()
        .map(|&d| b.edge(from, to, EdgeOpts::door(d).one_way()))
        .collect()
}

pub fn build_gadget(kind: &GadgetKind) -> Result<Fragment, ReduceError> {
    let mut b = LevelBuilder::new();
    let mut ports = BTreeMap::new();
    let mut doors = BTreeMap::new();
    let mut routes = BTreeMap::new();
    let entry = b.vertex();
    match *kind {
        GadgetKind::OrGate | GadgetKind::AndGate => {
            let out = b.vertex();
            let (da, db) = (b.door(false), b.door(false));
            if *kind == GadgetKind::OrGate {
                let ea = b.edge(entry, out, EdgeOpts::door(da));
                let eb = b.edge(entry, out, EdgeOpts::door(db));
                routes.insert("via_a".into(), vec![traverse(ea)]);
                routes.insert("via_b".into(), vec![traverse(eb)]);
            } else {
                let mid = b.vertex();
                let ea = b.edge(entry, mid, EdgeOpts::door(da));
                let eb = b.edge(mid, out, EdgeOpts::door(db));
                ports.insert("mid".into(), mid);
                routes.insert("through".into(), vec![traverse(ea), traverse(eb)]);
            }
            ports.insert("out".into(), out);
            doors.insert("a".into(), da);
            doors.insert("b".into(), db);
        }
        GadgetKind::SingleUsePath => {
            let out = b.vertex();
            let path = single_use_plates(&mut b, entry, out);
            ports.extend([("out".into(), out), ("g1".into(), path.g1), ("g2".into(), path.g2)]);
            doors.extend([("a".into(), path.da), ("b".into(), path.db)]);
            routes.insert("forward".into(), path.forward.clone());
            routes.insert("backward".into(), path.forward.iter().rev().copied().collect());
        }
        GadgetKind::Clause { literals } => {
            if literals == 0 {
                return Err(ReduceError::BadParams("a clause needs at least one literal".into()));
            }
            let out = b.vertex();
            let lits: Vec<DoorId> = (0..literals).map(|_| b.door(false)).collect();
            for (i, e) in clause(&mut b, entry, out, &lits).into_iter().enumerate() {
                doors.insert(format!("l{i}"), lits[i]);
                routes.insert(format!("via_l{i}"), vec![traverse(e)]);
            }
            ports.insert("out".into(), out);
        }
        GadgetKind::Existential { positive, negative } | GadgetKind::Universal { positive, negative } => {
            let p = QuantPorts { top_in: entry, top_out: b.vertex(), bottom_in: b.vertex(), bottom_out: b.vertex() };
            let pos: Vec<DoorId> = (0..positive).map(|_| b.door(false)).collect();
            let neg: Vec<DoorId> = (0..negative).map(|_| b.door(false)).collect();
            let g = if matches!(kind, GadgetKind::Existential { .. }) {
                existential(&mut b, p, 0, &pos, &neg, Actuator::Plate)
            } else {
                universal(&mut b, p, 0, &pos, &neg, Actuator::Plate)
            };
            ports.extend([
                ("top_in".into(), p.top_in),
                ("top_out".into(), p.top_out),
                ("bottom_in".into(), p.bottom_in),
                ("bottom_out".into(), p.bottom_out),
            ]);
            ports.extend(g.sites);
            doors.extend(g.doors);
            doors.extend(pos.iter().enumerate().map(|(i, &d)| (format!("pos{i}"), d)));
            doors.extend(neg.iter().enumerate().map(|(i, &d)| (format!("neg{i}"), d)));
            match g.plan {
                QuantPlan::Exists { set_true, set_false, back, .. } => {
                    routes.extend([("set_true".into(), set_true), ("set_false".into(), set_false), ("back".into(), back)]);
                }
                QuantPlan::Forall { first, again, back, .. } => {
                    routes.extend([("first".into(), first), ("again".into(), again), ("back".into(), back)]);
                }
            }
        }
        GadgetKind::ButtonViaPlate { open } => {
            let x = b.door(!open);
            let spur = b.vertex();
            let e = b.edge(entry, spur, EdgeOpts::plain());
            b.plate(spur, if open { DoorAction::open(x) } else { DoorAction::close(x) });
            ports.insert("spur".into(), spur);
            doors.insert("x".into(), x);
            routes.insert("press".into(), vec![traverse(e), traverse(e)]);
        }
        GadgetKind::SingleUseButtons => {
            let out = b.vertex();
            let path = single_use_buttons(&mut b, entry, out);
            ports.extend([("out".into(), out), ("m1".into(), path.m1), ("m2".into(), path.m2)]);
            doors.extend([("a".into(), path.doors[0]), ("b".into(), path.doors[1]), ("c".into(), path.doors[2])]);
            routes.insert("forward".into(), path.forward);
            routes.insert("backward".into(), path.backward);
        }
        GadgetKind::PlateSimulator { open } => {
            let x = b.door(!open);
            let act = if open { DoorAction::open(x) } else { DoorAction::close(x) };
            let sim = plate_simulator(&mut b, act);
            let e = b.edge(entry, sim.left, EdgeOpts::plain());
            ports.extend([
                ("left".into(), sim.left),
                ("g1".into(), sim.g[0]),
                ("g2".into(), sim.g[1]),
                ("g3".into(), sim.g[2]),
                ("right".into(), sim.right),
            ]);
            doors.extend([("x".into(), x), ("A".into(), sim.doors[0]), ("B".into(), sim.doors[1]), ("C".into(), sim.doors[2])]);
            let mut forward = vec![traverse(e)];
            forward.extend(sim.forward);
            routes.insert("forward".into(), forward);
        }
    }
    ports.insert("entry".into(), entry);
    Ok(Fragment { level: b.finish(), ports, doors, routes })
}
