//! Seeded instance generators.
//!
//! Randomness comes from [`Lcg`], a 64-bit linear congruential generator
//! with Knuth's MMIX constants
//! `state = state * 6364136223846793005 + 1442695040888963407 (mod 2^64)`.
//! Each draw returns the upper 32 bits of the new state. The generator is
//! seeded with the raw seed, so the same parameters and seed give the same
//! instance on any platform.

use thiserror::Error;

use crate::arena::{Capacity, DoorAction, DoorSpec, EdgeSpec, Level};
use crate::ray::{Cell, RayLevel};
use crate::instance::{CircuitInput, DGraph, Gate, GateOp, Literal, MonotoneCircuit, QuantifiedFormula, Quantifier, UGraph};

const MULTIPLIER: u64 = 6364136223846793005;
const INCREMENT: u64 = 1442695040888963407;

/// Attempts before a generator gives up on finding a valid instance.
const MAX_ATTEMPTS: usize = 10_000;

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum GenError {
    #[error("infeasible parameters: {0}")]
    InfeasibleParameters(String),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Lcg {
    state: u64,
}

impl Lcg {
    pub fn new(seed: u64) -> Self {
        Lcg { state: seed }
    }

    pub fn next_u32(&mut self) -> u32 {
        self.state = self.state.wrapping_mul(MULTIPLIER).wrapping_add(INCREMENT);
        (self.state >> 32) as u32
    }

    /// Uniform in `0..bound` by multiply-shift; `bound` must be positive.
    pub fn below(&mut self, bound: u32) -> u32 {
        assert!(bound > 0, "empty range");
        ((u64::from(self.next_u32()) * u64::from(bound)) >> 32) as u32
    }

    /// Uniform in `lo..=hi`.
    pub fn range(&mut self, lo: u32, hi: u32) -> u32 {
        lo + self.below(hi - lo + 1)
    }

    pub fn coin(&mut self) -> bool {
        self.next_u32() >> 31 == 1
    }

    pub fn shuffle<T>(&mut self, items: &mut [T]) {
        for i in (1..items.len()).rev() {
            let j = self.below(i as u32 + 1) as usize;
            items.swap(i, j);
        }
    }
}

/// A connected simple 3-regular graph on `n` vertices, edges sorted with
/// the smaller endpoint first.
pub fn gen_cubic_graph(n: usize, seed: u64) -> Result<UGraph, GenError> {
    if n < 4 || n % 2 == 1 {
        return Err(GenError::InfeasibleParameters(format!("a cubic graph needs an even vertex count of at least 4, got {n}")));
    }
    let mut rng = Lcg::new(seed);
    let mut stubs: Vec<u32> = (0..n as u32).flat_map(|v| [v; 3]).collect();
    for _ in 0..MAX_ATTEMPTS {
        rng.shuffle(&mut stubs);
        let mut edges: Vec<(u32, u32)> = stubs.chunks(2).map(|p| (p[0].min(p[1]), p[0].max(p[1]))).collect();
        edges.sort_unstable();
        let g = UGraph { n, edges };
        if g.is_simple() && g.is_connected() {
            return Ok(g);
        }
    }
    Err(GenError::InfeasibleParameters(format!("no cubic graph found on {n} vertices")))
}

/// A simple digraph on `2 * n_half` vertices where half the vertices have
/// in-degree 1 and out-degree 2 and the other half the reverse. Arcs are
/// sorted.
pub fn gen_degree_valid_digraph(n_half: usize, seed: u64) -> Result<DGraph, GenError> {
    if n_half < 2 {
        return Err(GenError::InfeasibleParameters(format!("need at least two vertices of each type, got {n_half}")));
    }
    let n = 2 * n_half;
    let mut rng = Lcg::new(seed);
    let mut label: Vec<u32> = (0..n as u32).collect();
    rng.shuffle(&mut label);
    // Vertices `0..n_half` (before relabelling) are 1-in/2-out.
    let out_stubs: Vec<u32> = (0..n as u32).flat_map(|v| if (v as usize) < n_half { vec![v, v] } else { vec![v] }).collect();
    let mut in_stubs: Vec<u32> = (0..n as u32).flat_map(|v| if (v as usize) < n_half { vec![v] } else { vec![v, v] }).collect();
    for _ in 0..MAX_ATTEMPTS {
        rng.shuffle(&mut in_stubs);
        let mut arcs: Vec<(u32, u32)> =
            out_stubs.iter().zip(&in_stubs).map(|(&a, &b)| (label[a as usize], label[b as usize])).collect();
        arcs.sort_unstable();
        let simple = arcs.iter().all(|&(a, b)| a != b) && arcs.windows(2).all(|w| w[0] != w[1]);
        if simple {
            return Ok(DGraph { n, arcs });
        }
    }
    Err(GenError::InfeasibleParameters(format!("no degree-valid digraph found with {n} vertices")))
}

/// A prenex 3-CNF over `num_vars` variables with a shuffled prefix and
/// uniformly drawn literals. Quantifiers are drawn by coin flip.
pub fn gen_qbf(num_vars: u32, num_clauses: usize, seed: u64) -> Result<QuantifiedFormula, GenError> {
    if num_vars == 0 {
        return Err(GenError::InfeasibleParameters("a formula needs at least one variable".into()));
    }
    let mut rng = Lcg::new(seed);
    let mut order: Vec<u32> = (0..num_vars).collect();
    rng.shuffle(&mut order);
    let prefix = order
        .into_iter()
        .map(|v| (if rng.coin() { Quantifier::Forall } else { Quantifier::Exists }, v))
        .collect();
    let clauses = (0..num_clauses)
        .map(|_| [(); 3].map(|_| Literal { var: rng.below(num_vars), negated: rng.coin() }))
        .collect();
    Ok(QuantifiedFormula { num_vars, prefix, clauses })
}

/// A random monotone circuit. Each gate reads two distinct earlier wires,
/// at least one of them among the four most recent, so the output (the
/// last gate) depends on most of the circuit.
pub fn gen_circuit(num_inputs: usize, num_gates: usize, seed: u64) -> Result<MonotoneCircuit, GenError> {
    if num_inputs < 2 || num_gates == 0 {
        return Err(GenError::InfeasibleParameters("a circuit needs at least two inputs and one gate".into()));
    }
    let mut rng = Lcg::new(seed);
    let inputs: Vec<CircuitInput> =
        (0..num_inputs).map(|i| CircuitInput { name: format!("x{}", i + 1), value: rng.coin() }).collect();
    let mut gates = Vec::with_capacity(num_gates);
    for g in 0..num_gates {
        let wires = (num_inputs + g) as u32;
        let recent = wires.min(4);
        let a = wires - 1 - rng.below(recent);
        let mut b = rng.below(wires - 1);
        if b >= a {
            b += 1;
        }
        let op = if rng.coin() { GateOp::And } else { GateOp::Or };
        gates.push(Gate { name: format!("g{}", g + 1), op, inputs: [a, b] });
    }
    let output = (num_inputs + num_gates - 1) as u32;
    Ok(MonotoneCircuit { inputs, gates, output })
}

/// `layers` layers of `width` gates over `width` inputs, alternating AND and
/// OR, each gate reading two random wires of the layer below. The output is
/// the first gate of the last layer.
pub fn gen_layered_circuit(width: usize, layers: usize, seed: u64) -> Result<MonotoneCircuit, GenError> {
    if width < 2 || layers == 0 {
        return Err(GenError::InfeasibleParameters("a layered circuit needs width 2 and one layer".into()));
    }
    let mut rng = Lcg::new(seed);
    let inputs: Vec<CircuitInput> =
        (0..width).map(|i| CircuitInput { name: format!("x{}", i + 1), value: rng.coin() }).collect();
    let mut gates = Vec::with_capacity(width * layers);
    for layer in 0..layers {
        let below = (layer * width) as u32;
        let op = if layer % 2 == 0 { GateOp::And } else { GateOp::Or };
        for k in 0..width {
            let a = below + rng.below(width as u32);
            let mut b = below + rng.below(width as u32 - 1);
            if b >= a {
                b += 1;
            }
            gates.push(Gate { name: format!("l{}g{}", layer + 1, k + 1), op, inputs: [a, b] });
        }
    }
    let output = (width * layers) as u32;
    Ok(MonotoneCircuit { inputs, gates, output })
}

/// A loop-free digraph on `n` vertices with no repeated arcs and every in-
/// and out-degree at most two. Up to `max_arcs` random arcs are tried; those
/// that would break a bound are skipped.
pub fn gen_bounded_digraph(n: usize, max_arcs: usize, seed: u64) -> Result<DGraph, GenError> {
    if n < 2 {
        return Err(GenError::InfeasibleParameters(format!("need at least two vertices, got {n}")));
    }
    let mut rng = Lcg::new(seed);
    let (mut outs, mut ins) = (vec![0u8; n], vec![0u8; n]);
    let mut arcs: Vec<(u32, u32)> = Vec::new();
    for _ in 0..max_arcs {
        let u = rng.below(n as u32);
        let v = rng.below(n as u32 - 1);
        let v = if v >= u { v + 1 } else { v };
        if outs[u as usize] < 2 && ins[v as usize] < 2 && !arcs.contains(&(u, v)) {
            outs[u as usize] += 1;
            ins[v as usize] += 1;
            arcs.push((u, v));
        }
    }
    arcs.sort_unstable();
    Ok(DGraph { n, arcs })
}

/// Size limits for [`gen_arena_level`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ArenaGenParams {
    /// At least 2.
    pub max_vertices: u32,
    /// At least 1.
    pub max_edges: u32,
    pub max_doors: u32,
}

impl Default for ArenaGenParams {
    fn default() -> Self {
        ArenaGenParams { max_vertices: 6, max_edges: 9, max_doors: 4 }
    }
}

/// A small well-formed level mixing every feature: doors (some on no
/// edge), one-way, single-use and toll edges, plates, buttons, tokens and
/// keys under either capacity, must-visit vertices and sometimes an exit.
pub fn gen_arena_level(params: ArenaGenParams, seed: u64) -> Level {
    let mut rng = Lcg::new(seed);
    let n = rng.range(2, params.max_vertices.max(2));
    let mut level = Level::with_vertices(n as usize);
    let doors = rng.range(0, params.max_doors);
    level.doors = (0..doors).map(|id| DoorSpec { id, initially_open: rng.coin() }).collect();
    let m = rng.range(1, params.max_edges.max(1));
    let mut free_doors: Vec<u32> = (0..doors).collect();
    rng.shuffle(&mut free_doors);
    for id in 0..m {
        let from = rng.below(n);
        let to = (from + 1 + rng.below(n - 1)) % n;
        let door = if rng.below(3) == 0 { free_doors.pop() } else { None };
        level.edges.push(EdgeSpec {
            id,
            from,
            to,
            one_way: rng.below(4) == 0,
            single_use: rng.below(4) == 0,
            toll: u32::from(rng.below(4) == 0),
            door,
        });
    }
    let action = |rng: &mut Lcg| {
        let d = rng.below(doors);
        if rng.coin() {
            DoorAction::open(d)
        } else {
            DoorAction::close(d)
        }
    };
    for v in &mut level.vertices {
        v.must_visit = rng.below(3) == 0;
        v.tokens = if rng.below(4) == 0 { rng.range(1, 2) } else { 0 };
        v.keys = if rng.below(4) == 0 { rng.range(1, 2) } else { 0 };
        if doors > 0 {
            if rng.below(3) == 0 {
                v.plates.push(action(&mut rng));
            }
            for _ in 0..rng.below(3) {
                let k = rng.range(1, 2);
                v.buttons.push((0..k).map(|_| action(&mut rng)).collect());
            }
        }
    }
    level.token_capacity = if rng.coin() { Capacity::One } else { Capacity::Unbounded };
    level.key_capacity = if rng.coin() { Capacity::One } else { Capacity::Unbounded };
    level.initial_tokens = rng.below(2);
    level.initial_keys = rng.below(2);
    level.start = rng.below(n);
    if rng.coin() {
        level.require_exit = true;
        level.vertices[rng.below(n) as usize].exit = true;
    }
    level
}

/// Element counts for [`gen_ray_level`]; each count is drawn uniformly up
/// to its maximum.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RayGenParams {
    pub width: usize,
    pub height: usize,
    pub max_mirrors: u32,
    pub max_polarizers: u32,
    pub max_items: u32,
    /// Opaque cells, reflecting walls and mines, each up to this many.
    pub max_obstacles: u32,
}

impl Default for RayGenParams {
    fn default() -> Self {
        RayGenParams { width: 8, height: 8, max_mirrors: 5, max_polarizers: 4, max_items: 2, max_obstacles: 8 }
    }
}

/// A ray level with one beam and one exit at random cells. Polarizers are
/// static or rotating with equal odds, and a teleporter pair is added half
/// of the time.
pub fn gen_ray_level(params: RayGenParams, seed: u64) -> Result<RayLevel, GenError> {
    let RayGenParams { width, height, max_mirrors, max_polarizers, max_items, max_obstacles } = params;
    let size = width * height;
    let worst = 4 + (max_mirrors + max_polarizers + max_items + 3 * max_obstacles) as usize;
    if size < worst {
        return Err(GenError::InfeasibleParameters(format!("{width}x{height} grid cannot hold up to {worst} elements")));
    }
    let mut rng = Lcg::new(seed);
    let mut free: Vec<usize> = (0..size).collect();
    rng.shuffle(&mut free);
    let mut cells = vec![Cell::Empty; size];
    let mut place = |c: Cell| cells[free.pop().expect("size checked above")] = c;
    place(Cell::Beam);
    place(Cell::Exit);
    for _ in 0..rng.range(0, max_mirrors) {
        place(Cell::Mirror);
    }
    for _ in 0..rng.range(0, max_polarizers) {
        let orientation = rng.below(8) as u8;
        place(if rng.coin() { Cell::Rotating(orientation) } else { Cell::Polarizer(orientation) });
    }
    for _ in 0..rng.range(0, max_items) {
        place(Cell::Item);
    }
    for obstacle in [Cell::Opaque, Cell::Reflecting, Cell::Mine] {
        for _ in 0..rng.range(0, max_obstacles) {
            place(obstacle);
        }
    }
    if rng.coin() {
        place(Cell::Teleporter(b'a'));
        place(Cell::Teleporter(b'a'));
    }
    Ok(RayLevel::new(width, height, cells).expect("one beam, one exit, paired teleporters"))
}
