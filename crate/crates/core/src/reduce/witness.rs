use super::gadgets::{traverse, QuantPlan};
use super::{LevelBundle, ReduceError};
use crate::arena::{EdgeId, Move};
use crate::instance::{GateOp, Literal, MonotoneCircuit, WireId};
use crate::oracle::Strategy;
use crate::solver::Certificate;

/// A yes-answer from the matching oracle.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum OracleSolution {
    /// Vertices of a Hamiltonian cycle in order.
    Cycle(Vec<u32>),
    Strategy(Strategy),
    /// Value of every wire, inputs first.
    Evaluation(Vec<bool>),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) enum Plan {
    Hamilton(HamPlan),
    Circuit(CircuitPlan),
    Tqbf(TqbfPlan),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) struct HamPlan {
    pub directed: bool,
    pub start: u32,
    pub arcs: Vec<(u32, u32)>,
    /// Moves crossing each source edge forwards and (undirected) backwards.
    pub routes: Vec<(Vec<Move>, Vec<Move>)>,
    /// Moves made on the first arrival at each vertex, or at the start.
    pub on_visit: Vec<Vec<Move>>,
    /// From the start, after closing the cycle, to the end of play.
    pub finish: Vec<Move>,
}

/// One way to visit a wire's chamber from the hub and come back.
#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) struct Visit {
    /// Wire that must be true for this route to be open.
    pub needs: Option<WireId>,
    pub go: Vec<Move>,
    pub back: Vec<Move>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) struct CircuitPlan {
    pub circuit: MonotoneCircuit,
    pub visits: Vec<Vec<Visit>>,
    pub exit: Vec<Move>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) struct TqbfPlan {
    pub num_vars: u32,
    pub gadgets: Vec<QuantPlan>,
    pub marked: EdgeId,
    pub clause_edges: Vec<Vec<(Literal, EdgeId)>>,
    pub to_bottom: EdgeId,
    pub exit: EdgeId,
}

fn mismatch(msg: impl Into<String>) -> ReduceError {
    ReduceError::SolutionMismatch(msg.into())
}

/// The play each construction intends for a given solution.
///
/// * Hamiltonian reductions follow the cycle from the start vertex, then
///   walk to the dangling exit.
/// * Circuit reductions visit every true wire's chamber in wire order, then
///   step through the exit door.
/// * Formula reductions run the existential strategy: one clause-row pass
///   per universal assignment, backtracking through the bottom row.
pub fn canonical_witness(bundle: &LevelBundle, solution: &OracleSolution) -> Result<Certificate, ReduceError> {
    let moves = match (&bundle.plan, solution) {
        (Plan::Hamilton(p), OracleSolution::Cycle(c)) => hamilton(p, c)?,
        (Plan::Circuit(p), OracleSolution::Evaluation(v)) => circuit(p, v)?,
        (Plan::Tqbf(p), OracleSolution::Strategy(s)) => tqbf(p, s)?,
        _ => return Err(mismatch("solution kind does not match the reduction")),
    };
    Ok(Certificate::new(moves))
}

fn hamilton(p: &HamPlan, cycle: &[u32]) -> Result<Vec<Move>, ReduceError> {
    let n = p.on_visit.len();
    let mut seen = vec![false; n];
    if cycle.len() != n || cycle.iter().any(|&v| v as usize >= n || std::mem::replace(&mut seen[v as usize], true)) {
        return Err(mismatch("cycle is not a permutation of the vertices"));
    }
    let at = cycle.iter().position(|&v| v == p.start).expect("permutation contains the start");
    let order: Vec<u32> = cycle[at..].iter().chain(&cycle[..at]).copied().collect();

    let mut used = vec![false; p.arcs.len()];
    let mut moves = p.on_visit[p.start as usize].clone();
    for i in 0..n {
        let (a, b) = (order[i], order[(i + 1) % n]);
        let pick = p.arcs.iter().enumerate().find_map(|(j, &(x, y))| {
            if used[j] {
                None
            } else if (x, y) == (a, b) {
                Some((j, false))
            } else if !p.directed && (y, x) == (a, b) {
                Some((j, true))
            } else {
                None
            }
        });
        let (j, reversed) = pick.ok_or_else(|| mismatch(format!("no unused edge from {a} to {b}")))?;
        used[j] = true;
        let route = if reversed { &p.routes[j].1 } else { &p.routes[j].0 };
        moves.extend(route);
        if b != p.start {
            moves.extend(&p.on_visit[b as usize]);
        }
    }
    moves.extend(&p.finish);
    Ok(moves)
}

fn circuit(p: &CircuitPlan, values: &[bool]) -> Result<Vec<Move>, ReduceError> {
    let c = &p.circuit;
    if values.len() != c.wire_count() {
        return Err(mismatch("evaluation has the wrong number of wires"));
    }
    for (i, input) in c.inputs.iter().enumerate() {
        if values[i] != input.value {
            return Err(mismatch(format!("input {} has the wrong value", input.name)));
        }
    }
    for (g, gate) in c.gates.iter().enumerate() {
        let [a, b] = gate.inputs.map(|w| values[w as usize]);
        let expect = match gate.op {
            GateOp::And => a && b,
            GateOp::Or => a || b,
        };
        if values[c.gate_wire(g) as usize] != expect {
            return Err(mismatch(format!("gate {} has the wrong value", gate.name)));
        }
    }
    if !values[c.output as usize] {
        return Err(mismatch("the circuit output is false"));
    }
    let mut moves = Vec::new();
    for (w, visits) in p.visits.iter().enumerate() {
        if !values[w] {
            continue;
        }
        let visit = visits
            .iter()
            .find(|v| v.needs.is_none_or(|n| values[n as usize]))
            .expect("a true wire has an open route");
        moves.extend(&visit.go);
        moves.extend(&visit.back);
    }
    moves.extend(&p.exit);
    Ok(moves)
}

struct TqbfWalk<'a> {
    plan: &'a TqbfPlan,
    assignment: Vec<bool>,
    moves: Vec<Move>,
}

impl TqbfWalk<'_> {
    /// Plays gadgets `depth..` from the top row down and back to the bottom
    /// row below `depth`.
    fn play(&mut self, depth: usize, s: &Strategy) -> Result<(), ReduceError> {
        let Some(gadget) = self.plan.gadgets.get(depth) else {
            if *s != Strategy::Done {
                return Err(mismatch("strategy is deeper than the prefix"));
            }
            return self.evaluate();
        };
        match (gadget, s) {
            (QuantPlan::Exists { var, set_true, set_false, back }, Strategy::Exists { var: sv, value, then })
                if var == sv =>
            {
                self.assignment[*var as usize] = *value;
                self.moves.extend(if *value { set_true } else { set_false });
                self.play(depth + 1, then)?;
                self.moves.extend(back);
            }
            (QuantPlan::Forall { var, first, again, back }, Strategy::Forall { var: sv, if_true, if_false })
                if var == sv =>
            {
                self.assignment[*var as usize] = true;
                self.moves.extend(first);
                self.play(depth + 1, if_true)?;
                self.assignment[*var as usize] = false;
                self.moves.extend(again);
                self.play(depth + 1, if_false)?;
                self.moves.extend(back);
            }
            _ => return Err(mismatch(format!("strategy does not follow the prefix at position {depth}"))),
        }
        Ok(())
    }

    fn evaluate(&mut self) -> Result<(), ReduceError> {
        self.moves.push(traverse(self.plan.marked));
        for (j, lits) in self.plan.clause_edges.iter().enumerate() {
            let &(_, e) = lits
                .iter()
                .find(|(lit, _)| lit.holds(self.assignment[lit.var as usize]))
                .ok_or_else(|| mismatch(format!("clause {j} is false under the strategy")))?;
            self.moves.push(traverse(e));
        }
        self.moves.push(traverse(self.plan.to_bottom));
        Ok(())
    }
}

fn tqbf(p: &TqbfPlan, s: &Strategy) -> Result<Vec<Move>, ReduceError> {
    let mut walk = TqbfWalk { plan: p, assignment: vec![false; p.num_vars as usize], moves: Vec::new() };
    walk.play(0, s)?;
    walk.moves.push(traverse(p.exit));
    Ok(walk.moves)
}
