//! Brute-force ground truth for every source problem.
//!
//! Nothing here depends on the reducers or the level solvers, so agreement
//! between an oracle and a solved level is independent evidence.

use std::collections::VecDeque;

use thiserror::Error;

use crate::instance::{DGraph, GateOp, MonotoneCircuit, QuantifiedFormula, Quantifier, UGraph};

pub const DEFAULT_HAM_BOUND: usize = 12;
pub const MAX_QBF_VARS: u32 = 20;

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("instance too large for brute force: {size} > {bound}")]
    TooLarge { size: usize, bound: usize },
    #[error("circuit contains a cycle through wire {0}")]
    CyclicCircuit(u32),
    #[error("circuit refers to missing wire {0}")]
    MissingWire(u32),
}

/// A yes/no answer; `witness` is present exactly when the answer is yes.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OracleAnswer<W> {
    pub decision: bool,
    pub witness: Option<W>,
}

impl<W> OracleAnswer<W> {
    fn yes(w: W) -> Self {
        OracleAnswer { decision: true, witness: Some(w) }
    }

    fn no() -> Self {
        OracleAnswer { decision: false, witness: None }
    }
}

/// Hamiltonian cycle as a vertex order; the closing edge returns to `cycle[0]`.
pub type Cycle = Vec<u32>;

struct HamSearch<'a> {
    n: usize,
    /// (neighbour, edge id) lists.
    adj: &'a [Vec<(u32, usize)>],
    /// Reverse adjacency, used for pruning only.
    radj: &'a [Vec<(u32, usize)>],
    on_path: Vec<bool>,
    used_edge: Vec<bool>,
    path: Vec<u32>,
}

impl HamSearch<'_> {
    fn run(&mut self) -> bool {
        let last = *self.path.last().expect("non-empty path");
        if self.path.len() == self.n {
            return self.adj[last as usize]
                .iter()
                .any(|&(w, e)| w == self.path[0] && !self.used_edge[e]);
        }
        if !self.prune_ok(last) {
            return false;
        }
        for i in 0..self.adj[last as usize].len() {
            let (w, e) = self.adj[last as usize][i];
            if self.on_path[w as usize] || self.used_edge[e] {
                continue;
            }
            self.on_path[w as usize] = true;
            self.used_edge[e] = true;
            self.path.push(w);
            if self.run() {
                return true;
            }
            self.path.pop();
            self.used_edge[e] = false;
            self.on_path[w as usize] = false;
        }
        false
    }

    /// Every unvisited vertex still needs a way in from the path's end or
    /// another unvisited vertex.
    fn prune_ok(&self, last: u32) -> bool {
        (0..self.n).filter(|&v| !self.on_path[v]).all(|v| {
            self.radj[v]
                .iter()
                .any(|&(w, _)| w == last || !self.on_path[w as usize])
        })
    }
}

fn ham_cycle(n: usize, arcs: &[(u32, u32)], directed: bool, bound: usize) -> Result<OracleAnswer<Cycle>, OracleError> {
    if n > bound {
        return Err(OracleError::TooLarge { size: n, bound });
    }
    if n == 0 {
        return Ok(OracleAnswer::no());
    }
    let mut adj = vec![Vec::new(); n];
    let mut radj = vec![Vec::new(); n];
    for (e, &(a, b)) in arcs.iter().enumerate() {
        adj[a as usize].push((b, e));
        radj[b as usize].push((a, e));
        if !directed && a != b {
            adj[b as usize].push((a, e));
            radj[a as usize].push((b, e));
        }
    }
    let mut search = HamSearch {
        n,
        adj: &adj,
        radj: &radj,
        on_path: vec![false; n],
        used_edge: vec![false; arcs.len()],
        path: vec![0],
    };
    search.on_path[0] = true;
    Ok(if search.run() { OracleAnswer::yes(search.path) } else { OracleAnswer::no() })
}

pub fn ham_cycle_undirected(g: &UGraph, bound: usize) -> Result<OracleAnswer<Cycle>, OracleError> {
    ham_cycle(g.n, &g.edges, false, bound)
}

pub fn ham_cycle_directed(g: &DGraph, bound: usize) -> Result<OracleAnswer<Cycle>, OracleError> {
    ham_cycle(g.n, &g.arcs, true, bound)
}

/// Checks that `cycle` visits every vertex once and that its edges exist,
/// each used at most once.
pub fn verify_cycle(n: usize, arcs: &[(u32, u32)], directed: bool, cycle: &[u32]) -> bool {
    if cycle.len() != n || n == 0 {
        return false;
    }
    let mut seen = vec![false; n];
    if cycle.iter().any(|&v| v as usize >= n || std::mem::replace(&mut seen[v as usize], true)) {
        return false;
    }
    let mut used = vec![false; arcs.len()];
    (0..n).all(|i| {
        let (a, b) = (cycle[i], cycle[(i + 1) % n]);
        let found = arcs.iter().enumerate().position(|(e, &(x, y))| {
            !used[e] && ((x, y) == (a, b) || (!directed && (y, x) == (a, b)))
        });
        match found {
            Some(e) => {
                used[e] = true;
                true
            }
            None => false,
        }
    })
}

/// Winning strategy for the existential player.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Strategy {
    /// Matrix reached with every clause satisfied.
    Done,
    Exists { var: u32, value: bool, then: Box<Strategy> },
    Forall { var: u32, if_true: Box<Strategy>, if_false: Box<Strategy> },
}

fn matrix_holds(f: &QuantifiedFormula, assignment: &[bool]) -> bool {
    f.clauses
        .iter()
        .all(|c| c.iter().any(|l| l.holds(assignment[l.var as usize])))
}

fn eval_from(f: &QuantifiedFormula, depth: usize, assignment: &mut Vec<bool>) -> Option<Strategy> {
    let Some(&(q, var)) = f.prefix.get(depth) else {
        return matrix_holds(f, assignment).then_some(Strategy::Done);
    };
    let branch = |value: bool, assignment: &mut Vec<bool>| {
        assignment[var as usize] = value;
        eval_from(f, depth + 1, assignment)
    };
    match q {
        Quantifier::Exists => {
            for value in [true, false] {
                if let Some(s) = branch(value, assignment) {
                    return Some(Strategy::Exists { var, value, then: Box::new(s) });
                }
            }
            None
        }
        Quantifier::Forall => {
            let if_true = branch(true, assignment)?;
            let if_false = branch(false, assignment)?;
            Some(Strategy::Forall { var, if_true: Box::new(if_true), if_false: Box::new(if_false) })
        }
    }
}

/// Recursive evaluation: ∃ is an or over both values, ∀ an and.
pub fn eval_qbf(f: &QuantifiedFormula) -> Result<OracleAnswer<Strategy>, OracleError> {
    if f.num_vars > MAX_QBF_VARS {
        return Err(OracleError::TooLarge { size: f.num_vars as usize, bound: MAX_QBF_VARS as usize });
    }
    let mut assignment = vec![false; f.num_vars as usize];
    Ok(match eval_from(f, 0, &mut assignment) {
        Some(s) => OracleAnswer::yes(s),
        None => OracleAnswer::no(),
    })
}

/// Walks every universal branch of `strategy` and checks the matrix at each leaf.
pub fn verify_strategy(f: &QuantifiedFormula, strategy: &Strategy) -> bool {
    fn walk(f: &QuantifiedFormula, depth: usize, s: &Strategy, assignment: &mut Vec<bool>) -> bool {
        match (f.prefix.get(depth), s) {
            (None, Strategy::Done) => matrix_holds(f, assignment),
            (Some(&(Quantifier::Exists, v)), Strategy::Exists { var, value, then }) if v == *var => {
                assignment[v as usize] = *value;
                walk(f, depth + 1, then, assignment)
            }
            (Some(&(Quantifier::Forall, v)), Strategy::Forall { var, if_true, if_false }) if v == *var => {
                assignment[v as usize] = true;
                if !walk(f, depth + 1, if_true, assignment) {
                    return false;
                }
                assignment[v as usize] = false;
                walk(f, depth + 1, if_false, assignment)
            }
            _ => false,
        }
    }
    walk(f, 0, strategy, &mut vec![false; f.num_vars as usize])
}

/// Value of every wire, inputs first.
pub type Evaluation = Vec<bool>;

/// Evaluates by depth-first recursion with cycle detection, so gate order
/// in the input does not matter.
pub fn eval_circuit(c: &MonotoneCircuit) -> Result<OracleAnswer<Evaluation>, OracleError> {
    #[derive(Clone, Copy, PartialEq)]
    enum Mark {
        Fresh,
        Active,
        Done(bool),
    }
    let wires = c.inputs.len() + c.gates.len();
    let mut marks = vec![Mark::Fresh; wires];
    for (i, input) in c.inputs.iter().enumerate() {
        marks[i] = Mark::Done(input.value);
    }

    fn visit(c: &MonotoneCircuit, w: u32, marks: &mut [Mark]) -> Result<bool, OracleError> {
        match marks.get(w as usize).copied() {
            None => Err(OracleError::MissingWire(w)),
            Some(Mark::Done(v)) => Ok(v),
            Some(Mark::Active) => Err(OracleError::CyclicCircuit(w)),
            Some(Mark::Fresh) => {
                marks[w as usize] = Mark::Active;
                let gate = &c.gates[w as usize - c.inputs.len()];
                let a = visit(c, gate.inputs[0], marks)?;
                let b = visit(c, gate.inputs[1], marks)?;
                let v = match gate.op {
                    GateOp::And => a && b,
                    GateOp::Or => a || b,
                };
                marks[w as usize] = Mark::Done(v);
                Ok(v)
            }
        }
    }

    for w in 0..wires as u32 {
        visit(c, w, &mut marks)?;
    }
    let out = visit(c, c.output, &mut marks)?;
    let values: Evaluation = marks
        .into_iter()
        .map(|m| match m {
            Mark::Done(v) => v,
            _ => unreachable!("all wires evaluated"),
        })
        .collect();
    Ok(if out { OracleAnswer::yes(values) } else { OracleAnswer::no() })
}

/// Breadth-first search from `s`; the witness is a shortest vertex path.
pub fn connectivity(n: usize, edges: &[(u32, u32)], s: u32, t: u32, directed: bool) -> OracleAnswer<Vec<u32>> {
    let mut adj = vec![Vec::new(); n];
    for &(a, b) in edges {
        adj[a as usize].push(b);
        if !directed {
            adj[b as usize].push(a);
        }
    }
    let mut prev = vec![u32::MAX; n];
    let mut seen = vec![false; n];
    let mut queue = VecDeque::from([s]);
    seen[s as usize] = true;
    while let Some(v) = queue.pop_front() {
        if v == t {
            let mut path = vec![t];
            let mut cur = t;
            while cur != s {
                cur = prev[cur as usize];
                path.push(cur);
            }
            path.reverse();
            return OracleAnswer::yes(path);
        }
        for &w in &adj[v as usize] {
            if !std::mem::replace(&mut seen[w as usize], true) {
                prev[w as usize] = v;
                queue.push_back(w);
            }
        }
    }
    OracleAnswer::no()
}

pub fn verify_path(edges: &[(u32, u32)], directed: bool, s: u32, t: u32, path: &[u32]) -> bool {
    path.first() == Some(&s)
        && path.last() == Some(&t)
        && path.windows(2).all(|w| {
            edges
                .iter()
                .any(|&(a, b)| (a, b) == (w[0], w[1]) || (!directed && (b, a) == (w[0], w[1])))
        })
}
