//! Source problems that get compiled into levels.

use std::fmt;

use thiserror::Error;

/// Simple undirected graph on vertices `0..n`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct UGraph {
    pub n: usize,
    pub edges: Vec<(u32, u32)>,
}

/// Directed graph on vertices `0..n`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct DGraph {
    pub n: usize,
    pub arcs: Vec<(u32, u32)>,
}

impl UGraph {
    pub fn new(n: usize, edges: Vec<(u32, u32)>) -> Self {
        UGraph { n, edges }
    }

    pub fn complete(n: usize) -> Self {
        let mut edges = Vec::new();
        for a in 0..n as u32 {
            for b in a + 1..n as u32 {
                edges.push((a, b));
            }
        }
        UGraph { n, edges }
    }

    pub fn petersen() -> Self {
        let mut edges = Vec::new();
        for i in 0..5u32 {
            edges.push((i, (i + 1) % 5));
            edges.push((i, i + 5));
            edges.push((i + 5, (i + 2) % 5 + 5));
        }
        UGraph { n: 10, edges }
    }

    /// The 3-dimensional hypercube.
    pub fn cube() -> Self {
        let mut edges = Vec::new();
        for a in 0..8u32 {
            for bit in [1, 2, 4] {
                if a & bit == 0 {
                    edges.push((a, a | bit));
                }
            }
        }
        UGraph { n: 8, edges }
    }

    pub fn degrees(&self) -> Vec<usize> {
        let mut deg = vec![0; self.n];
        for &(a, b) in &self.edges {
            deg[a as usize] += 1;
            deg[b as usize] += 1;
        }
        deg
    }

    pub fn neighbours(&self) -> Vec<Vec<u32>> {
        let mut adj = vec![Vec::new(); self.n];
        for &(a, b) in &self.edges {
            adj[a as usize].push(b);
            adj[b as usize].push(a);
        }
        adj
    }

    /// `Err(vertex)` names the first vertex whose degree is not 3.
    pub fn check_cubic(&self) -> Result<(), u32> {
        match self.degrees().iter().position(|&d| d != 3) {
            Some(v) => Err(v as u32),
            None => Ok(()),
        }
    }

    pub fn is_simple(&self) -> bool {
        let mut seen = std::collections::HashSet::new();
        self.edges.iter().all(|&(a, b)| a != b && seen.insert((a.min(b), a.max(b))))
    }

    pub fn is_connected(&self) -> bool {
        if self.n == 0 {
            return true;
        }
        let adj = self.neighbours();
        let mut seen = vec![false; self.n];
        let mut stack = vec![0u32];
        seen[0] = true;
        while let Some(v) = stack.pop() {
            for &w in &adj[v as usize] {
                if !std::mem::replace(&mut seen[w as usize], true) {
                    stack.push(w);
                }
            }
        }
        seen.into_iter().all(|s| s)
    }

    /// Euler's bound `m <= 3n - 6`; a necessary condition only, reported as
    /// an advisory flag since levels are not embedded in the plane.
    pub fn may_be_planar(&self) -> bool {
        self.n < 3 || self.edges.len() <= 3 * self.n - 6
    }
}

impl DGraph {
    pub fn new(n: usize, arcs: Vec<(u32, u32)>) -> Self {
        DGraph { n, arcs }
    }

    /// (indegree, outdegree) per vertex.
    pub fn degrees(&self) -> Vec<(usize, usize)> {
        let mut deg = vec![(0, 0); self.n];
        for &(a, b) in &self.arcs {
            deg[a as usize].1 += 1;
            deg[b as usize].0 += 1;
        }
        deg
    }

    pub fn successors(&self) -> Vec<Vec<u32>> {
        let mut adj = vec![Vec::new(); self.n];
        for &(a, b) in &self.arcs {
            adj[a as usize].push(b);
        }
        adj
    }

    /// Every vertex has (in 1, out 2) or (in 2, out 1). `Err(vertex)` otherwise.
    pub fn check_degree_valid(&self) -> Result<(), u32> {
        match self.degrees().iter().position(|&d| d != (1, 2) && d != (2, 1)) {
            Some(v) => Err(v as u32),
            None => Ok(()),
        }
    }

    /// Lowest vertex with indegree 2 and outdegree 1.
    pub fn start_candidate(&self) -> Option<u32> {
        self.degrees().iter().position(|&d| d == (2, 1)).map(|v| v as u32)
    }

    /// Every vertex has indegree and outdegree at most 2. `Err(vertex)` otherwise.
    pub fn check_max_degree_two(&self) -> Result<(), u32> {
        match self.degrees().iter().position(|&(i, o)| i > 2 || o > 2) {
            Some(v) => Err(v as u32),
            None => Ok(()),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Quantifier {
    Exists,
    Forall,
}

/// Variable `var` (0-based), possibly negated.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Literal {
    pub var: u32,
    pub negated: bool,
}

impl Literal {
    pub fn pos(var: u32) -> Self {
        Literal { var, negated: false }
    }

    pub fn neg(var: u32) -> Self {
        Literal { var, negated: true }
    }

    pub fn holds(&self, value: bool) -> bool {
        value != self.negated
    }
}

impl fmt::Display for Literal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.negated {
            write!(f, "-x{}", self.var + 1)
        } else {
            write!(f, "x{}", self.var + 1)
        }
    }
}

pub type Clause = [Literal; 3];

/// A prenex formula with a 3-CNF matrix.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct QuantifiedFormula {
    /// Number of variables; ids are `0..num_vars`.
    pub num_vars: u32,
    pub prefix: Vec<(Quantifier, u32)>,
    pub clauses: Vec<Clause>,
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum FormulaError {
    #[error("variable {0} is quantified more than once")]
    DuplicateQuantifier(u32),
    #[error("variable {0} occurs in the matrix but is not quantified")]
    Unquantified(u32),
    #[error("variable {0} exceeds the declared variable count")]
    OutOfRange(u32),
}

impl QuantifiedFormula {
    pub fn validate(&self) -> Result<(), FormulaError> {
        let mut quantified = vec![false; self.num_vars as usize];
        for &(_, v) in &self.prefix {
            let slot = quantified.get_mut(v as usize).ok_or(FormulaError::OutOfRange(v))?;
            if std::mem::replace(slot, true) {
                return Err(FormulaError::DuplicateQuantifier(v));
            }
        }
        for lit in self.clauses.iter().flatten() {
            if !quantified.get(lit.var as usize).copied().unwrap_or(false) {
                return Err(FormulaError::Unquantified(lit.var));
            }
        }
        Ok(())
    }

    pub fn universal_count(&self) -> usize {
        self.prefix.iter().filter(|p| p.0 == Quantifier::Forall).count()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum GateOp {
    And,
    Or,
}

/// Wire ids: inputs first (`0..inputs.len()`), then one wire per gate.
pub type WireId = u32;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Gate {
    pub name: String,
    pub op: GateOp,
    pub inputs: [WireId; 2],
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CircuitInput {
    pub name: String,
    pub value: bool,
}

/// A fan-in-2 AND/OR circuit without negations.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct MonotoneCircuit {
    pub inputs: Vec<CircuitInput>,
    pub gates: Vec<Gate>,
    pub output: WireId,
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum CircuitError {
    #[error("gate {gate} reads wire {wire}, which is not defined before it")]
    NotTopological { gate: usize, wire: WireId },
    #[error("output wire {0} does not exist")]
    BadOutput(WireId),
}

impl MonotoneCircuit {
    pub fn wire_count(&self) -> usize {
        self.inputs.len() + self.gates.len()
    }

    pub fn gate_wire(&self, gate: usize) -> WireId {
        (self.inputs.len() + gate) as WireId
    }

    pub fn wire_name(&self, wire: WireId) -> &str {
        let w = wire as usize;
        if w < self.inputs.len() {
            &self.inputs[w].name
        } else {
            &self.gates[w - self.inputs.len()].name
        }
    }

    /// Gates may only read inputs or earlier gates.
    pub fn validate(&self) -> Result<(), CircuitError> {
        for (g, gate) in self.gates.iter().enumerate() {
            let own = self.gate_wire(g);
            for &w in &gate.inputs {
                if w >= own {
                    return Err(CircuitError::NotTopological { gate: g, wire: w });
                }
            }
        }
        if self.output as usize >= self.wire_count() {
            return Err(CircuitError::BadOutput(self.output));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn classic_graphs_are_cubic() {
        for g in [UGraph::complete(4), UGraph::cube(), UGraph::petersen()] {
            assert_eq!(g.check_cubic(), Ok(()));
            assert!(g.is_simple() && g.is_connected());
        }
        assert_eq!(UGraph::petersen().edges.len(), 15);
        assert!(UGraph::cube().may_be_planar());
    }

    #[test]
    fn formula_validation() {
        let f = QuantifiedFormula {
            num_vars: 2,
            prefix: vec![(Quantifier::Exists, 0)],
            clauses: vec![[Literal::pos(0), Literal::pos(1), Literal::neg(0)]],
        };
        assert_eq!(f.validate(), Err(FormulaError::Unquantified(1)));
    }

    #[test]
    fn circuit_validation() {
        let c = MonotoneCircuit {
            inputs: vec![CircuitInput { name: "a".into(), value: true }],
            gates: vec![Gate { name: "g".into(), op: GateOp::And, inputs: [0, 1] }],
            output: 1,
        };
        assert_eq!(c.validate(), Err(CircuitError::NotTopological { gate: 0, wire: 1 }));
    }
}
