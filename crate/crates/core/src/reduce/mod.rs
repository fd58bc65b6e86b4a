//! Compilers from hard source problems into levels.
//!
//! | selector | source | level features |
//! |---|---|---|
//! | `1` | cubic graph | must-visit, single-use edges |
//! | `1b-a/b/c` | cubic graph | tokens and toll edges |
//! | `1c-a/b/c` | degree-valid digraph | keys, doors, one-way edges |
//! | `2a` / `3a` | monotone circuit | doors opened by plates / 1-buttons |
//! | `2b` / `3b` | digraph / cubic graph | closing plates / 2-buttons |
//! | `2c` / `3c` | quantified 3-CNF | doors driven by plates / 3-buttons |
//!
//! Every reduction also records a private move plan, from which
//! [`canonical_witness`] turns an oracle's solution into a winning
//! certificate without searching.

mod builder;
mod circuit;
mod gadgets;
mod hamilton;
mod tqbf;
mod witness;

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::arena::{EdgeId, Level, VertexId};
use crate::instance::{CircuitError, DGraph, FormulaError, MonotoneCircuit, QuantifiedFormula, UGraph};

pub use circuit::reduce_circuit_value;
pub use gadgets::{build_gadget, Actuator, Fragment, GadgetKind};
pub use hamilton::{reduce_meta1, reduce_meta1b, reduce_meta1c, reduce_meta2b, reduce_meta3b, Variant};
pub use tqbf::reduce_tqbf;
pub use witness::{canonical_witness, OracleSolution};

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum ReduceError {
    #[error("vertex {vertex} violates the degree requirement")]
    DegreeViolation { vertex: u32 },
    #[error("no vertex has indegree 2 and outdegree 1")]
    NoValidStartVertex,
    #[error("malformed circuit: {0}")]
    MalformedCircuit(#[from] CircuitError),
    #[error("malformed formula: {0}")]
    MalformedFormula(#[from] FormulaError),
    #[error("bad parameters: {0}")]
    BadParams(String),
    #[error("solution does not fit the instance: {0}")]
    SolutionMismatch(String),
}

/// An object of the source instance.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Role {
    Vertex(u32),
    Edge(u32),
    /// The extra vertex hanging off the start.
    Dangling,
    Variable(u32),
    Clause(u32),
    Input(u32),
    Gate(u32),
    Output,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Target {
    Vertex(VertexId),
    Edge(EdgeId),
}

/// A reduced level together with its provenance.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LevelBundle {
    pub level: Level,
    pub role_map: BTreeMap<Role, Target>,
    /// Clause-row entry for the quantified-formula reductions.
    pub marked_edge: Option<EdgeId>,
    /// Whether one-way edges were needed beyond the construction's own
    /// element set.
    pub uses_one_way: bool,
    pub(crate) plan: witness::Plan,
}

/// Reduction selector, as written on the command line.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Meta {
    M1,
    M1bA,
    M1bB,
    M1bC,
    M1cA,
    M1cB,
    M1cC,
    M2a,
    M2b,
    M2c,
    M3a,
    M3b,
    M3c,
}

/// What kind of instance a [`Meta`] consumes.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SourceKind {
    UGraph,
    DGraph,
    Formula,
    Circuit,
}

const META_NAMES: [(Meta, &str); 13] = [
    (Meta::M1, "1"),
    (Meta::M1bA, "1b-a"),
    (Meta::M1bB, "1b-b"),
    (Meta::M1bC, "1b-c"),
    (Meta::M1cA, "1c-a"),
    (Meta::M1cB, "1c-b"),
    (Meta::M1cC, "1c-c"),
    (Meta::M2a, "2a"),
    (Meta::M2b, "2b"),
    (Meta::M2c, "2c"),
    (Meta::M3a, "3a"),
    (Meta::M3b, "3b"),
    (Meta::M3c, "3c"),
];

impl Meta {
    pub fn all() -> impl Iterator<Item = Meta> {
        META_NAMES.iter().map(|&(m, _)| m)
    }

    pub fn name(self) -> &'static str {
        META_NAMES.iter().find(|(m, _)| *m == self).map(|(_, n)| *n).expect("every selector is named")
    }

    pub fn source(self) -> SourceKind {
        use Meta::*;
        match self {
            M1 | M1bA | M1bB | M1bC | M3b => SourceKind::UGraph,
            M1cA | M1cB | M1cC | M2b => SourceKind::DGraph,
            M2a | M3a => SourceKind::Circuit,
            M2c | M3c => SourceKind::Formula,
        }
    }
}

impl fmt::Display for Meta {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Meta {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        META_NAMES
            .iter()
            .find(|(_, n)| *n == s)
            .map(|&(m, _)| m)
            .ok_or_else(|| format!("unknown reduction {s:?}"))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Instance {
    UGraph(UGraph),
    DGraph(DGraph),
    Formula(QuantifiedFormula),
    Circuit(MonotoneCircuit),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ReduceOptions {
    /// Distinguished start vertex for the undirected constructions.
    pub vertex: u32,
    /// Exit requirement for the plain single-use construction.
    pub require_exit: bool,
}

impl Default for ReduceOptions {
    fn default() -> Self {
        ReduceOptions { vertex: 0, require_exit: true }
    }
}

/// Runs the reduction named by `meta`.
pub fn reduce(meta: Meta, instance: &Instance, opts: &ReduceOptions) -> Result<LevelBundle, ReduceError> {
    use Meta::*;
    let wrong = || ReduceError::BadParams(format!("reduction {meta} cannot take this kind of instance"));
    match (meta, instance) {
        (M1, Instance::UGraph(g)) => reduce_meta1(g, opts.vertex, opts.require_exit),
        (M1bA, Instance::UGraph(g)) => reduce_meta1b(g, opts.vertex, Variant::A),
        (M1bB, Instance::UGraph(g)) => reduce_meta1b(g, opts.vertex, Variant::B),
        (M1bC, Instance::UGraph(g)) => reduce_meta1b(g, opts.vertex, Variant::C),
        (M3b, Instance::UGraph(g)) => reduce_meta3b(g, opts.vertex),
        (M1cA, Instance::DGraph(g)) => reduce_meta1c(g, Variant::A),
        (M1cB, Instance::DGraph(g)) => reduce_meta1c(g, Variant::B),
        (M1cC, Instance::DGraph(g)) => reduce_meta1c(g, Variant::C),
        (M2b, Instance::DGraph(g)) => reduce_meta2b(g),
        (M2a, Instance::Circuit(c)) => reduce_circuit_value(c, Actuator::Plate),
        (M3a, Instance::Circuit(c)) => reduce_circuit_value(c, Actuator::Button1),
        (M2c, Instance::Formula(f)) => reduce_tqbf(f, Actuator::Plate),
        (M3c, Instance::Formula(f)) => reduce_tqbf(f, Actuator::Button3),
        _ => Err(wrong()),
    }
}
