//! Exact decision procedures for levels.
//!
//! * [`check_certificate`] replays a move list.
//! * [`solve_exhaustive`] runs a breadth-first search over the whole finite
//!   state space, deduplicating on the complete [`GameState`].
//! * [`solve_monotone`] is the polynomial fixpoint for levels whose doors can
//!   only ever open.

mod codec;
mod monotone;

use std::fmt;

use indexmap::IndexSet;

use crate::arena::{apply_move, initial_state, is_won, legal_moves_with, IllegalMove, Level, Move};
use codec::StateCodec;

pub use monotone::{solve_monotone, solve_monotone_report, MonotoneError, MonotoneFeature, MonotoneReport};

pub const DEFAULT_STATE_BUDGET: usize = 10_000_000;

/// A sequence of moves claimed to win a level.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Certificate {
    pub moves: Vec<Move>,
}

impl Certificate {
    pub fn new(moves: Vec<Move>) -> Self {
        Certificate { moves }
    }

    pub fn len(&self) -> usize {
        self.moves.len()
    }

    pub fn is_empty(&self) -> bool {
        self.moves.is_empty()
    }

    /// How many times `edge` is traversed.
    pub fn traversals_of(&self, edge: u32) -> usize {
        self.moves.iter().filter(|m| **m == Move::Traverse(edge)).count()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FailReason {
    Illegal(IllegalMove),
    /// Every move was legal but the final state does not win.
    NotWon,
}

impl fmt::Display for FailReason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FailReason::Illegal(m) => write!(f, "{m:?}: {m}"),
            FailReason::NotWon => write!(f, "NotWon: the final state does not satisfy the win condition"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CheckOutcome {
    Won,
    /// `step` is the index of the offending move, or the move count for `NotWon`.
    FailedAt { step: usize, reason: FailReason },
}

impl CheckOutcome {
    pub fn is_won(&self) -> bool {
        matches!(self, CheckOutcome::Won)
    }
}

pub fn check_certificate(level: &Level, cert: &Certificate) -> CheckOutcome {
    let mut state = initial_state(level);
    for (step, &mv) in cert.moves.iter().enumerate() {
        match apply_move(level, &state, mv) {
            Ok(next) => state = next,
            Err(e) => return CheckOutcome::FailedAt { step, reason: FailReason::Illegal(e) },
        }
    }
    if is_won(level, &state) {
        CheckOutcome::Won
    } else {
        CheckOutcome::FailedAt { step: cert.moves.len(), reason: FailReason::NotWon }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Verdict {
    /// Carries a minimum-length winning certificate.
    Solvable(Certificate),
    Unsolvable,
    BudgetExceeded(usize),
}

impl Verdict {
    pub fn is_solvable(&self) -> bool {
        matches!(self, Verdict::Solvable(_))
    }

    pub fn is_unsolvable(&self) -> bool {
        matches!(self, Verdict::Unsolvable)
    }

    pub fn witness(&self) -> Option<&Certificate> {
        match self {
            Verdict::Solvable(c) => Some(c),
            _ => None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SearchReport {
    pub verdict: Verdict,
    /// Distinct states discovered.
    pub states: usize,
}

pub fn solve_exhaustive(level: &Level, state_budget: usize) -> Verdict {
    search(level, state_budget).verdict
}

/// Breadth-first search over the reachable state graph.
pub fn search(level: &Level, state_budget: usize) -> SearchReport {
    let codec = StateCodec::new(level);
    let incidence = level.incidence();
    let start = initial_state(level);
    if is_won(level, &start) {
        return SearchReport { verdict: Verdict::Solvable(Certificate::default()), states: 1 };
    }

    // Insertion order of `seen` is the BFS queue order.
    let mut seen: IndexSet<Box<[u64]>> = IndexSet::new();
    let mut parent: Vec<(u32, Move)> = Vec::new();
    seen.insert(codec.encode(&start));
    parent.push((u32::MAX, Move::Traverse(u32::MAX)));

    let mut moves = Vec::new();
    let mut head = 0;
    while head < seen.len() {
        let state = codec.decode(&seen[head]);
        let arrived_by = parent[head].1;
        legal_moves_with(level, &incidence, &state, &mut moves);
        for &mv in &moves {
            if matches!(mv, Move::Press { .. }) && mv == arrived_by {
                continue;
            }
            let next = apply_move(level, &state, mv).expect("legal move");
            let (index, fresh) = seen.insert_full(codec.encode(&next));
            if !fresh {
                continue;
            }
            parent.push((head as u32, mv));
            if is_won(level, &next) {
                let states = seen.len();
                return SearchReport {
                    verdict: Verdict::Solvable(rebuild(&parent, index)),
                    states,
                };
            }
            if seen.len() >= state_budget {
                return SearchReport { verdict: Verdict::BudgetExceeded(seen.len()), states: seen.len() };
            }
        }
        head += 1;
    }
    SearchReport { verdict: Verdict::Unsolvable, states: seen.len() }
}

fn rebuild(parent: &[(u32, Move)], mut index: usize) -> Certificate {
    let mut moves = Vec::new();
    while index != 0 {
        let (p, mv) = parent[index];
        moves.push(mv);
        index = p as usize;
    }
    moves.reverse();
    Certificate { moves }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SolutionStats {
    pub length: usize,
    /// Traversals of the level's marked edge in the minimum witness.
    pub marked_traversals: usize,
}

pub fn shortest_solution_stats(level: &Level, state_budget: usize) -> Option<SolutionStats> {
    match solve_exhaustive(level, state_budget) {
        Verdict::Solvable(cert) => Some(SolutionStats {
            length: cert.len(),
            marked_traversals: level.marked_edge.map_or(0, |e| cert.traversals_of(e)),
        }),
        _ => None,
    }
}
