use std::collections::VecDeque;

use fixedbitset::FixedBitSet;
use thiserror::Error;

use crate::arena::{DoorOp, EdgeId, Level, VertexId};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum MonotoneFeature {
    CloseAction { vertex: VertexId },
    Keys,
    Tokens,
    Toll { edge: EdgeId },
    SingleUse { edge: EdgeId },
    OneWay { edge: EdgeId },
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum MonotoneError {
    #[error("monotone solver precondition violated: {0:?}")]
    PreconditionViolated(MonotoneFeature),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct MonotoneReport {
    pub solvable: bool,
    pub rounds: usize,
    /// Vertex expansions plus edge scans, summed over all rounds.
    pub steps: u64,
}

fn check_preconditions(level: &Level) -> Result<(), MonotoneFeature> {
    for v in &level.vertices {
        if v.plates.iter().chain(v.buttons.iter().flatten()).any(|a| a.action == DoorOp::Close) {
            return Err(MonotoneFeature::CloseAction { vertex: v.id });
        }
    }
    if level.initial_keys > 0 || level.total_placed_keys() > 0 {
        return Err(MonotoneFeature::Keys);
    }
    if level.initial_tokens > 0 || level.total_placed_tokens() > 0 {
        return Err(MonotoneFeature::Tokens);
    }
    for e in &level.edges {
        if e.toll > 0 {
            return Err(MonotoneFeature::Toll { edge: e.id });
        }
        if e.single_use {
            return Err(MonotoneFeature::SingleUse { edge: e.id });
        }
        if e.one_way {
            return Err(MonotoneFeature::OneWay { edge: e.id });
        }
    }
    Ok(())
}

/// Whether the level is winnable, for levels where doors only ever open.
pub fn solve_monotone(level: &Level) -> Result<bool, MonotoneError> {
    solve_monotone_report(level).map(|r| r.solvable)
}

/// Fixpoint: explore what is reachable, operate every actuator found there,
/// repeat until no door opens.
///
/// With undirected edges and doors that never close, the avatar can always
/// walk back, so the final reachable set is exactly where it can end up.
pub fn solve_monotone_report(level: &Level) -> Result<MonotoneReport, MonotoneError> {
    check_preconditions(level).map_err(MonotoneError::PreconditionViolated)?;
    let incidence = level.incidence();
    let mut open = FixedBitSet::with_capacity(level.doors.len());
    for d in level.doors.iter().filter(|d| d.initially_open) {
        open.insert(d.id as usize);
    }

    let mut steps = 0u64;
    let mut rounds = 0;
    let reach = loop {
        rounds += 1;
        let mut reach = FixedBitSet::with_capacity(level.vertices.len());
        let mut queue = VecDeque::from([level.start]);
        reach.insert(level.start as usize);
        while let Some(v) = queue.pop_front() {
            steps += 1;
            for &e in &incidence[v as usize] {
                steps += 1;
                let edge = &level.edges[e as usize];
                if edge.door.is_some_and(|d| !open.contains(d as usize)) {
                    continue;
                }
                let w = edge.other_end(v).expect("incident");
                if !reach.put(w as usize) {
                    queue.push_back(w);
                }
            }
        }
        let mut opened = false;
        for v in reach.ones() {
            let spec = &level.vertices[v];
            for a in spec.plates.iter().chain(spec.buttons.iter().flatten()) {
                steps += 1;
                opened |= !open.put(a.door as usize);
            }
        }
        if !opened {
            break reach;
        }
    };

    let visited_all = level.must_visit().all(|v| reach.contains(v as usize));
    let exit_ok = !level.require_exit || level.exit_vertex().is_some_and(|x| reach.contains(x as usize));
    Ok(MonotoneReport { solvable: visited_all && exit_ok, rounds, steps })
}
