use std::fmt;

use fixedbitset::FixedBitSet;
use thiserror::Error;

use super::level::{DoorAction, DoorOp, EdgeId, Level, VertexId};

/// One player action.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Move {
    Traverse(EdgeId),
    /// Press button `button` of vertex `vertex`; legal only while standing on `vertex`.
    Press { vertex: VertexId, button: u32 },
}

impl fmt::Display for Move {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Move::Traverse(e) => write!(f, "t {e}"),
            Move::Press { vertex, button } => write!(f, "p {vertex} {button}"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Error)]
pub enum IllegalMove {
    #[error("edge is not incident to the avatar's position")]
    NotIncident,
    #[error("single-use edge already consumed")]
    Consumed,
    #[error("one-way edge traversed against its direction")]
    WrongWay,
    #[error("toll road requires a token")]
    NoToken,
    #[error("door is closed and no key is carried")]
    DoorClosedNoKey,
    #[error("no such button at the avatar's position")]
    NoSuchButton,
}

/// Everything that changes during play.
///
/// `tokens_left` / `keys_left` hold the items still lying on each vertex;
/// they are empty when the level places no items of that kind.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct GameState {
    pub position: VertexId,
    pub tokens_held: u32,
    pub keys_held: u32,
    pub open_doors: FixedBitSet,
    pub consumed_edges: FixedBitSet,
    /// Must-visit vertices touched so far.
    pub visited: FixedBitSet,
    pub tokens_left: Vec<u32>,
    pub keys_left: Vec<u32>,
}

impl GameState {
    pub fn door_open(&self, door: u32) -> bool {
        self.open_doors.contains(door as usize)
    }

    pub fn tokens_at(&self, v: VertexId) -> u32 {
        self.tokens_left.get(v as usize).copied().unwrap_or(0)
    }

    pub fn keys_at(&self, v: VertexId) -> u32 {
        self.keys_left.get(v as usize).copied().unwrap_or(0)
    }

    /// Vertices whose item piles have been (partly) taken.
    pub fn collected_vertices(&self, level: &Level) -> Vec<VertexId> {
        level
            .vertices
            .iter()
            .filter(|v| self.tokens_at(v.id) < v.tokens || self.keys_at(v.id) < v.keys)
            .map(|v| v.id)
            .collect()
    }

    fn apply_actions<'a>(&mut self, actions: impl IntoIterator<Item = &'a DoorAction>) {
        for a in actions {
            match a.action {
                DoorOp::Open => self.open_doors.insert(a.door as usize),
                DoorOp::Close => self.open_doors.remove(a.door as usize),
            }
        }
    }

    /// Plates, item pickup (keys first), must-visit bookkeeping.
    fn arrive(&mut self, level: &Level) {
        let v = &level.vertices[self.position as usize];
        self.apply_actions(&v.plates);
        let i = self.position as usize;
        if let Some(left) = self.keys_left.get_mut(i) {
            let take = (*left).min(level.key_capacity.limit() - self.keys_held);
            *left -= take;
            self.keys_held += take;
        }
        if let Some(left) = self.tokens_left.get_mut(i) {
            let take = (*left).min(level.token_capacity.limit() - self.tokens_held);
            *left -= take;
            self.tokens_held += take;
        }
        if v.must_visit {
            self.visited.insert(i);
        }
    }
}

/// The state at the start of play, arrival effects of the start vertex included.
pub fn initial_state(level: &Level) -> GameState {
    let nv = level.vertices.len();
    let mut open_doors = FixedBitSet::with_capacity(level.doors.len());
    for d in level.doors.iter().filter(|d| d.initially_open) {
        open_doors.insert(d.id as usize);
    }
    let pile = |f: fn(&super::level::VertexSpec) -> u32| -> Vec<u32> {
        if level.vertices.iter().any(|v| f(v) > 0) {
            level.vertices.iter().map(f).collect()
        } else {
            Vec::new()
        }
    };
    let mut state = GameState {
        position: level.start,
        tokens_held: level.initial_tokens,
        keys_held: level.initial_keys,
        open_doors,
        consumed_edges: FixedBitSet::with_capacity(level.edges.len()),
        visited: FixedBitSet::with_capacity(nv),
        tokens_left: pile(|v| v.tokens),
        keys_left: pile(|v| v.keys),
    };
    state.arrive(level);
    state
}

/// Checks `mv` against `state` without building the successor.
pub fn check_move(level: &Level, state: &GameState, mv: Move) -> Result<(), IllegalMove> {
    match mv {
        Move::Traverse(e) => {
            let edge = level.edges.get(e as usize).ok_or(IllegalMove::NotIncident)?;
            if edge.other_end(state.position).is_none() {
                return Err(IllegalMove::NotIncident);
            }
            if state.consumed_edges.contains(e as usize) {
                return Err(IllegalMove::Consumed);
            }
            if edge.one_way && edge.from != state.position {
                return Err(IllegalMove::WrongWay);
            }
            if edge.toll > state.tokens_held {
                return Err(IllegalMove::NoToken);
            }
            if let Some(d) = edge.door {
                if !state.door_open(d) && state.keys_held == 0 {
                    return Err(IllegalMove::DoorClosedNoKey);
                }
            }
            Ok(())
        }
        Move::Press { vertex, button } => {
            if vertex != state.position
                || level.vertices[vertex as usize].buttons.len() <= button as usize
            {
                return Err(IllegalMove::NoSuchButton);
            }
            Ok(())
        }
    }
}

/// Applies one move; the input state is left untouched.
pub fn apply_move(level: &Level, state: &GameState, mv: Move) -> Result<GameState, IllegalMove> {
    check_move(level, state, mv)?;
    let mut next = state.clone();
    match mv {
        Move::Traverse(e) => {
            let edge = &level.edges[e as usize];
            next.tokens_held -= edge.toll;
            if let Some(d) = edge.door {
                if !next.door_open(d) {
                    next.keys_held -= 1;
                    next.open_doors.insert(d as usize);
                }
            }
            if edge.single_use {
                next.consumed_edges.insert(e as usize);
            }
            next.position = edge.other_end(state.position).expect("checked incident");
            next.arrive(level);
        }
        Move::Press { vertex, button } => {
            next.apply_actions(&level.vertices[vertex as usize].buttons[button as usize]);
        }
    }
    Ok(next)
}

/// Every legal move: incident edges by id, then buttons by index.
pub fn legal_moves(level: &Level, state: &GameState) -> Vec<Move> {
    let mut out: Vec<Move> = level
        .edges
        .iter()
        .filter(|e| e.other_end(state.position).is_some())
        .map(|e| Move::Traverse(e.id))
        .filter(|&m| check_move(level, state, m).is_ok())
        .collect();
    let v = &level.vertices[state.position as usize];
    out.extend((0..v.buttons.len() as u32).map(|button| Move::Press { vertex: v.id, button }));
    out
}

/// Same as [`legal_moves`] but scanning a precomputed incidence list.
pub(crate) fn legal_moves_with(
    level: &Level,
    incidence: &[Vec<EdgeId>],
    state: &GameState,
    out: &mut Vec<Move>,
) {
    out.clear();
    for &e in &incidence[state.position as usize] {
        let m = Move::Traverse(e);
        if check_move(level, state, m).is_ok() {
            out.push(m);
        }
    }
    let v = &level.vertices[state.position as usize];
    out.extend((0..v.buttons.len() as u32).map(|button| Move::Press { vertex: v.id, button }));
}

pub fn is_won(level: &Level, state: &GameState) -> bool {
    let all_visited = level.must_visit().all(|v| state.visited.contains(v as usize));
    all_visited && (!level.require_exit || level.exit_vertex() == Some(state.position))
}
