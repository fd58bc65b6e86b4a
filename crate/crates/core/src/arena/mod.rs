//! The abstract avatar game played on a graph.
//!
//! A [`Level`] is a multigraph whose edges may be one-way, single-use,
//! toll roads or carry a door. Vertices may hold tokens and keys, pressure
//! plates (fired on every arrival) and k-buttons (applied on demand). The
//! avatar wins once every must-visit vertex has been touched and, when the
//! level requires it, it stands on the exit.
//!
//! All rules are pure functions over immutable values.

mod level;
mod state;

pub use level::{
    Button, Capacity, DoorAction, DoorId, DoorOp, DoorSpec, EdgeId, EdgeSpec, Level, VertexId,
    VertexSpec, Violation,
};
pub use state::{apply_move, check_move, initial_state, is_won, legal_moves, GameState, IllegalMove, Move};

pub(crate) use state::legal_moves_with;
