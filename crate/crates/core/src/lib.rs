//! Avatar puzzle games on graphs: the game model, exact solvers, reductions
//! from classical hard problems into levels, brute-force oracles for those
//! problems, and a laser-ray puzzle engine.

pub mod arena;
pub mod formats;
pub mod generate;
pub mod instance;
pub mod oracle;
pub mod ray;
pub mod reduce;
pub mod solver;
