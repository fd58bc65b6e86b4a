//! Monotone circuit value.
//!
//! A hub (the start) reaches one chamber per wire. Input chambers sit
//! behind a door that is open exactly for true inputs. Each use of a wire,
//! as a gate input or as the circuit output, gets its own closed door,
//! opened from the wire's chamber; a door belongs to a single edge, so a
//! wire read twice needs two doors. An OR chamber hangs off the hub by two
//! parallel doored edges, an AND chamber by two doored edges in series, and
//! the exit sits behind the output's door.

use std::collections::BTreeMap;

use super::builder::{EdgeOpts, LevelBuilder};
use super::gadgets::{press, traverse, Actuator};
use super::witness::{CircuitPlan, Plan, Visit};
use super::{LevelBundle, ReduceError, Role, Target};
use crate::arena::{DoorAction, DoorId, Move, VertexId};
use crate::instance::{GateOp, MonotoneCircuit};

pub fn reduce_circuit_value(c: &MonotoneCircuit, actuator: Actuator) -> Result<LevelBundle, ReduceError> {
    if actuator == Actuator::Button3 {
        return Err(ReduceError::BadParams("circuit levels use plates or 1-buttons".into()));
    }
    c.validate()?;
    let mut b = LevelBuilder::new();
    let mut roles = BTreeMap::new();
    let hub = b.vertex();

    let mut chamber: Vec<VertexId> = Vec::with_capacity(c.wire_count());
    let mut visits: Vec<Vec<Visit>> = Vec::with_capacity(c.wire_count());
    for (i, input) in c.inputs.iter().enumerate() {
        let door = b.door(input.value);
        let room = b.vertex();
        let e = b.edge(hub, room, EdgeOpts::door(door));
        roles.insert(Role::Input(i as u32), Target::Vertex(room));
        chamber.push(room);
        visits.push(vec![Visit { needs: None, go: vec![traverse(e)], back: vec![traverse(e)] }]);
    }

    // (source wire, door) for every use of a wire
    let mut uses: Vec<(u32, DoorId)> = Vec::new();
    for (g, gate) in c.gates.iter().enumerate() {
        let [da, db] = gate.inputs.map(|w| {
            let d = b.door(false);
            uses.push((w, d));
            d
        });
        let room = b.vertex();
        let routes = match gate.op {
            GateOp::Or => {
                let ea = b.edge(hub, room, EdgeOpts::door(da));
                let eb = b.edge(hub, room, EdgeOpts::door(db));
                vec![
                    Visit { needs: Some(gate.inputs[0]), go: vec![traverse(ea)], back: vec![traverse(ea)] },
                    Visit { needs: Some(gate.inputs[1]), go: vec![traverse(eb)], back: vec![traverse(eb)] },
                ]
            }
            GateOp::And => {
                let mid = b.vertex();
                let ea = b.edge(hub, mid, EdgeOpts::door(da));
                let eb = b.edge(mid, room, EdgeOpts::door(db));
                let path = vec![traverse(ea), traverse(eb)];
                vec![Visit { needs: None, back: path.iter().rev().copied().collect(), go: path }]
            }
        };
        roles.insert(Role::Gate(g as u32), Target::Vertex(room));
        chamber.push(room);
        visits.push(routes);
    }

    let out_door = b.door(false);
    uses.push((c.output, out_door));
    let exit = b.vertex();
    let exit_edge = b.edge(hub, exit, EdgeOpts::door(out_door));
    roles.insert(Role::Output, Target::Vertex(exit));

    let mut presses: Vec<Vec<Move>> = vec![Vec::new(); c.wire_count()];
    for &(w, door) in &uses {
        let room = chamber[w as usize];
        match actuator {
            Actuator::Plate => b.plate(room, DoorAction::open(door)),
            _ => {
                let k = b.button(room, vec![DoorAction::open(door)]);
                presses[w as usize].push(press(room, k));
            }
        }
    }
    for (routes, p) in visits.iter_mut().zip(presses) {
        for r in routes {
            r.go.extend(p.iter().copied());
        }
    }

    let level = b.level_mut();
    level.require_exit = true;
    level.vertices[exit as usize].exit = true;
    Ok(LevelBundle {
        level: b.finish(),
        role_map: roles,
        marked_edge: None,
        uses_one_way: false,
        plan: Plan::Circuit(CircuitPlan { circuit: c.clone(), visits, exit: vec![traverse(exit_edge)] }),
    })
}
