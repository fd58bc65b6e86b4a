//! Quantified 3-CNF.
//!
//! Top row `N_0 … N_q` (start `N_0`) crosses one quantifier gadget per
//! prefix entry, then the marked edge `N_q → K_0` enters the clause row
//! `K_0 … K_m`, then `K_m → S_q` drops to the bottom row `S_q … S_0`, which
//! crosses the gadgets' lower parts in reverse and ends at the exit. A
//! universal gadget sends the avatar back up to its own top-row exit the
//! first time it is crossed from below, so every universal assignment gets
//! its own pass through the clause row. Every edge between gadget sites is
//! one-way.

use std::collections::BTreeMap;

use super::builder::{EdgeOpts, LevelBuilder};
use super::gadgets::{clause, existential, universal, Actuator, QuantPorts};
use super::witness::{Plan, TqbfPlan};
use super::{LevelBundle, ReduceError, Role, Target};
use crate::arena::DoorId;
use crate::instance::{QuantifiedFormula, Quantifier};

pub fn reduce_tqbf(f: &QuantifiedFormula, actuator: Actuator) -> Result<LevelBundle, ReduceError> {
    if actuator == Actuator::Button1 {
        return Err(ReduceError::BadParams("formula levels use plates or 3-buttons".into()));
    }
    f.validate()?;
    let q = f.prefix.len();
    let m = f.clauses.len();
    let mut b = LevelBuilder::new();
    let top: Vec<u32> = (0..=q).map(|_| b.vertex()).collect();
    let row: Vec<u32> = (0..=m).map(|_| b.vertex()).collect();
    let bottom: Vec<u32> = (0..=q).map(|_| b.vertex()).collect();
    let exit = b.vertex();
    let mut roles = BTreeMap::new();

    let mut positive: Vec<Vec<DoorId>> = vec![Vec::new(); f.num_vars as usize];
    let mut negative: Vec<Vec<DoorId>> = vec![Vec::new(); f.num_vars as usize];
    let mut literal_doors = Vec::with_capacity(m);
    for c in &f.clauses {
        let doors: Vec<DoorId> = c
            .iter()
            .map(|lit| {
                let d = b.door(false);
                let list = if lit.negated { &mut negative } else { &mut positive };
                list[lit.var as usize].push(d);
                d
            })
            .collect();
        literal_doors.push(doors);
    }

    let marked = b.edge(top[q], row[0], EdgeOpts::plain().one_way());
    let mut clause_edges = Vec::with_capacity(m);
    for (j, c) in f.clauses.iter().enumerate() {
        let edges = clause(&mut b, row[j], row[j + 1], &literal_doors[j]);
        roles.insert(Role::Clause(j as u32), Target::Vertex(row[j]));
        clause_edges.push(c.iter().copied().zip(edges).collect());
    }
    let to_bottom = b.edge(row[m], bottom[q], EdgeOpts::plain().one_way());

    let mut gadgets = Vec::with_capacity(q);
    for (i, &(quant, var)) in f.prefix.iter().enumerate() {
        let ports = QuantPorts {
            top_in: top[i],
            top_out: top[i + 1],
            bottom_in: bottom[i + 1],
            bottom_out: bottom[i],
        };
        let (pos, neg) = (&positive[var as usize], &negative[var as usize]);
        let g = match quant {
            Quantifier::Exists => existential(&mut b, ports, var, pos, neg, actuator),
            Quantifier::Forall => universal(&mut b, ports, var, pos, neg, actuator),
        };
        roles.insert(Role::Variable(var), Target::Vertex(g.anchor));
        gadgets.push(g.plan);
    }

    let exit_edge = b.edge(bottom[0], exit, EdgeOpts::plain().one_way());
    let level = b.level_mut();
    level.require_exit = true;
    level.vertices[exit as usize].exit = true;
    level.marked_edge = Some(marked);
    Ok(LevelBundle {
        level: b.finish(),
        role_map: roles,
        marked_edge: Some(marked),
        uses_one_way: true,
        plan: Plan::Tqbf(TqbfPlan {
            num_vars: f.num_vars,
            gadgets,
            marked,
            clause_edges,
            to_bottom,
            exit: exit_edge,
        }),
    })
}
