//! Acceptance suite. Prints one verdict line per criterion and exits with
//! status 1 if any of them fails.
//!
//! Expected answers come from the small reference deciders defined here,
//! not from the library oracles, which are only cross-checked against them.

use std::collections::{BTreeSet, HashSet, VecDeque};
use std::panic::{self, AssertUnwindSafe};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use hardgame::arena::{apply_move, check_move, initial_state, legal_moves, GameState, Level, Move};
use hardgame::generate::{
    gen_arena_level, gen_bounded_digraph, gen_circuit, gen_cubic_graph, gen_degree_valid_digraph, gen_qbf,
    gen_ray_level, ArenaGenParams, Lcg, RayGenParams,
};
use hardgame::instance::{DGraph, GateOp, Literal, MonotoneCircuit, QuantifiedFormula, Quantifier, UGraph};
use hardgame::oracle::{
    connectivity, eval_circuit, eval_qbf, ham_cycle_directed, ham_cycle_undirected, Strategy, DEFAULT_HAM_BOUND,
};
use hardgame::ray::{reduce_mindbender, simulate, solve_deflektor, solve_ray_brute, BruteBounds, SimEnd};
use hardgame::reduce::{
    build_gadget, canonical_witness, reduce, Fragment, GadgetKind, Instance, LevelBundle, Meta, OracleSolution,
    ReduceOptions, Role, Target,
};
use hardgame::solver::{
    check_certificate, search, shortest_solution_stats, solve_monotone_report, Verdict, DEFAULT_STATE_BUDGET,
};

const QBF_BUDGET: usize = 10_000_000;
const MAX_FIXPOINT_STEPS: u64 = 100_000;
const META1_TIME_LIMIT: Duration = Duration::from_secs(300);
const DEFLEKTOR_TIME_LIMIT: Duration = Duration::from_secs(120);
const INVARIANT_TRIALS: u64 = 10_000;

type Outcome = Result<String, String>;

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

// ---------------------------------------------------------------------------
// Reference deciders

fn ham_cycle_ref(n: usize, arcs: &[(u32, u32)], directed: bool) -> Option<Vec<u32>> {
    let mut adj = vec![vec![false; n]; n];
    for &(a, b) in arcs {
        adj[a as usize][b as usize] = true;
        if !directed {
            adj[b as usize][a as usize] = true;
        }
    }
    fn extend(adj: &[Vec<bool>], path: &mut Vec<u32>, used: &mut [bool]) -> bool {
        let n = adj.len();
        let last = *path.last().unwrap() as usize;
        if path.len() == n {
            return adj[last][path[0] as usize];
        }
        for w in 0..n {
            if !used[w] && adj[last][w] {
                used[w] = true;
                path.push(w as u32);
                if extend(adj, path, used) {
                    return true;
                }
                path.pop();
                used[w] = false;
            }
        }
        false
    }
    let mut used = vec![false; n];
    used[0] = true;
    let mut path = vec![0];
    extend(&adj, &mut path, &mut used).then_some(path)
}

fn qbf_ref(f: &QuantifiedFormula, depth: usize, values: &mut Vec<bool>) -> Option<Strategy> {
    let Some(&(q, var)) = f.prefix.get(depth) else {
        let sat = f.clauses.iter().all(|c| c.iter().any(|l| values[l.var as usize] != l.negated));
        return sat.then_some(Strategy::Done);
    };
    let mut with = |value: bool| {
        values[var as usize] = value;
        qbf_ref(f, depth + 1, values)
    };
    match q {
        Quantifier::Exists => {
            let (value, then) = [true, false].into_iter().find_map(|b| with(b).map(|s| (b, s)))?;
            Some(Strategy::Exists { var, value, then: Box::new(then) })
        }
        Quantifier::Forall => {
            let if_true = with(true)?;
            let if_false = with(false)?;
            Some(Strategy::Forall { var, if_true: Box::new(if_true), if_false: Box::new(if_false) })
        }
    }
}

fn qbf_holds(f: &QuantifiedFormula) -> Option<Strategy> {
    qbf_ref(f, 0, &mut vec![false; f.num_vars as usize])
}

fn circuit_ref(c: &MonotoneCircuit) -> Vec<bool> {
    let mut wires: Vec<bool> = c.inputs.iter().map(|i| i.value).collect();
    for g in &c.gates {
        let [a, b] = g.inputs.map(|w| wires[w as usize]);
        wires.push(match g.op {
            GateOp::And => a && b,
            GateOp::Or => a || b,
        });
    }
    wires
}

/// Shortest path from `s` to `t` as a vertex list.
fn path_ref(n: usize, arcs: &[(u32, u32)], s: u32, t: u32) -> Option<Vec<u32>> {
    let mut prev = vec![None; n];
    let mut seen = vec![false; n];
    seen[s as usize] = true;
    let mut queue = VecDeque::from([s]);
    while let Some(u) = queue.pop_front() {
        for &(a, b) in arcs {
            if a == u && !seen[b as usize] {
                seen[b as usize] = true;
                prev[b as usize] = Some(u);
                queue.push_back(b);
            }
        }
    }
    if !seen[t as usize] {
        return None;
    }
    let mut path = vec![t];
    while let Some(p) = prev[*path.last().unwrap() as usize] {
        path.push(p);
    }
    path.reverse();
    Some(path)
}

// ---------------------------------------------------------------------------
// Corpora

fn cubic_corpus() -> Vec<(String, UGraph)> {
    let mut out = vec![
        ("K4".to_string(), UGraph::complete(4)),
        ("Q3".to_string(), UGraph::cube()),
        ("Petersen".to_string(), UGraph::petersen()),
    ];
    for seed in 0..20u64 {
        let n = 4 + 2 * (seed % 4) as usize;
        out.push((format!("cubic n={n} seed={seed}"), gen_cubic_graph(n, seed).expect("cubic graph")));
    }
    out
}

fn digraph_corpus() -> Vec<(String, DGraph)> {
    (0..20u64)
        .map(|seed| {
            let half = 2 + (seed % 3) as usize;
            let g = gen_degree_valid_digraph(half, seed).expect("degree-valid digraph");
            (format!("digraph n={} seed={seed}", g.n), g)
        })
        .collect()
}

fn circuit_corpus() -> Vec<(String, MonotoneCircuit)> {
    (0..30u64)
        .map(|seed| {
            let mut rng = Lcg::new(seed);
            let inputs = rng.range(2, 5) as usize;
            let gates = rng.range(1, 15) as usize;
            (format!("circuit seed={seed}"), gen_circuit(inputs, gates, seed).expect("circuit"))
        })
        .collect()
}

fn fixed_formulas() -> Vec<(String, QuantifiedFormula)> {
    use Literal as L;
    let one = |q, c| QuantifiedFormula { num_vars: 1, prefix: vec![(q, 0)], clauses: vec![c] };
    vec![
        ("Ex.(x|x|x)".into(), one(Quantifier::Exists, [L::pos(0), L::pos(0), L::pos(0)])),
        ("Ax.(x|x|x)".into(), one(Quantifier::Forall, [L::pos(0), L::pos(0), L::pos(0)])),
        ("Ax.(x|-x|x)".into(), one(Quantifier::Forall, [L::pos(0), L::neg(0), L::pos(0)])),
        (
            "AxEy.((x|y|y)&(-x|-y|-y))".into(),
            QuantifiedFormula {
                num_vars: 2,
                prefix: vec![(Quantifier::Forall, 0), (Quantifier::Exists, 1)],
                clauses: vec![[L::pos(0), L::pos(1), L::pos(1)], [L::neg(0), L::neg(1), L::neg(1)]],
            },
        ),
    ]
}

fn formula_corpus() -> Vec<(String, QuantifiedFormula)> {
    let mut out = fixed_formulas();
    for seed in 0..50u64 {
        let mut rng = Lcg::new(seed ^ 0x5eed);
        let vars = rng.range(1, 3);
        let clauses = rng.range(1, 3) as usize;
        out.push((format!("qbf seed={seed}"), gen_qbf(vars, clauses, seed).expect("formula")));
    }
    out
}

/// True formulas whose prefix has `q` universal quantifiers and nothing else.
fn forall_only(q: u32) -> Vec<QuantifiedFormula> {
    use Literal as L;
    let prefix: Vec<_> = (0..q).map(|v| (Quantifier::Forall, v)).collect();
    let mut formulas = vec![QuantifiedFormula {
        num_vars: q,
        prefix: prefix.clone(),
        clauses: vec![[L::pos(0), L::neg(0), L::pos(q - 1)]],
    }];
    if q == 2 {
        formulas.push(QuantifiedFormula {
            num_vars: 2,
            prefix,
            clauses: vec![[L::pos(0), L::neg(0), L::pos(1)], [L::neg(1), L::pos(1), L::neg(0)]],
        });
    }
    formulas
}

// ---------------------------------------------------------------------------
// Shared checks

/// Yes-instances handed to the witness criterion.
#[derive(Default)]
struct Witnesses {
    checked: usize,
    failures: Vec<String>,
}

impl Witnesses {
    fn check(&mut self, label: &str, bundle: &LevelBundle, solution: &OracleSolution) {
        self.checked += 1;
        match canonical_witness(bundle, solution) {
            Ok(cert) => {
                let outcome = check_certificate(&bundle.level, &cert);
                if !outcome.is_won() {
                    self.failures.push(format!("{label}: canonical witness not won ({outcome:?})"));
                }
            }
            Err(e) => self.failures.push(format!("{label}: {e}")),
        }
    }
}

fn solved(level: &Level, budget: usize, label: &str) -> Result<bool, String> {
    match search(level, budget).verdict {
        Verdict::Solvable(cert) => {
            ensure!(check_certificate(level, &cert).is_won(), "{label}: search witness does not win");
            Ok(true)
        }
        Verdict::Unsolvable => Ok(false),
        Verdict::BudgetExceeded(n) => Err(format!("{label}: budget exceeded after {n} states")),
    }
}

fn ham_equivalence(
    meta: Meta,
    opts: ReduceOptions,
    corpus: &[(String, Instance)],
    witnesses: &mut Witnesses,
) -> Result<(usize, usize), String> {
    let mut yes = 0;
    for (name, instance) in corpus {
        let (n, arcs, directed) = match instance {
            Instance::UGraph(g) => (g.n, g.edges.clone(), false),
            Instance::DGraph(g) => (g.n, g.arcs.clone(), true),
            _ => unreachable!("graph corpus"),
        };
        let expected = ham_cycle_ref(n, &arcs, directed);
        let library = match instance {
            Instance::UGraph(g) => ham_cycle_undirected(g, DEFAULT_HAM_BOUND),
            Instance::DGraph(g) => ham_cycle_directed(g, DEFAULT_HAM_BOUND),
            _ => unreachable!(),
        }
        .map_err(|e| format!("{name}: oracle error {e}"))?;
        ensure!(library.decision == expected.is_some(), "{name}: library oracle disagrees with reference");
        let label = format!("{meta} {name} exit={}", opts.require_exit);
        let bundle = reduce(meta, instance, &opts).map_err(|e| format!("{label}: {e}"))?;
        let verdict = solved(&bundle.level, DEFAULT_STATE_BUDGET, &label)?;
        ensure!(verdict == expected.is_some(), "{label}: solver says {verdict}, oracle {}", expected.is_some());
        if let Some(cycle) = expected {
            yes += 1;
            witnesses.check(&label, &bundle, &OracleSolution::Cycle(cycle));
        }
    }
    Ok((corpus.len(), yes))
}

fn ugraph_instances() -> Vec<(String, Instance)> {
    cubic_corpus().into_iter().map(|(n, g)| (n, Instance::UGraph(g))).collect()
}

fn dgraph_instances() -> Vec<(String, Instance)> {
    digraph_corpus().into_iter().map(|(n, g)| (n, Instance::DGraph(g))).collect()
}

// ---------------------------------------------------------------------------
// Criteria

fn meta1(w: &mut Witnesses) -> Outcome {
    let t = Instant::now();
    let corpus = ugraph_instances();
    let named = |name: &str| corpus.iter().find(|(n, _)| n == name).map(|(_, i)| i.clone()).unwrap();
    let mut yes = 0;
    for require_exit in [true, false] {
        let opts = ReduceOptions { vertex: 0, require_exit };
        yes += ham_equivalence(Meta::M1, opts, &corpus, w)?.1;
        for (name, expect) in [("K4", true), ("Q3", true), ("Petersen", false)] {
            let b = reduce(Meta::M1, &named(name), &opts).unwrap();
            ensure!(solved(&b.level, DEFAULT_STATE_BUDGET, name)? == expect, "{name} has the wrong verdict");
        }
    }
    let elapsed = t.elapsed();
    ensure!(elapsed < META1_TIME_LIMIT, "took {elapsed:?}");
    Ok(format!("{} levels, {yes} solvable, {elapsed:.1?}", 2 * corpus.len()))
}

fn meta1b(w: &mut Witnesses) -> Outcome {
    let corpus = ugraph_instances();
    let mut yes = 0;
    for meta in [Meta::M1bA, Meta::M1bB, Meta::M1bC] {
        yes += ham_equivalence(meta, ReduceOptions::default(), &corpus, w)?.1;
    }
    for (name, instance) in &corpus {
        let Instance::UGraph(g) = instance else { unreachable!() };
        let n = g.n as u64;
        let a = reduce(Meta::M1bA, instance, &ReduceOptions::default()).unwrap();
        let tokens_a = a.level.total_placed_tokens() + u64::from(a.level.initial_tokens);
        ensure!(tokens_a == n + 1, "{name}: variant a has {tokens_a} tokens");
        let c = reduce(Meta::M1bC, instance, &ReduceOptions::default()).unwrap();
        let tokens_c = c.level.total_placed_tokens() + u64::from(c.level.initial_tokens);
        ensure!(tokens_c == 2 * n, "{name}: variant c has {tokens_c} tokens");
        let chain = toll_chain_length(&c)?;
        ensure!(chain == g.n, "{name}: toll chain has {chain} edges");
    }
    Ok(format!("{} levels, {yes} solvable, token counts and chains match", 3 * corpus.len()))
}

/// Length of the toll path from the start vertex to the dangling vertex
/// over edges that stand for no source edge.
fn toll_chain_length(b: &LevelBundle) -> Result<usize, String> {
    let source_edges: HashSet<u32> = b
        .role_map
        .iter()
        .filter_map(|(r, t)| match (r, t) {
            (Role::Edge(_), Target::Edge(e)) => Some(*e),
            _ => None,
        })
        .collect();
    let dangling = match b.role_map.get(&Role::Dangling) {
        Some(Target::Vertex(v)) => *v,
        other => return Err(format!("no dangling vertex ({other:?})")),
    };
    let extra: Vec<_> = b.level.edges.iter().filter(|e| !source_edges.contains(&e.id)).collect();
    ensure!(extra.iter().all(|e| e.toll == 1), "chain edge without toll");
    let mut at = b.level.start;
    let mut used = HashSet::new();
    let mut length = 0;
    while let Some(e) = extra.iter().find(|e| !used.contains(&e.id) && e.other_end(at).is_some()) {
        used.insert(e.id);
        at = e.other_end(at).unwrap();
        length += 1;
        if at == dangling {
            return Ok(length);
        }
    }
    ensure!(used.len() == extra.len(), "extra edges do not form one path");
    Ok(length)
}

fn meta1c(w: &mut Witnesses) -> Outcome {
    let corpus = dgraph_instances();
    let mut yes = 0;
    for meta in [Meta::M1cA, Meta::M1cB, Meta::M1cC] {
        yes += ham_equivalence(meta, ReduceOptions::default(), &corpus, w)?.1;
    }
    for (name, instance) in &corpus {
        let Instance::DGraph(g) = instance else { unreachable!() };
        ensure!(g.n <= 8, "{name} is too large");
        let b = reduce(Meta::M1cB, instance, &ReduceOptions::default()).unwrap();
        ensure!(b.level.initial_keys as usize == g.n, "{name}: {} initial keys", b.level.initial_keys);
    }
    Ok(format!("{} levels, {yes} solvable, initial keys = n", 3 * corpus.len()))
}

fn circuits(w: &mut Witnesses) -> Outcome {
    let mut yes = 0;
    let mut max_steps = 0;
    let corpus = circuit_corpus();
    for (name, c) in &corpus {
        ensure!(c.gates.len() <= 15, "{name} has {} gates", c.gates.len());
        let values = circuit_ref(c);
        let expected = values[c.output as usize];
        let library = eval_circuit(c).map_err(|e| format!("{name}: {e}"))?;
        ensure!(library.decision == expected, "{name}: library evaluation disagrees");
        for meta in [Meta::M2a, Meta::M3a] {
            let label = format!("{meta} {name}");
            let b = reduce(meta, &Instance::Circuit(c.clone()), &ReduceOptions::default())
                .map_err(|e| format!("{label}: {e}"))?;
            let m = solve_monotone_report(&b.level).map_err(|e| format!("{label}: {e}"))?;
            max_steps = max_steps.max(m.steps);
            ensure!(m.steps <= MAX_FIXPOINT_STEPS, "{label}: {} fixpoint steps", m.steps);
            ensure!(m.solvable == expected, "{label}: fixpoint says {}", m.solvable);
            ensure!(solved(&b.level, DEFAULT_STATE_BUDGET, &label)? == expected, "{label}: search disagrees");
            if expected {
                yes += 1;
                w.check(&label, &b, &OracleSolution::Evaluation(values.clone()));
            }
        }
    }
    Ok(format!("{} levels, {yes} true, at most {max_steps} fixpoint steps", 2 * corpus.len()))
}

fn gadget_contracts() -> Result<(), String> {
    let explore = |level: &Level, from: GameState| -> Vec<GameState> {
        let mut seen = HashSet::from([from.clone()]);
        let mut queue = VecDeque::from([from]);
        let mut out = Vec::new();
        while let Some(s) = queue.pop_front() {
            for mv in legal_moves(level, &s) {
                let next = apply_move(level, &s, mv).unwrap();
                if seen.insert(next.clone()) {
                    queue.push_back(next);
                }
            }
            out.push(s);
        }
        out
    };
    let at = |f: &Fragment, port: &str| {
        let mut level = f.level.clone();
        level.start = f.port(port);
        level
    };
    let play = |level: &Level, moves: &[Move]| {
        moves.iter().try_fold(initial_state(level), |s, &mv| apply_move(level, &s, mv).map_err(|e| e.to_string()))
    };
    // Whether some play from `from` passes `via` and then stands on `back`.
    let round_trip = |f: &Fragment, from: &str, via: &str, back: &str| {
        let mut level = at(f, from);
        for v in &mut level.vertices {
            v.must_visit = false;
        }
        level.vertices[f.port(via) as usize].must_visit = true;
        let via = f.port(via) as usize;
        explore(&level, initial_state(&level)).iter().any(|s| s.visited.contains(via) && s.position == f.port(back))
    };
    let reaches = |level: &Level, target: u32| explore(level, initial_state(level)).iter().any(|s| s.position == target);

    let plates = build_gadget(&GadgetKind::SingleUsePath).map_err(|e| e.to_string())?;
    ensure!(play(&at(&plates, "entry"), plates.route("forward"))?.position == plates.port("out"), "plate path blocked");
    ensure!(!round_trip(&plates, "entry", "out", "entry"), "plate path crossed twice");
    ensure!(!reaches(&at(&plates, "out"), plates.port("entry")), "plate path crossed backwards");

    let buttons = build_gadget(&GadgetKind::SingleUseButtons).map_err(|e| e.to_string())?;
    ensure!(play(&at(&buttons, "entry"), buttons.route("forward"))?.position == buttons.port("out"), "button path blocked");
    ensure!(play(&at(&buttons, "out"), buttons.route("backward"))?.position == buttons.port("entry"), "button path blocked back");
    ensure!(!round_trip(&buttons, "entry", "out", "entry"), "button path reused from entry");
    ensure!(!round_trip(&buttons, "out", "entry", "out"), "button path reused from out");

    for open in [true, false] {
        let sim = build_gadget(&GadgetKind::PlateSimulator { open }).map_err(|e| e.to_string())?;
        let s = play(&at(&sim, "entry"), sim.route("forward"))?;
        ensure!(s.position == sim.port("right") && s.door_open(sim.door("x")) == open, "plate simulator misfires");
        ensure!(!reaches(&at(&sim, "right"), sim.port("left")), "plate simulator crossed backwards");
    }
    Ok(())
}

fn meta2b3b(w: &mut Witnesses) -> Outcome {
    gadget_contracts()?;
    let (levels_b, yes_b) = ham_equivalence(Meta::M2b, ReduceOptions::default(), &dgraph_instances(), w)?;
    let (levels_3, yes_3) = ham_equivalence(Meta::M3b, ReduceOptions::default(), &ugraph_instances(), w)?;
    Ok(format!("gadget contracts hold; 2b {yes_b}/{levels_b} solvable, 3b {yes_3}/{levels_3} solvable"))
}

fn qbf(w: &mut Witnesses) -> Outcome {
    let corpus = formula_corpus();
    let mut yes = 0;
    let mut max_states = 0;
    for (name, f) in &corpus {
        ensure!(f.num_vars <= 3 && f.clauses.len() <= 3, "{name} is too large");
        let expected = qbf_holds(f);
        let library = eval_qbf(f).map_err(|e| format!("{name}: {e}"))?;
        ensure!(library.decision == expected.is_some(), "{name}: library evaluation disagrees");
        for meta in [Meta::M2c, Meta::M3c] {
            let label = format!("{meta} {name}");
            let b = reduce(meta, &Instance::Formula(f.clone()), &ReduceOptions::default())
                .map_err(|e| format!("{label}: {e}"))?;
            let report = search(&b.level, QBF_BUDGET);
            max_states = max_states.max(report.states);
            let verdict = match report.verdict {
                Verdict::Solvable(_) => true,
                Verdict::Unsolvable => false,
                Verdict::BudgetExceeded(n) => return Err(format!("{label}: budget exceeded at {n} states")),
            };
            ensure!(verdict == expected.is_some(), "{label}: solver says {verdict}");
            if let Some(strategy) = &expected {
                yes += 1;
                w.check(&label, &b, &OracleSolution::Strategy(strategy.clone()));
            }
        }
    }
    Ok(format!("{} levels, {yes} true, at most {max_states} states", 2 * corpus.len()))
}

fn exponential_rounds() -> Outcome {
    let mut lines = Vec::new();
    for q in [1u32, 2] {
        for f in forall_only(q) {
            let strategy = qbf_holds(&f).ok_or("test formula is false")?;
            let want = 1usize << q;
            for meta in [Meta::M2c, Meta::M3c] {
                let b = reduce(meta, &Instance::Formula(f.clone()), &ReduceOptions::default()).unwrap();
                let marked = b.level.marked_edge.ok_or("level has no marked edge")?;
                let cert = canonical_witness(&b, &OracleSolution::Strategy(strategy.clone())).map_err(|e| e.to_string())?;
                ensure!(check_certificate(&b.level, &cert).is_won(), "{meta} q={q}: canonical witness fails");
                let canonical = cert.traversals_of(marked);
                ensure!(canonical == want, "{meta} q={q}: canonical witness crosses {canonical} times");
                let stats = shortest_solution_stats(&b.level, QBF_BUDGET).ok_or("no solution found")?;
                ensure!(
                    stats.marked_traversals >= want,
                    "{meta} q={q}: a solution crosses the marked edge {} times",
                    stats.marked_traversals
                );
                lines.push(format!("{meta} q={q}: {canonical}/{}", stats.marked_traversals));
            }
        }
    }
    Ok(format!("canonical/shortest marked traversals {}", lines.join(", ")))
}

fn deflektor() -> Outcome {
    let t = Instant::now();
    let mut yes = 0;
    for seed in 0..30u64 {
        let level = gen_ray_level(RayGenParams::default(), seed).map_err(|e| e.to_string())?;
        ensure!(level.mirrors().len() <= 5 && level.polarizer_count() <= 4 && level.items().len() <= 2, "seed {seed} out of bounds");
        let fast = solve_deflektor(&level).map_err(|e| format!("seed {seed}: {e}"))?;
        let slow = solve_ray_brute(&level, BruteBounds::default()).map_err(|e| format!("seed {seed}: {e}"))?;
        ensure!(fast.solvable == slow.solvable, "seed {seed}: graph says {}, brute force {}", fast.solvable, slow.solvable);
        if let Some(plan) = &fast.plan {
            yes += 1;
            let targets: Vec<_> = level.items().into_iter().chain([level.exit()]).collect();
            ensure!(plan.iter().map(|s| s.target).eq(targets.iter().copied()), "seed {seed}: plan order");
            for step in plan {
                let sim = simulate(&level, &step.config());
                let hit = if step.target == level.exit() {
                    sim.end == SimEnd::Exit
                } else {
                    sim.items.contains(&step.target)
                };
                ensure!(hit, "seed {seed}: plan step misses {:?}", step.target);
            }
        }
    }
    let elapsed = t.elapsed();
    ensure!(elapsed < DEFLEKTOR_TIME_LIMIT, "took {elapsed:?}");
    Ok(format!("30 levels, {yes} solvable, plans replayed, {elapsed:.1?}"))
}

fn mindbender() -> Outcome {
    let mut yes = 0;
    for seed in 0..25u64 {
        let mut rng = Lcg::new(seed ^ 0xb17d);
        let n = rng.range(2, 5) as usize;
        let g = gen_bounded_digraph(n, rng.range(n as u32 - 1, 2 * n as u32) as usize, seed).map_err(|e| e.to_string())?;
        let s = rng.below(n as u32);
        let t = (s + 1 + rng.below(n as u32 - 1)) % n as u32;
        let expected = path_ref(n, &g.arcs, s, t);
        ensure!(connectivity(n, &g.arcs, s, t, true).decision == expected.is_some(), "seed {seed}: library oracle");
        let m = reduce_mindbender(&g, s, t).map_err(|e| format!("seed {seed}: {e}"))?;
        let bounds = BruteBounds { mirrors: 2 * n, polarizers: n };
        let brute = solve_ray_brute(&m.level, bounds).map_err(|e| format!("seed {seed}: {e}"))?;
        ensure!(brute.solvable == expected.is_some(), "seed {seed}: brute force says {}", brute.solvable);
        if let Some(path) = expected {
            yes += 1;
            let config = m.decode_path(&g, &path).map_err(|e| format!("seed {seed}: {e}"))?;
            let sim = simulate(&m.level, &config);
            ensure!(sim.end == SimEnd::Exit, "seed {seed}: decoded path ends in {:?}", sim.end);
        }
    }
    Ok(format!("25 instances, {yes} connected, decoded rays reach the exit"))
}

fn witness_soundness(w: &Witnesses) -> Outcome {
    ensure!(w.failures.is_empty(), "{} of {} fail: {}", w.failures.len(), w.checked, w.failures.join("; "));
    ensure!(w.checked > 0, "no yes-instances were collected");
    Ok(format!("{} canonical witnesses won", w.checked))
}

// ---------------------------------------------------------------------------
// Model invariants

/// Every move that could possibly be meant in `level`.
fn candidate_moves(level: &Level) -> Vec<Move> {
    let traversals = level.edges.iter().map(|e| Move::Traverse(e.id));
    let presses = level
        .vertices
        .iter()
        .flat_map(|v| (0..v.buttons.len() as u32).map(move |button| Move::Press { vertex: v.id, button }));
    traversals.chain(presses).collect()
}

/// Independent statement of the movement rules.
fn legal_ref(level: &Level, s: &GameState, mv: Move) -> bool {
    match mv {
        Move::Press { vertex, button } => {
            vertex == s.position && (button as usize) < level.vertices[vertex as usize].buttons.len()
        }
        Move::Traverse(e) => {
            let e = &level.edges[e as usize];
            let forward = e.from == s.position;
            let backward = e.to == s.position && !e.one_way;
            let door_ok = !e.door.is_some_and(|d| !s.door_open(d) && s.keys_held == 0);
            (forward || backward)
                && !s.consumed_edges.contains(e.id as usize)
                && s.tokens_held >= e.toll
                && door_ok
        }
    }
}

struct Ledger {
    tolls: u64,
    keys_used: u64,
}

fn invariant_trial(seed: u64) -> Result<(), String> {
    let level = gen_arena_level(ArenaGenParams::default(), seed);
    let mut rng = Lcg::new(seed.wrapping_mul(0x9e37_79b9_7f4a_7c15));
    let candidates = candidate_moves(&level);
    let first = initial_state(&level);
    ensure!(first == initial_state(&level), "initial state is not deterministic");
    let supply_tokens = u64::from(level.initial_tokens) + level.total_placed_tokens();
    let supply_keys = u64::from(level.initial_keys) + level.total_placed_keys();
    let mut ledger = Ledger { tolls: 0, keys_used: 0 };
    let mut state = first;
    let mut played = Vec::new();
    for _ in 0..rng.range(1, 24) {
        let legal = legal_moves(&level, &state);
        let legal_set: BTreeSet<Move> = legal.iter().copied().collect();
        ensure!(legal_set.len() == legal.len(), "duplicate legal moves");
        for &mv in &candidates {
            let reference = legal_ref(&level, &state, mv);
            let checked = check_move(&level, &state, mv).is_ok();
            ensure!(checked == reference, "check_move({mv}) = {checked}, rules say {reference}");
            ensure!(legal_set.contains(&mv) == reference, "legal_moves and rules disagree on {mv}");
            ensure!(apply_move(&level, &state, mv).is_ok() == reference, "apply_move and rules disagree on {mv}");
        }
        if legal.is_empty() {
            break;
        }
        let mv = legal[rng.below(legal.len() as u32) as usize];
        let next = apply_move(&level, &state, mv).unwrap();
        ensure!(apply_move(&level, &state, mv).unwrap() == next, "apply_move is not deterministic");
        if let Move::Traverse(e) = mv {
            let e = &level.edges[e as usize];
            ledger.tolls += u64::from(e.toll);
            if e.door.is_some_and(|d| !state.door_open(d)) {
                ledger.keys_used += 1;
            }
        }
        ensure!(state.visited.is_subset(&next.visited), "visited set shrank");
        ensure!(state.consumed_edges.is_subset(&next.consumed_edges), "consumed set shrank");
        for v in 0..level.vertices.len() as u32 {
            ensure!(next.tokens_at(v) <= state.tokens_at(v) && next.keys_at(v) <= state.keys_at(v), "items reappeared");
        }
        let tokens = u64::from(next.tokens_held) + next.tokens_left.iter().map(|&t| u64::from(t)).sum::<u64>() + ledger.tolls;
        ensure!(tokens == supply_tokens, "tokens not conserved: {tokens} vs {supply_tokens}");
        let keys = u64::from(next.keys_held) + next.keys_left.iter().map(|&k| u64::from(k)).sum::<u64>() + ledger.keys_used;
        ensure!(keys == supply_keys, "keys not conserved: {keys} vs {supply_keys}");
        played.push(mv);
        state = next;
    }
    let replay = played.iter().try_fold(initial_state(&level), |s, &mv| apply_move(&level, &s, mv));
    ensure!(replay.as_ref() == Ok(&state), "replaying the moves gives another state");
    Ok(())
}

fn invariants() -> Outcome {
    for seed in 0..INVARIANT_TRIALS {
        invariant_trial(seed).map_err(|e| format!("trial {seed}: {e}"))?;
    }
    Ok(format!("{INVARIANT_TRIALS} trials"))
}

// ---------------------------------------------------------------------------

fn run(f: impl FnOnce() -> Outcome) -> Outcome {
    panic::catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|payload| {
        let msg = payload
            .downcast_ref::<String>()
            .cloned()
            .or_else(|| payload.downcast_ref::<&str>().map(|s| s.to_string()))
            .unwrap_or_else(|| "panic".into());
        Err(format!("panicked: {msg}"))
    })
}

fn main() -> ExitCode {
    let mut w = Witnesses::default();
    let results: Vec<(&str, Outcome)> = vec![
        ("C1 single-use reduction matches Hamiltonicity", run(|| meta1(&mut w))),
        ("C2 token reductions match Hamiltonicity", run(|| meta1b(&mut w))),
        ("C3 key-and-door reductions match directed Hamiltonicity", run(|| meta1c(&mut w))),
        ("C4 circuit levels: fixpoint = evaluation = search", run(|| circuits(&mut w))),
        ("C5 closing-door gadgets and reductions", run(|| meta2b3b(&mut w))),
        ("C6 formula levels match evaluation", run(|| qbf(&mut w))),
        ("C7 marked edge crossed 2^q times", run(exponential_rounds)),
        ("C8 canonical witnesses win", run(|| witness_soundness(&w))),
        ("C9 reachability solver matches brute force", run(deflektor)),
        ("C10 ray levels from digraphs match connectivity", run(mindbender)),
        ("C11 model invariants", run(invariants)),
    ];
    let mut failed = 0;
    for (name, outcome) in &results {
        match outcome {
            Ok(detail) => println!("[PASS] {name}: {detail}"),
            Err(detail) => {
                failed += 1;
                println!("[FAIL] {name}: {detail}");
            }
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        println!("{failed} criteria failed");
        ExitCode::FAILURE
    }
}
