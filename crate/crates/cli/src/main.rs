use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use rayon::prelude::*;

use hardgame::formats::{
    parse_certificate, parse_circuit, parse_dgraph, parse_level, parse_qdimacs, parse_ray_level, parse_ugraph,
    write_certificate, write_circuit, write_dgraph, write_level, write_qdimacs, write_ray_level, write_ugraph,
};
use hardgame::generate::{gen_circuit, gen_cubic_graph, gen_degree_valid_digraph, gen_qbf};
use hardgame::instance::MonotoneCircuit;
use hardgame::oracle::{
    connectivity, eval_circuit, eval_qbf, ham_cycle_directed, ham_cycle_undirected, Strategy, DEFAULT_HAM_BOUND,
};
use hardgame::ray::{reduce_mindbender, solve_deflektor, solve_ray_brute, trace_ray, BruteBounds, Direction, Pos};
use hardgame::reduce::{canonical_witness, reduce, Instance, Meta, OracleSolution, ReduceOptions, SourceKind};
use hardgame::solver::{check_certificate, search, CheckOutcome, Verdict, DEFAULT_STATE_BUDGET};

/// Reductions from hard problems to avatar games, with exact solvers and
/// independent oracles to check them against.
#[derive(Parser)]
#[command(name = "hardgame", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compile an instance into a level.
    Reduce {
        #[arg(long)]
        meta: Meta,
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        out: PathBuf,
        /// Also write the canonical winning certificate, if the instance is a yes-instance.
        #[arg(long)]
        witness: Option<PathBuf>,
        /// Start vertex for the undirected constructions.
        #[arg(long, default_value_t = 0)]
        vertex: u32,
        /// Drop the exit requirement of reduction 1.
        #[arg(long)]
        no_exit: bool,
    },
    /// Decide a level by exhaustive search.
    Solve {
        level: PathBuf,
        #[command(flatten)]
        budget: BudgetArg,
        /// Print search statistics.
        #[arg(long)]
        stats: bool,
        /// Write the winning certificate here.
        #[arg(long)]
        cert: Option<PathBuf>,
    },
    /// Replay a certificate on a level.
    Check { level: PathBuf, cert: PathBuf },
    /// Run a reference decision procedure.
    #[command(subcommand)]
    Oracle(OracleCommand),
    /// Laser-grid puzzles.
    #[command(subcommand)]
    Ray(RayCommand),
    /// Generate seeded random instances.
    #[command(subcommand)]
    Gen(GenCommand),
    /// Compare solver and oracle on every instance file in a directory.
    Verify {
        #[arg(long)]
        meta: Meta,
        #[arg(long)]
        corpus: PathBuf,
        #[command(flatten)]
        budget: BudgetArg,
    },
}

#[derive(Args)]
struct BudgetArg {
    /// State budget; defaults to $HARDGAME_BUDGET, then 10000000.
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    budget: Option<u64>,
}

impl BudgetArg {
    fn resolve(&self) -> Result<usize> {
        if let Some(b) = self.budget {
            return Ok(b as usize);
        }
        match std::env::var("HARDGAME_BUDGET") {
            Ok(text) => match text.trim().parse::<usize>() {
                Ok(b) if b > 0 => Ok(b),
                _ => Err(usage(format!("HARDGAME_BUDGET must be a positive integer, got {text:?}"))),
            },
            Err(_) => Ok(DEFAULT_STATE_BUDGET),
        }
    }
}

#[derive(Subcommand)]
enum OracleCommand {
    /// Hamiltonian cycle in a DIMACS graph.
    Ham {
        file: PathBuf,
        /// Read the file as a digraph ("a" lines).
        #[arg(long)]
        directed: bool,
    },
    /// Truth of a QDIMACS formula.
    Qbf { file: PathBuf },
    /// Output value of a circuit netlist.
    Circuit { file: PathBuf },
    /// Path from s to t.
    Conn {
        file: PathBuf,
        #[arg(long)]
        s: u32,
        #[arg(long)]
        t: u32,
        #[arg(long)]
        directed: bool,
    },
}

#[derive(Subcommand)]
enum RayCommand {
    /// Follow one ray from a beam or mirror.
    Trace {
        level: PathBuf,
        /// Origin cell as `x,y`.
        #[arg(long, value_parser = parse_pos)]
        from: Pos,
        #[arg(long, value_parser = clap::value_parser!(u8).range(0..16))]
        dir: u8,
        #[arg(long, default_value_t = 0, value_parser = clap::value_parser!(u8).range(0..8))]
        phase: u8,
    },
    /// Decide a level through the chained reachability graph.
    Solve { level: PathBuf },
    /// Decide a level by enumerating configurations.
    Brute {
        level: PathBuf,
        #[arg(long, default_value_t = 5, value_parser = clap::value_parser!(u64).range(1..))]
        mirrors: u64,
        #[arg(long, default_value_t = 4, value_parser = clap::value_parser!(u64).range(1..))]
        polarizers: u64,
    },
    /// Build a ray level from a digraph with in- and outdegrees at most two.
    Reduce {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        s: u32,
        #[arg(long)]
        t: u32,
        #[arg(long)]
        out: PathBuf,
    },
}

#[derive(Subcommand)]
enum GenCommand {
    /// Connected simple cubic graph.
    Cubic {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Digraph whose vertices are half 1-in/2-out and half 2-in/1-out.
    Dvd {
        #[arg(long)]
        half: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Quantified 3-CNF formula.
    Qbf {
        #[arg(long)]
        vars: u32,
        #[arg(long)]
        clauses: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Monotone circuit.
    Circuit {
        #[arg(long)]
        inputs: usize,
        #[arg(long)]
        gates: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

/// Marks errors that should exit with the usage status.
#[derive(Debug)]
struct Usage(String);

impl std::fmt::Display for Usage {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for Usage {}

fn usage(msg: impl Into<String>) -> anyhow::Error {
    Usage(msg.into()).into()
}

fn bad(e: impl std::fmt::Display) -> anyhow::Error {
    usage(e.to_string())
}

fn parse_pos(text: &str) -> Result<Pos, String> {
    let (x, y) = text.split_once(',').ok_or("expected x,y")?;
    let coord = |s: &str| s.trim().parse::<usize>().map_err(|e| e.to_string());
    Ok((coord(x)?, coord(y)?))
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| usage(format!("cannot read {}: {e}", path.display())))
}

fn write(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text).with_context(|| format!("cannot write {}", path.display()))
}

/// Reads and parses `path`, reporting syntax errors with the file name.
fn load<T, E: std::fmt::Display>(path: &Path, parse: impl FnOnce(&str) -> Result<T, E>) -> Result<T> {
    let text = read(path)?;
    parse(&text).map_err(|e| usage(format!("{}: {e}", path.display())))
}

fn load_instance(kind: SourceKind, path: &Path) -> Result<Instance> {
    Ok(match kind {
        SourceKind::UGraph => Instance::UGraph(load(path, parse_ugraph)?),
        SourceKind::DGraph => Instance::DGraph(load(path, parse_dgraph)?),
        SourceKind::Formula => Instance::Formula(load(path, parse_qdimacs)?),
        SourceKind::Circuit => Instance::Circuit(load(path, parse_circuit)?),
    })
}

/// The oracle's answer for an instance, with the solution it found.
fn consult_oracle(instance: &Instance) -> Result<Option<OracleSolution>> {
    Ok(match instance {
        Instance::UGraph(g) => ham_cycle_undirected(g, DEFAULT_HAM_BOUND).map_err(bad)?.witness.map(OracleSolution::Cycle),
        Instance::DGraph(g) => ham_cycle_directed(g, DEFAULT_HAM_BOUND).map_err(bad)?.witness.map(OracleSolution::Cycle),
        Instance::Formula(f) => eval_qbf(f).map_err(bad)?.witness.map(OracleSolution::Strategy),
        Instance::Circuit(c) => {
            let answer = eval_circuit(c).map_err(bad)?;
            answer.witness.filter(|_| answer.decision).map(OracleSolution::Evaluation)
        }
    })
}

fn print_strategy(out: &mut String, s: &Strategy, depth: usize) {
    let pad = "  ".repeat(depth);
    match s {
        Strategy::Done => {}
        Strategy::Exists { var, value, then } => {
            let _ = writeln!(out, "{pad}exists x{} = {value}", var + 1);
            print_strategy(out, then, depth + 1);
        }
        Strategy::Forall { var, if_true, if_false } => {
            for (value, branch) in [(true, if_true), (false, if_false)] {
                let _ = writeln!(out, "{pad}forall x{} = {value}", var + 1);
                print_strategy(out, branch, depth + 1);
            }
        }
    }
}

fn yes_no(decision: bool) -> &'static str {
    if decision {
        "yes"
    } else {
        "no"
    }
}

fn joined(items: &[u32]) -> String {
    items.iter().map(u32::to_string).collect::<Vec<_>>().join(" ")
}

fn circuit_lines(c: &MonotoneCircuit, values: &[bool]) -> String {
    values.iter().enumerate().map(|(w, v)| format!("{} {}\n", c.wire_name(w as u32), u8::from(*v))).collect()
}

fn run(cli: Cli) -> Result<ExitCode> {
    match cli.command {
        Command::Reduce { meta, input, out, witness, vertex, no_exit } => {
            let instance = load_instance(meta.source(), &input)?;
            let opts = ReduceOptions { vertex, require_exit: !no_exit };
            let bundle = reduce(meta, &instance, &opts).map_err(bad)?;
            write(&out, &write_level(&bundle.level))?;
            if let Some(path) = witness {
                match consult_oracle(&instance)? {
                    Some(solution) => {
                        write(&path, &write_certificate(&canonical_witness(&bundle, &solution)?))?;
                    }
                    None => eprintln!("no witness: the instance is a no-instance"),
                }
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Solve { level, budget, stats, cert } => {
            let level = load(&level, parse_level)?;
            let report = search(&level, budget.resolve()?);
            let code = match &report.verdict {
                Verdict::Solvable(c) => {
                    println!("SOLVABLE");
                    if stats {
                        println!("witness length {}", c.len());
                        if let Some(e) = level.marked_edge {
                            println!("marked edge traversals {}", c.traversals_of(e));
                        }
                    }
                    if let Some(path) = cert {
                        write(&path, &write_certificate(c))?;
                    }
                    ExitCode::SUCCESS
                }
                Verdict::Unsolvable => {
                    println!("UNSOLVABLE");
                    ExitCode::SUCCESS
                }
                Verdict::BudgetExceeded(_) => {
                    println!("BUDGET EXCEEDED");
                    ExitCode::from(1)
                }
            };
            if stats {
                println!("states {}", report.states);
            }
            Ok(code)
        }
        Command::Check { level, cert } => {
            let level = load(&level, parse_level)?;
            let cert = load(&cert, parse_certificate)?;
            match check_certificate(&level, &cert) {
                CheckOutcome::Won => {
                    println!("WON");
                    Ok(ExitCode::SUCCESS)
                }
                CheckOutcome::FailedAt { step, reason } => {
                    println!("FAILED at step {step}: {reason}");
                    Ok(ExitCode::from(1))
                }
            }
        }
        Command::Oracle(cmd) => {
            let mut out = String::new();
            match cmd {
                OracleCommand::Ham { file, directed } => {
                    let answer = if directed {
                        ham_cycle_directed(&load(&file, parse_dgraph)?, DEFAULT_HAM_BOUND).map_err(bad)?
                    } else {
                        ham_cycle_undirected(&load(&file, parse_ugraph)?, DEFAULT_HAM_BOUND).map_err(bad)?
                    };
                    writeln!(out, "{}", yes_no(answer.decision))?;
                    if let Some(c) = answer.witness {
                        writeln!(out, "cycle {}", joined(&c))?;
                    }
                }
                OracleCommand::Qbf { file } => {
                    let answer = eval_qbf(&load(&file, parse_qdimacs)?).map_err(bad)?;
                    writeln!(out, "{}", yes_no(answer.decision))?;
                    if let Some(s) = answer.witness {
                        print_strategy(&mut out, &s, 0);
                    }
                }
                OracleCommand::Circuit { file } => {
                    let c = load(&file, parse_circuit)?;
                    let answer = eval_circuit(&c).map_err(bad)?;
                    writeln!(out, "{}", yes_no(answer.decision))?;
                    if let Some(values) = answer.witness {
                        out.push_str(&circuit_lines(&c, &values));
                    }
                }
                OracleCommand::Conn { file, s, t, directed } => {
                    let (n, edges) = if directed {
                        let g = load(&file, parse_dgraph)?;
                        (g.n, g.arcs)
                    } else {
                        let g = load(&file, parse_ugraph)?;
                        (g.n, g.edges)
                    };
                    if s as usize >= n || t as usize >= n {
                        return Err(usage(format!("s and t must be below {n}")));
                    }
                    let answer = connectivity(n, &edges, s, t, directed);
                    writeln!(out, "{}", yes_no(answer.decision))?;
                    if let Some(p) = answer.witness {
                        writeln!(out, "path {}", joined(&p))?;
                    }
                }
            }
            print!("{out}");
            Ok(ExitCode::SUCCESS)
        }
        Command::Ray(cmd) => run_ray(cmd),
        Command::Gen(cmd) => {
            let text = match cmd {
                GenCommand::Cubic { n, seed } => write_ugraph(&gen_cubic_graph(n, seed).map_err(bad)?),
                GenCommand::Dvd { half, seed } => {
                    write_dgraph(&gen_degree_valid_digraph(half, seed).map_err(bad)?)
                }
                GenCommand::Qbf { vars, clauses, seed } => {
                    write_qdimacs(&gen_qbf(vars, clauses, seed).map_err(bad)?)
                }
                GenCommand::Circuit { inputs, gates, seed } => {
                    write_circuit(&gen_circuit(inputs, gates, seed).map_err(bad)?)
                }
            };
            print!("{text}");
            Ok(ExitCode::SUCCESS)
        }
        Command::Verify { meta, corpus, budget } => verify(meta, &corpus, budget.resolve()?),
    }
}

fn run_ray(cmd: RayCommand) -> Result<ExitCode> {
    match cmd {
        RayCommand::Trace { level, from, dir, phase } => {
            let level = load(&level, parse_ray_level)?;
            let t = trace_ray(&level, from, Direction::new(dir), phase).map_err(bad)?;
            println!("end {:?}", t.end);
            for (x, y) in t.items {
                println!("item {x},{y}");
            }
        }
        RayCommand::Solve { level } => {
            let level = load(&level, parse_ray_level)?;
            let outcome = solve_deflektor(&level).map_err(bad)?;
            println!("{}", if outcome.solvable { "SOLVABLE" } else { "UNSOLVABLE" });
            for step in outcome.plan.iter().flatten() {
                let aims: Vec<String> = step.aims.iter().map(|((x, y), k)| format!("{x},{y}:{k}")).collect();
                println!("target {},{} phase {} aims {}", step.target.0, step.target.1, step.phase, aims.join(" "));
            }
        }
        RayCommand::Brute { level, mirrors, polarizers } => {
            let level = load(&level, parse_ray_level)?;
            let bounds = BruteBounds { mirrors: mirrors as usize, polarizers: polarizers as usize };
            let report = solve_ray_brute(&level, bounds).map_err(bad)?;
            println!("{}", if report.solvable { "SOLVABLE" } else { "UNSOLVABLE" });
        }
        RayCommand::Reduce { input, s, t, out } => {
            let g = load(&input, parse_dgraph)?;
            let m = reduce_mindbender(&g, s, t).map_err(bad)?;
            write(&out, &write_ray_level(&m.level))?;
        }
    }
    Ok(ExitCode::SUCCESS)
}

struct Row {
    name: String,
    oracle: bool,
    solver: Result<bool, String>,
}

fn verify_one(meta: Meta, path: &Path, budget: usize) -> Result<Row> {
    let name = path.file_name().map(|n| n.to_string_lossy().into_owned()).unwrap_or_default();
    let instance = load_instance(meta.source(), path)?;
    let oracle = consult_oracle(&instance)?.is_some();
    let bundle = reduce(meta, &instance, &ReduceOptions::default()).map_err(|e| anyhow!("{name}: {e}"))?;
    let solver = match search(&bundle.level, budget).verdict {
        Verdict::Solvable(_) => Ok(true),
        Verdict::Unsolvable => Ok(false),
        Verdict::BudgetExceeded(n) => Err(format!("budget exceeded at {n} states")),
    };
    Ok(Row { name, oracle, solver })
}

fn verify(meta: Meta, corpus: &Path, budget: usize) -> Result<ExitCode> {
    let entries = fs::read_dir(corpus).map_err(|e| usage(format!("cannot read {}: {e}", corpus.display())))?;
    let mut files: Vec<PathBuf> = entries
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.is_file())
        .collect();
    if files.is_empty() {
        bail!(usage(format!("{} holds no instance files", corpus.display())));
    }
    files.sort();
    let rows = files.par_iter().map(|p| verify_one(meta, p, budget)).collect::<Result<Vec<_>>>()?;
    let width = rows.iter().map(|r| r.name.len()).max().unwrap_or(0).max("instance".len());
    println!("{:width$}  oracle  solver  agree", "instance");
    let mut mismatches = 0;
    for r in &rows {
        let (solver, agree) = match &r.solver {
            Ok(v) => (yes_no(*v).to_string(), *v == r.oracle),
            Err(e) => (e.clone(), false),
        };
        mismatches += usize::from(!agree);
        println!("{:width$}  {:6}  {:6}  {}", r.name, yes_no(r.oracle), solver, if agree { "PASS" } else { "FAIL" });
    }
    println!("{} of {} agree", rows.len() - mismatches, rows.len());
    Ok(if mismatches == 0 { ExitCode::SUCCESS } else { ExitCode::from(1) })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            if e.downcast_ref::<Usage>().is_some() {
                ExitCode::from(2)
            } else {
                ExitCode::from(1)
            }
        }
    }
}
