//! Text formats for instances, levels and certificates.
//!
//! * Graphs: `p edge N M`, then `M` lines `e U V` (undirected) or `a U V`
//!   (directed), vertices numbered from 1. Lines starting with `c` are
//!   comments.
//! * Formulas: a QDIMACS subset. `p cnf N M`, quantifier lines `e ... 0` /
//!   `a ... 0`, then `M` clause lines of exactly three literals ending in `0`.
//! * Circuits: `in NAME 0|1`, `gate NAME AND|OR A B`, `out NAME`. Wires are
//!   numbered inputs first, then gates, each in file order; a gate may name
//!   a wire defined further down.
//! * Certificates: `t EDGE` or `p VERTEX BUTTON` per line; `#` starts a comment.
//! * Levels: JSON, see [`Level::to_json`].
//! * Ray levels: `ray W H`, then `H` rows of `W` cells, then one
//!   `rbase L B` line per rotating polarizer with a non-zero base `B`, where
//!   `L` names the polarizer by its row-major rank (`a` is the first).
//!
//! Every writer emits the canonical form its parser accepts, so
//! `write(parse(write(x))) == write(x)`.

use std::collections::{HashMap, HashSet};
use std::fmt::Write as _;

use thiserror::Error;

use crate::arena::{Level, Move};
use crate::ray::{Cell, RayLevel};
use crate::instance::{CircuitInput, DGraph, Gate, GateOp, Literal, MonotoneCircuit, QuantifiedFormula, Quantifier, UGraph};
use crate::solver::Certificate;

/// Positions are 1-based.
#[derive(Clone, Debug, PartialEq, Eq, Error)]
#[error("line {line}, column {col}: expected {expected}")]
pub struct SyntaxError {
    pub line: usize,
    pub col: usize,
    pub expected: String,
}

/// Whitespace-separated tokens of one line, with their columns.
struct Line<'a> {
    number: usize,
    tokens: Vec<(usize, &'a str)>,
    end_col: usize,
    next: usize,
}

impl<'a> Line<'a> {
    fn new(number: usize, text: &'a str) -> Self {
        let mut tokens = Vec::new();
        let mut start = None;
        for (i, ch) in text.char_indices().chain([(text.len(), ' ')]) {
            match (ch.is_whitespace(), start) {
                (false, None) => start = Some(i),
                (true, Some(s)) => {
                    tokens.push((s + 1, &text[s..i]));
                    start = None;
                }
                _ => {}
            }
        }
        Line { number, tokens, end_col: text.len() + 1, next: 0 }
    }

    fn err(&self, col: usize, expected: impl Into<String>) -> SyntaxError {
        SyntaxError { line: self.number, col, expected: expected.into() }
    }

    fn word(&mut self, what: &str) -> Result<(usize, &'a str), SyntaxError> {
        let t = self.tokens.get(self.next).copied().ok_or_else(|| self.err(self.end_col, what))?;
        self.next += 1;
        Ok(t)
    }

    fn keyword(&mut self, kw: &str) -> Result<(), SyntaxError> {
        let (col, w) = self.word(&format!("`{kw}`"))?;
        if w == kw {
            Ok(())
        } else {
            Err(self.err(col, format!("`{kw}`")))
        }
    }

    fn number<T: std::str::FromStr>(&mut self, what: &str) -> Result<(usize, T), SyntaxError> {
        let (col, w) = self.word(what)?;
        w.parse().map(|v| (col, v)).map_err(|_| self.err(col, what))
    }

    fn done(&self) -> Result<(), SyntaxError> {
        match self.tokens.get(self.next) {
            Some(&(col, _)) => Err(self.err(col, "end of line")),
            None => Ok(()),
        }
    }
}

/// Non-blank lines that are not comments.
fn content_lines<'a>(text: &'a str, comment: &'a str) -> impl Iterator<Item = Line<'a>> {
    text.lines()
        .enumerate()
        .filter(move |(_, l)| {
            let t = l.trim_start();
            !t.is_empty() && !t.starts_with(comment)
        })
        .map(|(i, l)| Line::new(i + 1, l))
}

fn end_of_input(text: &str) -> SyntaxError {
    SyntaxError { line: text.lines().count() + 1, col: 1, expected: "more lines".into() }
}

fn parse_graph(text: &str, tag: &str) -> Result<(usize, Vec<(u32, u32)>), SyntaxError> {
    let mut lines = content_lines(text, "c");
    let mut header = lines.next().ok_or_else(|| end_of_input(text))?;
    header.keyword("p")?;
    header.keyword("edge")?;
    let (_, n): (_, usize) = header.number("vertex count")?;
    let (_, m): (_, usize) = header.number("edge count")?;
    header.done()?;
    let mut edges = Vec::with_capacity(m);
    for mut line in lines {
        if edges.len() == m {
            return Err(line.err(1, "end of input"));
        }
        line.keyword(tag)?;
        let endpoint = |line: &mut Line| -> Result<u32, SyntaxError> {
            let (col, v): (_, usize) = line.number("vertex number")?;
            if v == 0 || v > n {
                return Err(line.err(col, format!("vertex number in 1..={n}")));
            }
            Ok(v as u32 - 1)
        };
        let a = endpoint(&mut line)?;
        let b = endpoint(&mut line)?;
        line.done()?;
        edges.push((a, b));
    }
    if edges.len() != m {
        return Err(end_of_input(text));
    }
    Ok((n, edges))
}

fn write_graph(n: usize, edges: &[(u32, u32)], tag: &str) -> String {
    let mut s = format!("p edge {n} {}\n", edges.len());
    for &(a, b) in edges {
        let _ = writeln!(s, "{tag} {} {}", a + 1, b + 1);
    }
    s
}

pub fn parse_ugraph(text: &str) -> Result<UGraph, SyntaxError> {
    parse_graph(text, "e").map(|(n, edges)| UGraph { n, edges })
}

pub fn write_ugraph(g: &UGraph) -> String {
    write_graph(g.n, &g.edges, "e")
}

pub fn parse_dgraph(text: &str) -> Result<DGraph, SyntaxError> {
    parse_graph(text, "a").map(|(n, arcs)| DGraph { n, arcs })
}

pub fn write_dgraph(g: &DGraph) -> String {
    write_graph(g.n, &g.arcs, "a")
}

pub fn parse_qdimacs(text: &str) -> Result<QuantifiedFormula, SyntaxError> {
    let mut lines = content_lines(text, "c").peekable();
    let mut header = lines.next().ok_or_else(|| end_of_input(text))?;
    header.keyword("p")?;
    header.keyword("cnf")?;
    let (_, n): (_, u32) = header.number("variable count")?;
    let (_, m): (_, usize) = header.number("clause count")?;
    header.done()?;

    let literal = |line: &mut Line, (col, v): (usize, i64)| -> Result<Literal, SyntaxError> {
        if v == 0 || v.unsigned_abs() > u64::from(n) {
            return Err(line.err(col, format!("literal in ±1..={n}")));
        }
        Ok(Literal { var: v.unsigned_abs() as u32 - 1, negated: v < 0 })
    };

    let mut prefix = Vec::new();
    let mut clauses = Vec::with_capacity(m);
    for mut line in lines {
        let first = line.tokens[0].1;
        if clauses.is_empty() && (first == "e" || first == "a") {
            let q = if first == "e" { Quantifier::Exists } else { Quantifier::Forall };
            line.next = 1;
            loop {
                let tok = line.number::<i64>("variable or 0")?;
                if tok.1 == 0 {
                    break;
                }
                if tok.1 < 0 {
                    return Err(line.err(tok.0, "positive variable"));
                }
                prefix.push((q, literal(&mut line, tok)?.var));
            }
            line.done()?;
            continue;
        }
        if clauses.len() == m {
            return Err(line.err(1, "end of input"));
        }
        let mut lits = [Literal::pos(0); 3];
        for slot in &mut lits {
            let tok = line.number::<i64>("literal")?;
            if tok.1 == 0 {
                return Err(line.err(tok.0, "three literals before 0"));
            }
            *slot = literal(&mut line, tok)?;
        }
        let (col, z): (_, i64) = line.number("0 after three literals")?;
        if z != 0 {
            return Err(line.err(col, "0 after three literals"));
        }
        line.done()?;
        clauses.push(lits);
    }
    if clauses.len() != m {
        return Err(end_of_input(text));
    }
    Ok(QuantifiedFormula { num_vars: n, prefix, clauses })
}

pub fn write_qdimacs(f: &QuantifiedFormula) -> String {
    let mut s = format!("p cnf {} {}\n", f.num_vars, f.clauses.len());
    let mut i = 0;
    while i < f.prefix.len() {
        let q = f.prefix[i].0;
        s.push(if q == Quantifier::Exists { 'e' } else { 'a' });
        while i < f.prefix.len() && f.prefix[i].0 == q {
            let _ = write!(s, " {}", f.prefix[i].1 + 1);
            i += 1;
        }
        s.push_str(" 0\n");
    }
    for c in &f.clauses {
        for l in c {
            let v = i64::from(l.var) + 1;
            let _ = write!(s, "{} ", if l.negated { -v } else { v });
        }
        s.push_str("0\n");
    }
    s
}

pub fn parse_circuit(text: &str) -> Result<MonotoneCircuit, SyntaxError> {
    struct PendingGate<'a> {
        name: &'a str,
        op: GateOp,
        args: [(usize, usize, &'a str); 2],
    }
    let mut inputs = Vec::new();
    let mut gates: Vec<PendingGate> = Vec::new();
    let mut output: Option<(usize, usize, &str)> = None;
    let mut names: HashSet<&str> = HashSet::new();

    for mut line in content_lines(text, "#") {
        let (col, kind) = line.word("`in`, `gate` or `out`")?;
        match kind {
            "in" => {
                let (ncol, name) = line.word("input name")?;
                let (vcol, v) = line.word("0 or 1")?;
                let value = match v {
                    "0" => false,
                    "1" => true,
                    _ => return Err(line.err(vcol, "0 or 1")),
                };
                line.done()?;
                if !names.insert(name) {
                    return Err(line.err(ncol, format!("a fresh wire name, `{name}` is taken")));
                }
                inputs.push(CircuitInput { name: name.to_string(), value });
            }
            "gate" => {
                let (ncol, name) = line.word("gate name")?;
                let (ocol, op) = line.word("AND or OR")?;
                let op = match op {
                    "AND" => GateOp::And,
                    "OR" => GateOp::Or,
                    _ => return Err(line.err(ocol, "AND or OR")),
                };
                let (ac, a) = line.word("first gate input")?;
                let (bc, b) = line.word("second gate input")?;
                line.done()?;
                if !names.insert(name) {
                    return Err(line.err(ncol, format!("a fresh wire name, `{name}` is taken")));
                }
                gates.push(PendingGate { name, op, args: [(line.number, ac, a), (line.number, bc, b)] });
            }
            "out" => {
                let (ocol, name) = line.word("output name")?;
                line.done()?;
                if output.is_some() {
                    return Err(line.err(col, "a single `out` line"));
                }
                output = Some((line.number, ocol, name));
            }
            _ => return Err(line.err(col, "`in`, `gate` or `out`")),
        }
    }

    let index: HashMap<&str, u32> = inputs
        .iter()
        .map(|i| i.name.as_str())
        .chain(gates.iter().map(|g| g.name))
        .enumerate()
        .map(|(i, n)| (n, i as u32))
        .collect();
    let resolve = |(line, col, name): (usize, usize, &str)| {
        index.get(name).copied().ok_or_else(|| SyntaxError { line, col, expected: format!("a defined wire, not `{name}`") })
    };
    let mut resolved = Vec::with_capacity(gates.len());
    for g in &gates {
        resolved.push(Gate { name: g.name.to_string(), op: g.op, inputs: [resolve(g.args[0])?, resolve(g.args[1])?] });
    }
    let output = resolve(output.ok_or_else(|| end_of_input(text))?)?;
    Ok(MonotoneCircuit { inputs, gates: resolved, output })
}

pub fn write_circuit(c: &MonotoneCircuit) -> String {
    let mut s = String::new();
    for i in &c.inputs {
        let _ = writeln!(s, "in {} {}", i.name, u8::from(i.value));
    }
    for g in &c.gates {
        let op = match g.op {
            GateOp::And => "AND",
            GateOp::Or => "OR",
        };
        let _ = writeln!(s, "gate {} {op} {} {}", g.name, c.wire_name(g.inputs[0]), c.wire_name(g.inputs[1]));
    }
    let _ = writeln!(s, "out {}", c.wire_name(c.output));
    s
}

pub fn parse_certificate(text: &str) -> Result<Certificate, SyntaxError> {
    let mut moves = Vec::new();
    for mut line in content_lines(text, "#") {
        let (col, kind) = line.word("`t` or `p`")?;
        let mv = match kind {
            "t" => Move::Traverse(line.number("edge id")?.1),
            "p" => {
                let vertex = line.number("vertex id")?.1;
                let button = line.number("button index")?.1;
                Move::Press { vertex, button }
            }
            _ => return Err(line.err(col, "`t` or `p`")),
        };
        line.done()?;
        moves.push(mv);
    }
    Ok(Certificate::new(moves))
}

pub fn write_certificate(c: &Certificate) -> String {
    c.moves.iter().map(|m| format!("{m}\n")).collect()
}

pub fn parse_level(text: &str) -> Result<Level, SyntaxError> {
    Level::from_json(text).map_err(|e| SyntaxError {
        line: e.line(),
        col: e.column(),
        expected: format!("a valid level document ({e})"),
    })
}

pub fn write_level(level: &Level) -> String {
    level.to_json()
}

fn ray_cell(ch: char) -> Option<Cell> {
    Some(match ch {
        '.' => Cell::Empty,
        '#' => Cell::Opaque,
        '=' => Cell::Reflecting,
        'M' => Cell::Mirror,
        'B' => Cell::Beam,
        'X' => Cell::Exit,
        '*' => Cell::Item,
        'o' => Cell::Mine,
        'R' => Cell::Rotating(0),
        'P' => Cell::Orientable,
        '0'..='7' => Cell::Polarizer(ch as u8 - b'0'),
        'a'..='z' => Cell::Teleporter(ch as u8),
        _ => return None,
    })
}

fn ray_char(c: Cell) -> char {
    match c {
        Cell::Empty => '.',
        Cell::Opaque => '#',
        Cell::Reflecting => '=',
        Cell::Mirror => 'M',
        Cell::Beam => 'B',
        Cell::Exit => 'X',
        Cell::Item => '*',
        Cell::Mine => 'o',
        Cell::Rotating(_) => 'R',
        Cell::Orientable => 'P',
        Cell::Polarizer(o) => (b'0' + o) as char,
        Cell::Teleporter(id) => id as char,
    }
}

pub fn parse_ray_level(text: &str) -> Result<RayLevel, SyntaxError> {
    let mut lines = text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty());
    let (hn, h) = lines.next().ok_or_else(|| end_of_input(text))?;
    let mut header = Line::new(hn + 1, h);
    header.keyword("ray")?;
    let (_, width): (_, usize) = header.number("grid width")?;
    let (_, height): (_, usize) = header.number("grid height")?;
    header.done()?;
    let mut cells = Vec::with_capacity(width * height);
    for _ in 0..height {
        let (ln, row) = lines.next().ok_or_else(|| end_of_input(text))?;
        let chars: Vec<char> = row.chars().collect();
        for (i, &ch) in chars.iter().enumerate() {
            let cell = ray_cell(ch).filter(|_| i < width);
            cells.push(cell.ok_or_else(|| SyntaxError {
                line: ln + 1,
                col: i + 1,
                expected: if i < width { "a ray cell".into() } else { "end of row".into() },
            })?);
        }
        if chars.len() < width {
            return Err(SyntaxError { line: ln + 1, col: chars.len() + 1, expected: format!("{width} cells") });
        }
    }
    let rotating: Vec<usize> = (0..cells.len()).filter(|&i| matches!(cells[i], Cell::Rotating(_))).collect();
    for (ln, l) in lines {
        let mut line = Line::new(ln + 1, l);
        line.keyword("rbase")?;
        let (col, name) = line.word("rotating polarizer letter")?;
        let rank = match name.as_bytes() {
            [c @ b'a'..=b'z'] if ((c - b'a') as usize) < rotating.len() => (c - b'a') as usize,
            _ => return Err(line.err(col, format!("a letter naming one of {} rotating polarizers", rotating.len()))),
        };
        let (col, base): (_, u8) = line.number("base orientation 0..7")?;
        if base >= 8 {
            return Err(line.err(col, "base orientation 0..7"));
        }
        line.done()?;
        cells[rotating[rank]] = Cell::Rotating(base);
    }
    RayLevel::new(width, height, cells).map_err(|e| SyntaxError { line: 1, col: 1, expected: format!("a valid ray level ({e})") })
}

pub fn write_ray_level(level: &RayLevel) -> String {
    let mut s = format!("ray {} {}\n", level.width(), level.height());
    for row in level.cells().chunks(level.width()) {
        s.extend(row.iter().map(|&c| ray_char(c)));
        s.push('\n');
    }
    let rotating = level.cells().iter().filter_map(|c| match c {
        Cell::Rotating(b) => Some(*b),
        _ => None,
    });
    for (rank, base) in rotating.enumerate() {
        if base != 0 {
            let _ = writeln!(s, "rbase {} {base}", (b'a' + rank as u8) as char);
        }
    }
    s
}
