use std::collections::{HashSet, VecDeque};

use hardgame::arena::{apply_move, initial_state, legal_moves, EdgeSpec, GameState, Level, Move};
use hardgame::reduce::{build_gadget, Fragment, GadgetKind};

/// Every state reachable from `from`.
fn explore(level: &Level, from: GameState) -> Vec<GameState> {
    let mut seen = HashSet::from([from.clone()]);
    let mut queue = VecDeque::from([from]);
    let mut out = Vec::new();
    while let Some(s) = queue.pop_front() {
        for mv in legal_moves(level, &s) {
            let next = apply_move(level, &s, mv).expect("legal moves apply");
            if seen.insert(next.clone()) {
                queue.push_back(next);
            }
        }
        out.push(s);
    }
    out
}

fn starting_at(f: &Fragment, port: &str) -> Level {
    let mut level = f.level.clone();
    level.start = f.port(port);
    level
}

fn reaches(level: &Level, target: u32) -> bool {
    explore(level, initial_state(level)).iter().any(|s| s.position == target)
}

fn play(level: &Level, moves: &[Move]) -> GameState {
    moves.iter().fold(initial_state(level), |s, &mv| apply_move(level, &s, mv).unwrap_or_else(|e| panic!("{mv}: {e}")))
}

fn open_door(level: &mut Level, door: u32) {
    level.doors[door as usize].initially_open = true;
}

/// True when some play from `from` touches `via` and later stands on `back`.
fn returns_after(level: &Level, from: &str, via: &str, back: &str, f: &Fragment) -> bool {
    let mut level = level.clone();
    level.start = f.port(from);
    level.vertices[f.port(via) as usize].must_visit = true;
    let back = f.port(back);
    explore(&level, initial_state(&level)).iter().any(|s| s.visited.contains(0) && s.position == back)
}

fn add_link(level: &mut Level, from: u32, to: u32) {
    let id = level.edges.len() as u32;
    level.edges.push(EdgeSpec { id, from, to, one_way: true, single_use: true, toll: 0, door: None });
}

#[test]
fn or_gate_opens_with_either_input() {
    let f = build_gadget(&GadgetKind::OrGate).unwrap();
    let out = f.port("out");
    assert!(!reaches(&starting_at(&f, "entry"), out));
    for d in ["a", "b"] {
        let mut level = starting_at(&f, "entry");
        open_door(&mut level, f.door(d));
        assert!(reaches(&level, out), "door {d}");
    }
}

#[test]
fn and_gate_needs_both_inputs() {
    let f = build_gadget(&GadgetKind::AndGate).unwrap();
    let out = f.port("out");
    for (a, b, expect) in [(false, false, false), (true, false, false), (false, true, false), (true, true, true)] {
        let mut level = starting_at(&f, "entry");
        if a {
            open_door(&mut level, f.door("a"));
        }
        if b {
            open_door(&mut level, f.door("b"));
        }
        assert_eq!(reaches(&level, out), expect, "inputs {a} {b}");
    }
}

#[test]
fn plate_path_is_single_use_and_one_directional() {
    let f = build_gadget(&GadgetKind::SingleUsePath).unwrap();
    let level = starting_at(&f, "entry");
    assert_eq!(play(&level, f.route("forward")).position, f.port("out"));
    assert!(!returns_after(&level, "entry", "out", "entry", &f));
    assert!(!reaches(&starting_at(&f, "out"), f.port("entry")));
}

#[test]
fn plate_path_aborted_at_the_first_plate_is_spent() {
    let f = build_gadget(&GadgetKind::SingleUsePath).unwrap();
    let level = starting_at(&f, "entry");
    let s = play(&level, &f.route("forward")[..1]);
    assert_eq!(s.position, f.port("g1"));
    assert!(!s.door_open(f.door("a")));
}

#[test]
fn button_path_crosses_once_either_way() {
    let f = build_gadget(&GadgetKind::SingleUseButtons).unwrap();
    let level = starting_at(&f, "entry");
    assert_eq!(play(&level, f.route("forward")).position, f.port("out"));
    let from_out = starting_at(&f, "out");
    assert_eq!(play(&from_out, f.route("backward")).position, f.port("entry"));
    assert!(!returns_after(&level, "entry", "out", "entry", &f));
    assert!(!returns_after(&level, "out", "entry", "out", &f));
}

#[test]
fn button_path_without_pressing_is_closed() {
    let f = build_gadget(&GadgetKind::SingleUseButtons).unwrap();
    let mut level = starting_at(&f, "entry");
    for v in &mut level.vertices {
        v.buttons.clear();
    }
    assert!(!reaches(&level, f.port("out")));
}

#[test]
fn clause_opens_with_any_literal() {
    let f = build_gadget(&GadgetKind::Clause { literals: 3 }).unwrap();
    let out = f.port("out");
    assert!(!reaches(&starting_at(&f, "entry"), out));
    for i in 0..3 {
        let mut level = starting_at(&f, "entry");
        open_door(&mut level, f.door(&format!("l{i}")));
        assert!(reaches(&level, out), "literal {i}");
        assert_eq!(play(&level, f.route(&format!("via_l{i}"))).position, out);
    }
    assert!(build_gadget(&GadgetKind::Clause { literals: 0 }).is_err());
}

#[test]
fn plate_spur_acts_like_a_button() {
    for open in [true, false] {
        let f = build_gadget(&GadgetKind::ButtonViaPlate { open }).unwrap();
        let level = starting_at(&f, "entry");
        let s = play(&level, f.route("press"));
        assert_eq!(s.position, f.port("entry"));
        assert_eq!(s.door_open(f.door("x")), open);
    }
}

#[test]
fn plate_simulator_fires_on_the_way_through() {
    for open in [true, false] {
        let f = build_gadget(&GadgetKind::PlateSimulator { open }).unwrap();
        let level = starting_at(&f, "entry");
        let s = play(&level, f.route("forward"));
        assert_eq!(s.position, f.port("right"));
        assert_eq!(s.door_open(f.door("x")), open);
        assert!(!reaches(&starting_at(&f, "right"), f.port("left")));
    }
}

#[test]
fn plate_simulator_can_be_abandoned_and_retried() {
    let f = build_gadget(&GadgetKind::PlateSimulator { open: true }).unwrap();
    let level = starting_at(&f, "entry");
    let fwd = f.route("forward");
    // Into the first chamber, press, and straight back out.
    let Move::Traverse(e0) = fwd[1] else { panic!("the route starts with two steps") };
    let s = play(&level, &[fwd[0], fwd[1], fwd[2], Move::Traverse(e0)]);
    assert_eq!(s.position, f.port("left"));
    let rest = explore(&level, s);
    assert!(rest.iter().any(|t| t.position == f.port("right")));
}

#[test]
fn existential_sets_one_polarity() {
    let f = build_gadget(&GadgetKind::Existential { positive: 2, negative: 1 }).unwrap();
    let level = starting_at(&f, "top_in");
    for (route, value) in [("set_true", true), ("set_false", false)] {
        let s = play(&level, f.route(route));
        assert_eq!(s.position, f.port("top_out"));
        for name in ["pos0", "pos1"] {
            assert_eq!(s.door_open(f.door(name)), value, "{route} {name}");
        }
        assert_eq!(s.door_open(f.door("neg0")), !value, "{route}");
    }
}

#[test]
fn existential_needs_one_pass_universal_needs_two() {
    for (universal, links, expect) in [(false, 1, true), (true, 1, false), (true, 2, true)] {
        let kind = if universal {
            GadgetKind::Universal { positive: 1, negative: 1 }
        } else {
            GadgetKind::Existential { positive: 1, negative: 1 }
        };
        let f = build_gadget(&kind).unwrap();
        let mut level = starting_at(&f, "top_in");
        for _ in 0..links {
            add_link(&mut level, f.port("top_out"), f.port("bottom_in"));
        }
        assert_eq!(reaches(&level, f.port("bottom_out")), expect, "universal {universal}, {links} links");
    }
}

#[test]
fn universal_tries_true_then_false() {
    let f = build_gadget(&GadgetKind::Universal { positive: 1, negative: 2 }).unwrap();
    let mut level = starting_at(&f, "top_in");
    add_link(&mut level, f.port("top_out"), f.port("bottom_in"));
    add_link(&mut level, f.port("top_out"), f.port("bottom_in"));
    let link = |i: u32| Move::Traverse(level.edges.len() as u32 - 2 + i);
    let mut moves = f.route("first").to_vec();
    let s = play(&level, &moves);
    assert_eq!(s.position, f.port("top_out"));
    assert!(s.door_open(f.door("pos0")) && !s.door_open(f.door("neg0")));
    moves.push(link(0));
    moves.extend(f.route("again"));
    let s = play(&level, &moves);
    assert_eq!(s.position, f.port("top_out"));
    assert!(!s.door_open(f.door("pos0")) && s.door_open(f.door("neg0")) && s.door_open(f.door("neg1")));
    moves.push(link(1));
    moves.extend(f.route("back"));
    assert_eq!(play(&level, &moves).position, f.port("bottom_out"));
}
