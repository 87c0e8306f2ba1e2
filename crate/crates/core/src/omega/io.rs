//! Line-based text format and DOT rendering for automata.
//!
//! ```text
//! dpa <width> <max color>
//! <q> <letter bits> <q'>
//! col <q> <c>
//! init <q>
//! ```
//!
//! Büchi automata use the header `nba <width>`, may list several transitions
//! per letter, and mark accepting states with `acc <q>`.

use std::fmt::Write;

use super::{letter_bits, letters, parse_letter_bits, Dpa, Letter, Nba};
use crate::error::{Error, Result};

pub fn write_dpa(a: &Dpa) -> String {
    let mut out = String::new();
    writeln!(out, "dpa {} {}", a.width(), a.max_color()).unwrap();
    for q in 0..a.num_states() {
        for l in 0..letters(a.width()) as Letter {
            writeln!(out, "{q} {} {}", letter_bits(a.width(), l), a.next(q, l)).unwrap();
        }
    }
    for q in 0..a.num_states() {
        writeln!(out, "col {q} {}", a.color(q)).unwrap();
    }
    writeln!(out, "init {}", a.init()).unwrap();
    out
}

pub fn write_nba(a: &Nba) -> String {
    let mut out = String::new();
    writeln!(out, "nba {}", a.width()).unwrap();
    for q in 0..a.num_states() {
        for l in 0..letters(a.width()) as Letter {
            for &p in a.succ(q, l) {
                writeln!(out, "{q} {} {p}", letter_bits(a.width(), l)).unwrap();
            }
        }
    }
    for q in (0..a.num_states()).filter(|&q| a.is_accepting(q)) {
        writeln!(out, "acc {q}").unwrap();
    }
    writeln!(out, "init {}", a.init()).unwrap();
    out
}

fn bad(line: usize, msg: impl std::fmt::Display) -> Error {
    Error::malformed("automaton", format!("line {}: {msg}", line + 1))
}

fn num(line: usize, s: Option<&str>) -> Result<usize> {
    s.and_then(|s| s.parse().ok())
        .ok_or_else(|| bad(line, "expected a number"))
}

struct Parsed {
    width: usize,
    edges: Vec<(usize, Letter, usize)>,
    marks: Vec<(usize, u32)>,
    init: Option<usize>,
    states: usize,
}

fn parse_lines(text: &str, kind: &str) -> Result<Parsed> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
    let (hl, header) = lines
        .next()
        .ok_or_else(|| Error::malformed("automaton", "empty input"))?;
    let mut words = header.split_whitespace();
    if words.next() != Some(kind) {
        return Err(bad(hl, format!("expected `{kind}` header")));
    }
    let width = num(hl, words.next())?;
    super::check_width(width)?;
    let mut p = Parsed {
        width,
        edges: Vec::new(),
        marks: Vec::new(),
        init: None,
        states: 0,
    };
    for (i, line) in lines {
        let w: Vec<&str> = line.split_whitespace().collect();
        match w.as_slice() {
            ["col", q, c] => {
                let q = num(i, Some(q))?;
                let c = num(i, Some(c))? as u32;
                p.marks.push((q, c));
                p.states = p.states.max(q + 1);
            }
            ["acc", q] => {
                let q = num(i, Some(q))?;
                p.marks.push((q, 0));
                p.states = p.states.max(q + 1);
            }
            ["init", q] => {
                let q = num(i, Some(q))?;
                p.init = Some(q);
                p.states = p.states.max(q + 1);
            }
            [q, bits, r] => {
                let q = num(i, Some(q))?;
                let r = num(i, Some(r))?;
                let l = parse_letter_bits(width, bits)
                    .ok_or_else(|| bad(i, format!("bad letter `{bits}`")))?;
                p.edges.push((q, l, r));
                p.states = p.states.max(q + 1).max(r + 1);
            }
            _ => return Err(bad(i, format!("unrecognized line `{line}`"))),
        }
    }
    Ok(p)
}

pub fn read_dpa(text: &str) -> Result<Dpa> {
    let p = parse_lines(text, "dpa")?;
    let n = p.states;
    let nl = letters(p.width);
    let mut delta = vec![u32::MAX; n * nl];
    for &(q, l, r) in &p.edges {
        delta[q * nl + l as usize] = r as u32;
    }
    if delta.contains(&u32::MAX) {
        return Err(Error::malformed("dpa", "transition function is not total"));
    }
    let mut color = vec![None; n];
    for &(q, c) in &p.marks {
        color[q] = Some(c);
    }
    let color = color
        .into_iter()
        .enumerate()
        .map(|(q, c)| c.ok_or_else(|| Error::malformed("dpa", format!("state {q} has no color"))))
        .collect::<Result<Vec<_>>>()?;
    let init = p
        .init
        .ok_or_else(|| Error::malformed("dpa", "missing init"))?;
    Dpa::new(p.width, delta, color, init as u32)
}

pub fn read_nba(text: &str) -> Result<Nba> {
    let p = parse_lines(text, "nba")?;
    let n = p.states.max(1);
    let nl = letters(p.width);
    let mut succ = vec![Vec::new(); n * nl];
    for &(q, l, r) in &p.edges {
        succ[q * nl + l as usize].push(r as u32);
    }
    let mut accepting = vec![false; n];
    for &(q, _) in &p.marks {
        accepting[q] = true;
    }
    let init = p
        .init
        .ok_or_else(|| Error::malformed("nba", "missing init"))?;
    Nba::new(p.width, succ, accepting, init as u32)
}

/// Group letters per edge so the rendering stays readable.
fn edge_labels(width: usize, edges: impl Iterator<Item = (usize, Letter)>) -> Vec<(usize, String)> {
    let mut grouped: Vec<(usize, Vec<String>)> = Vec::new();
    for (to, l) in edges {
        let bits = letter_bits(width, l);
        match grouped.iter_mut().find(|(t, _)| *t == to) {
            Some((_, v)) => v.push(bits),
            None => grouped.push((to, vec![bits])),
        }
    }
    grouped.into_iter().map(|(t, v)| (t, v.join(","))).collect()
}

pub fn dpa_dot(a: &Dpa) -> String {
    let mut out = String::from("digraph dpa {\n  rankdir=LR;\n  start [shape=point];\n");
    for q in 0..a.num_states() {
        writeln!(out, "  {q} [label=\"{q} / {}\"];", a.color(q)).unwrap();
    }
    writeln!(out, "  start -> {};", a.init()).unwrap();
    for q in 0..a.num_states() {
        let edges = (0..letters(a.width()) as Letter).map(|l| (a.next(q, l), l));
        for (to, label) in edge_labels(a.width(), edges) {
            writeln!(out, "  {q} -> {to} [label=\"{label}\"];").unwrap();
        }
    }
    out.push_str("}\n");
    out
}

pub fn nba_dot(a: &Nba) -> String {
    let mut out = String::from("digraph nba {\n  rankdir=LR;\n  start [shape=point];\n");
    for q in 0..a.num_states() {
        let shape = if a.is_accepting(q) {
            "doublecircle"
        } else {
            "circle"
        };
        writeln!(out, "  {q} [shape={shape}];").unwrap();
    }
    writeln!(out, "  start -> {};", a.init()).unwrap();
    for q in 0..a.num_states() {
        let edges = (0..letters(a.width()) as Letter)
            .flat_map(|l| a.succ(q, l).iter().map(move |&p| (p as usize, l)));
        for (to, label) in edge_labels(a.width(), edges) {
            writeln!(out, "  {q} -> {to} [label=\"{label}\"];").unwrap();
        }
    }
    out.push_str("}\n");
    out
}
