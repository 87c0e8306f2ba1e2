use std::collections::HashMap;
use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::omega::Lasso;

/// Finite-state causal operator: the output at `t` reads the state and the
/// current input bit.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CMachine {
    /// `next[2q + a]`.
    next: Vec<u32>,
    /// `out[2q + a]`.
    out: Vec<bool>,
    init: u32,
}

/// Finite-state strongly causal operator: the output at `t` depends on the
/// state alone, which has consumed inputs `0..t`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SCMachine {
    next: Vec<u32>,
    out: Vec<bool>,
    init: u32,
}

/// Either kind of machine.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Machine {
    C(CMachine),
    Sc(SCMachine),
}

/// Step interface shared by both machine kinds.
pub trait Operator {
    fn start(&self) -> usize;
    fn num_states(&self) -> usize;
    /// Output emitted at the current position and the next state.
    fn step(&self, q: usize, input: bool) -> (bool, usize);
}

fn check_table(n: usize, next: &[u32], init: u32) -> Result<()> {
    if n == 0 {
        return Err(Error::malformed("machine", "no states"));
    }
    if next.len() != 2 * n {
        return Err(Error::malformed(
            "machine",
            "transition table has the wrong size",
        ));
    }
    if let Some(&q) = next.iter().find(|&&q| q as usize >= n) {
        return Err(Error::malformed(
            "machine",
            format!("target {q} out of range"),
        ));
    }
    if init as usize >= n {
        return Err(Error::malformed(
            "machine",
            format!("initial state {init} out of range"),
        ));
    }
    Ok(())
}

impl CMachine {
    pub fn new(next: Vec<u32>, out: Vec<bool>, init: u32) -> Result<Self> {
        check_table(next.len() / 2, &next, init)?;
        if out.len() != next.len() {
            return Err(Error::malformed(
                "machine",
                "output table has the wrong size",
            ));
        }
        Ok(CMachine { next, out, init })
    }

    /// Output equals the current input.
    pub fn copy() -> Self {
        CMachine {
            next: vec![0, 0],
            out: vec![false, true],
            init: 0,
        }
    }

    pub fn constant(bit: bool) -> Self {
        CMachine {
            next: vec![0, 0],
            out: vec![bit, bit],
            init: 0,
        }
    }

    pub fn next(&self, q: usize, a: bool) -> usize {
        self.next[2 * q + a as usize] as usize
    }

    pub fn out(&self, q: usize, a: bool) -> bool {
        self.out[2 * q + a as usize]
    }

    /// Same machine with one output entry flipped.
    pub fn with_flipped_output(&self, q: usize, a: bool) -> Self {
        let mut m = self.clone();
        m.out[2 * q + a as usize] ^= true;
        m
    }

    /// Reachable part, merged by output-respecting refinement.
    pub fn minimize(&self) -> Self {
        let sig = |q: usize| (self.out[2 * q] as u32) | (self.out[2 * q + 1] as u32) << 1;
        let (next, map, init) = quotient(self.num_states(), &self.next, self.init, sig);
        let mut out = vec![false; next.len()];
        for (q, &c) in map.iter().enumerate() {
            if let Some(c) = c {
                out[2 * c] = self.out[2 * q];
                out[2 * c + 1] = self.out[2 * q + 1];
            }
        }
        CMachine { next, out, init }
    }
}

impl SCMachine {
    pub fn new(next: Vec<u32>, out: Vec<bool>, init: u32) -> Result<Self> {
        check_table(next.len() / 2, &next, init)?;
        if 2 * out.len() != next.len() {
            return Err(Error::malformed(
                "machine",
                "output table has the wrong size",
            ));
        }
        Ok(SCMachine { next, out, init })
    }

    pub fn constant(bit: bool) -> Self {
        SCMachine {
            next: vec![0, 0],
            out: vec![bit],
            init: 0,
        }
    }

    /// Output at `t` is the input at `t - 1`, starting with `first`.
    pub fn delay(first: bool) -> Self {
        // State `q` emits `q` and remembers the last input.
        SCMachine {
            next: vec![0, 1, 0, 1],
            out: vec![false, true],
            init: first as u32,
        }
    }

    /// Output at `t` is the negation of the input at `t - 1`, starting with `first`.
    pub fn negate_previous(first: bool) -> Self {
        // State 0 emits 0, state 1 emits 1; reading `a` moves to the state emitting `!a`.
        SCMachine {
            next: vec![1, 0, 1, 0],
            out: vec![false, true],
            init: first as u32,
        }
    }

    pub fn next(&self, q: usize, a: bool) -> usize {
        self.next[2 * q + a as usize] as usize
    }

    pub fn out(&self, q: usize) -> bool {
        self.out[q]
    }

    pub fn with_flipped_output(&self, q: usize) -> Self {
        let mut m = self.clone();
        m.out[q] ^= true;
        m
    }

    pub fn minimize(&self) -> Self {
        let sig = |q: usize| self.out[q] as u32;
        let (next, map, init) = quotient(self.num_states(), &self.next, self.init, sig);
        let mut out = vec![false; next.len() / 2];
        for (q, &c) in map.iter().enumerate() {
            if let Some(c) = c {
                out[c] = self.out[q];
            }
        }
        SCMachine { next, out, init }
    }

    /// `self ∘ inner`: feed the input through `inner`, then through `self`.
    /// The result is strongly causal because `self` is.
    pub fn compose_after(&self, inner: &CMachine) -> SCMachine {
        let n_in = inner.num_states();
        let n = n_in * self.num_states();
        let mut next = Vec::with_capacity(2 * n);
        let mut out = Vec::with_capacity(n);
        for s in 0..n {
            let (qi, qo) = (s % n_in, s / n_in);
            out.push(self.out(qo));
            for a in [false, true] {
                let mid = inner.out(qi, a);
                let t = inner.next(qi, a) + n_in * self.next(qo, mid);
                next.push(t as u32);
            }
        }
        let init = inner.init + n_in as u32 * self.init;
        SCMachine { next, out, init }.minimize()
    }
}

/// Reachable states refined until successors agree, starting from `sig`.
/// Returns the new transition table, the old-to-new map and the new initial state.
fn quotient(
    n: usize,
    next: &[u32],
    init: u32,
    sig: impl Fn(usize) -> u32,
) -> (Vec<u32>, Vec<Option<usize>>, u32) {
    let mut reach = vec![false; n];
    let mut stack = vec![init as usize];
    reach[init as usize] = true;
    while let Some(q) = stack.pop() {
        for a in 0..2 {
            let t = next[2 * q + a] as usize;
            if !reach[t] {
                reach[t] = true;
                stack.push(t);
            }
        }
    }
    let mut class: Vec<usize> = (0..n).map(|q| sig(q) as usize).collect();
    let mut count = 0;
    loop {
        let mut ids: HashMap<(usize, usize, usize), usize> = HashMap::new();
        let mut fresh = vec![0; n];
        for q in (0..n).filter(|&q| reach[q]) {
            let key = (
                class[q],
                class[next[2 * q] as usize],
                class[next[2 * q + 1] as usize],
            );
            let len = ids.len();
            fresh[q] = *ids.entry(key).or_insert(len);
        }
        let stable = ids.len() == count;
        count = ids.len();
        class = fresh;
        if stable {
            break;
        }
    }
    // Renumber in order of first visit from the initial state.
    let mut order: Vec<Option<usize>> = vec![None; count];
    let mut queue = std::collections::VecDeque::from([init as usize]);
    let mut reps = Vec::new();
    order[class[init as usize]] = Some(0);
    reps.push(init as usize);
    while let Some(q) = queue.pop_front() {
        for a in 0..2 {
            let t = next[2 * q + a] as usize;
            if order[class[t]].is_none() {
                order[class[t]] = Some(reps.len());
                reps.push(t);
                queue.push_back(t);
            }
        }
    }
    let table = reps
        .iter()
        .flat_map(|&q| (0..2).map(move |a| next[2 * q + a] as usize))
        .map(|t| order[class[t]].unwrap() as u32)
        .collect();
    let map = (0..n)
        .map(|q| if reach[q] { order[class[q]] } else { None })
        .collect();
    (table, map, 0)
}

impl Operator for CMachine {
    fn start(&self) -> usize {
        self.init as usize
    }
    fn num_states(&self) -> usize {
        self.next.len() / 2
    }
    fn step(&self, q: usize, input: bool) -> (bool, usize) {
        (self.out(q, input), self.next(q, input))
    }
}

impl Operator for SCMachine {
    fn start(&self) -> usize {
        self.init as usize
    }
    fn num_states(&self) -> usize {
        self.next.len() / 2
    }
    fn step(&self, q: usize, input: bool) -> (bool, usize) {
        (self.out(q), self.next(q, input))
    }
}

impl Operator for Machine {
    fn start(&self) -> usize {
        match self {
            Machine::C(m) => m.start(),
            Machine::Sc(m) => m.start(),
        }
    }
    fn num_states(&self) -> usize {
        match self {
            Machine::C(m) => m.num_states(),
            Machine::Sc(m) => m.num_states(),
        }
    }
    fn step(&self, q: usize, input: bool) -> (bool, usize) {
        match self {
            Machine::C(m) => m.step(q, input),
            Machine::Sc(m) => m.step(q, input),
        }
    }
}

/// Output of a machine on an ultimately periodic input.
pub fn run_on_lasso(m: &impl Operator, w: &Lasso) -> Result<Lasso> {
    if w.width != 1 {
        return Err(Error::WidthMismatch {
            expected: 1,
            found: w.width,
        });
    }
    let mut q = m.start();
    let mut prefix = Vec::new();
    for &l in &w.prefix {
        let (o, t) = m.step(q, l == 1);
        prefix.push(o as u32);
        q = t;
    }
    // Run whole cycles until the state at a cycle boundary repeats.
    let mut seen: HashMap<usize, usize> = HashMap::new();
    let mut blocks: Vec<Vec<u32>> = Vec::new();
    while !seen.contains_key(&q) {
        seen.insert(q, blocks.len());
        let mut block = Vec::with_capacity(w.cycle.len());
        for &l in &w.cycle {
            let (o, t) = m.step(q, l == 1);
            block.push(o as u32);
            q = t;
        }
        blocks.push(block);
    }
    let k = seen[&q];
    for b in &blocks[..k] {
        prefix.extend_from_slice(b);
    }
    let cycle = blocks[k..].concat();
    Ok(Lasso::new(1, prefix, cycle)?.normalized())
}

/// Outputs and inputs for the first `steps` positions.
pub fn trace(m: &impl Operator, w: &Lasso, steps: usize) -> Vec<(bool, bool)> {
    let mut q = m.start();
    (0..steps)
        .map(|n| {
            let a = w.bit_at(0, n);
            let (o, t) = m.step(q, a);
            q = t;
            (a, o)
        })
        .collect()
}

/// The unique `w` with `m(w) = w`.
pub fn sc_fixed_point(m: &SCMachine) -> Lasso {
    let mut q = m.start();
    let mut seen = vec![None; m.num_states()];
    let mut word = Vec::new();
    while seen[q].is_none() {
        seen[q] = Some(word.len());
        let b = m.out(q);
        word.push(b as u32);
        q = m.next(q, b);
    }
    let k = seen[q].unwrap();
    let cycle = word.split_off(k);
    Lasso::new(1, word, cycle).expect("bits").normalized()
}

impl Machine {
    pub fn minimize(&self) -> Machine {
        match self {
            Machine::C(m) => Machine::C(m.minimize()),
            Machine::Sc(m) => Machine::Sc(m.minimize()),
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            Machine::C(_) => "c",
            Machine::Sc(_) => "sc",
        }
    }

    /// Rows `state input / output nextstate` after a short header.
    pub fn to_table(&self) -> String {
        let mut s = format!(
            "machine {}\nstates {}\ninit {}\n",
            self.kind(),
            self.num_states(),
            self.start()
        );
        for q in 0..self.num_states() {
            for a in [false, true] {
                let (o, t) = self.step(q, a);
                writeln!(s, "{q} {} / {} {t}", a as u8, o as u8).unwrap();
            }
        }
        s
    }

    pub fn from_table(text: &str) -> Result<Machine> {
        let bad = |msg: String| Error::malformed("machine table", msg);
        let mut kind = None;
        let mut states = None;
        let mut init = None;
        let mut rows: Vec<(usize, usize, bool, u32)> = Vec::new();
        for (ln, line) in text.lines().enumerate() {
            let line = line.split('#').next().unwrap().trim();
            if line.is_empty() {
                continue;
            }
            let words: Vec<&str> = line.split_whitespace().collect();
            let num = |w: &str| {
                w.parse::<usize>()
                    .map_err(|_| bad(format!("line {}: bad number `{w}`", ln + 1)))
            };
            match words.as_slice() {
                ["machine", k] => kind = Some(k.to_string()),
                ["states", n] => states = Some(num(n)?),
                ["init", q] => init = Some(num(q)?),
                [q, a, "/", o, t] => {
                    let a = num(a)?;
                    let o = num(o)?;
                    if a > 1 || o > 1 {
                        return Err(bad(format!("line {}: bits must be 0 or 1", ln + 1)));
                    }
                    rows.push((num(q)?, a, o == 1, num(t)? as u32));
                }
                _ => return Err(bad(format!("line {}: unrecognized `{line}`", ln + 1))),
            }
        }
        let n = states.ok_or_else(|| bad("missing `states`".into()))?;
        let init = init.ok_or_else(|| bad("missing `init`".into()))? as u32;
        let mut next = vec![u32::MAX; 2 * n];
        let mut out = vec![None; 2 * n];
        for (q, a, o, t) in rows {
            if q >= n {
                return Err(bad(format!("state {q} out of range")));
            }
            next[2 * q + a] = t;
            out[2 * q + a] = Some(o);
        }
        if out.iter().any(Option::is_none) {
            return Err(bad("transition table is incomplete".into()));
        }
        let out: Vec<bool> = out.into_iter().map(Option::unwrap).collect();
        match kind.as_deref() {
            Some("c") => Ok(Machine::C(CMachine::new(next, out, init)?)),
            Some("sc") => {
                let mut per_state = Vec::with_capacity(n);
                for q in 0..n {
                    if out[2 * q] != out[2 * q + 1] {
                        return Err(bad(format!("state {q} of an sc machine reads its input")));
                    }
                    per_state.push(out[2 * q]);
                }
                Ok(Machine::Sc(SCMachine::new(next, per_state, init)?))
            }
            Some(k) => Err(bad(format!("unknown machine kind `{k}`"))),
            None => Err(bad("missing `machine` header".into())),
        }
    }

    pub fn to_dot(&self) -> String {
        let mut s = String::from("digraph machine {\n  rankdir=LR;\n  start [shape=point];\n");
        writeln!(s, "  start -> q{};", self.start()).unwrap();
        for q in 0..self.num_states() {
            match self {
                Machine::C(_) => writeln!(s, "  q{q} [shape=circle,label=\"{q}\"];").unwrap(),
                Machine::Sc(m) => {
                    writeln!(s, "  q{q} [shape=circle,label=\"{q}/{}\"];", m.out(q) as u8).unwrap()
                }
            }
            for a in [false, true] {
                let (o, t) = self.step(q, a);
                let label = match self {
                    Machine::C(_) => format!("{}/{}", a as u8, o as u8),
                    Machine::Sc(_) => format!("{}", a as u8),
                };
                writeln!(s, "  q{q} -> q{t} [label=\"{label}\"];").unwrap();
            }
        }
        s.push_str("}\n");
        s
    }
}
