use std::collections::HashMap;

use super::bitset::StateSet;
use super::{letters, safra, Dpa, Letter, Nba, DEFAULT_STATE_CAP};
use crate::error::{Error, Result};

/// Equivalent deterministic parity automaton, with the default state cap.
pub fn determinize(a: &Nba) -> Result<Dpa> {
    determinize_with(a, DEFAULT_STATE_CAP)
}

/// Equivalent deterministic parity automaton. Cheap subset constructions are
/// used when the automaton is deterministic, a safety automaton, or accepts
/// once it reaches a total, closed accepting region; weak automata use a
/// breakpoint construction and everything else Safra trees.
pub fn determinize_with(a: &Nba, cap: usize) -> Result<Dpa> {
    let a = a.trim();
    let width = a.width();
    if a.is_empty() {
        return Ok(Dpa::empty(width));
    }
    let n = a.num_states();
    let dpa = if a.is_deterministic() {
        let sink = n as u32;
        let mut delta = Vec::with_capacity((n + 1) << width);
        for q in 0..n {
            for l in 0..letters(width) as Letter {
                delta.push(a.succ(q, l).first().copied().unwrap_or(sink));
            }
        }
        delta.extend(std::iter::repeat_n(sink, letters(width)));
        let mut color: Vec<u32> = (0..n).map(|q| !a.is_accepting(q) as u32).collect();
        color.push(1);
        Dpa::from_raw(width, delta, color, a.init() as u32)
    } else if a.accepting().iter().all(|&f| f) {
        subset(&a, cap, |s| if s.is_empty() { 1 } else { 0 }, |_| false)?
    } else if reach_closed(&a) {
        subset(&a, cap, |_| 1, |s| s.iter().any(|q| a.is_accepting(q)))?
    } else if a.is_weak() {
        breakpoint(&a, cap)?
    } else {
        safra::safra(&a, cap)?
    };
    Ok(dpa.simplify())
}

/// Whether [`determinize_with`] avoids Safra trees on `a`.
pub fn has_cheap_determinization(a: &Nba) -> bool {
    let a = a.trim();
    a.is_deterministic() || a.accepting().iter().all(|&f| f) || reach_closed(&a) || a.is_weak()
}

/// Accepting states only lead to accepting states and always have a move.
fn reach_closed(a: &Nba) -> bool {
    (0..a.num_states()).filter(|&q| a.is_accepting(q)).all(|q| {
        (0..letters(a.width()) as Letter).all(|l| {
            let s = a.succ(q, l);
            !s.is_empty() && s.iter().all(|&p| a.is_accepting(p as usize))
        })
    })
}

/// Subset construction. Subsets satisfying `absorb` collapse into a single
/// accepting sink; other subsets are colored by `paint`.
fn subset(
    a: &Nba,
    cap: usize,
    paint: impl Fn(&StateSet) -> u32,
    absorb: impl Fn(&StateSet) -> bool,
) -> Result<Dpa> {
    let n = a.num_states();
    let nl = letters(a.width());
    let start = StateSet::singleton(n, a.init());
    // Index 0 is reserved for the accepting sink.
    let mut sets: Vec<StateSet> = vec![StateSet::empty(n)];
    let mut ids: HashMap<StateSet, u32> = HashMap::new();
    let mut delta: Vec<u32> = vec![0; nl];
    let mut color = vec![0];
    let init = if absorb(&start) {
        0
    } else {
        ids.insert(start.clone(), 1);
        color.push(paint(&start));
        sets.push(start);
        1
    };
    let mut i = 1;
    while i < sets.len() {
        for l in 0..nl as Letter {
            let mut next = StateSet::empty(n);
            for q in sets[i].iter() {
                for &p in a.succ(q, l) {
                    next.insert(p as usize);
                }
            }
            let id = if absorb(&next) {
                0
            } else if let Some(&id) = ids.get(&next) {
                id
            } else {
                if sets.len() > cap {
                    return Err(Error::Capacity {
                        what: "determinization",
                        limit: cap,
                    });
                }
                let id = sets.len() as u32;
                color.push(paint(&next));
                ids.insert(next.clone(), id);
                sets.push(next);
                id
            };
            delta.push(id);
        }
        i += 1;
    }
    Ok(Dpa::from_raw(a.width(), delta, color, init))
}

/// Breakpoint construction for weak automata, read as co-Büchi automata: a
/// run accepts iff it eventually stays in accepting states. The second
/// component follows the runs that have stayed accepting since the last
/// breakpoint; breakpoints (color 1) must occur finitely often.
fn breakpoint(a: &Nba, cap: usize) -> Result<Dpa> {
    let n = a.num_states();
    let nl = letters(a.width());
    let accepting = |s: &StateSet| {
        let mut t = StateSet::empty(n);
        for q in s.iter().filter(|&q| a.is_accepting(q)) {
            t.insert(q);
        }
        t
    };
    let post = |s: &StateSet, l: Letter| {
        let mut t = StateSet::empty(n);
        for q in s.iter() {
            for &p in a.succ(q, l) {
                t.insert(p as usize);
            }
        }
        t
    };
    let start = StateSet::singleton(n, a.init());
    let start_o = accepting(&start);
    let mut states = vec![(start, start_o)];
    let mut ids: HashMap<(StateSet, StateSet), u32> = HashMap::new();
    ids.insert(states[0].clone(), 0);
    let mut delta = Vec::new();
    let mut color = Vec::new();
    let mut i = 0;
    while i < states.len() {
        let (s, o) = states[i].clone();
        color.push(if o.is_empty() { 1 } else { 2 });
        for l in 0..nl as Letter {
            let s2 = post(&s, l);
            let o2 = if o.is_empty() {
                accepting(&s2)
            } else {
                accepting(&post(&o, l))
            };
            let key = (s2, o2);
            let id = match ids.get(&key) {
                Some(&id) => id,
                None => {
                    if states.len() >= cap {
                        return Err(Error::Capacity {
                            what: "determinization",
                            limit: cap,
                        });
                    }
                    let id = states.len() as u32;
                    ids.insert(key.clone(), id);
                    states.push(key);
                    id
                }
            };
            delta.push(id);
        }
        i += 1;
    }
    Ok(Dpa::from_raw(a.width(), delta, color, 0))
}
