//! Safra-tree determinization with compact node names. A tree lists its nodes
//! in name order; parents and older siblings always come first.

use std::collections::HashMap;

use super::bitset::StateSet;
use super::{letters, Dpa, Letter, Nba};
use crate::error::{Error, Result};

const ROOT: u16 = u16::MAX;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
struct Tree {
    parent: Vec<u16>,
    label: Vec<StateSet>,
}

struct Stepper<'a> {
    nba: &'a Nba,
    accepting: StateSet,
    neutral: u32,
}

impl Stepper<'_> {
    fn post(&self, s: &StateSet, l: Letter) -> StateSet {
        let mut out = StateSet::empty(self.nba.num_states());
        for q in s.iter() {
            for &p in self.nba.succ(q, l) {
                out.insert(p as usize);
            }
        }
        out
    }

    /// One step of the construction; `letter = None` only normalizes (used to
    /// build the initial tree). Returns the successor tree and the color.
    fn step(&self, tree: &Tree, letter: Option<Letter>) -> (Tree, u32) {
        if tree.label.is_empty() {
            return (tree.clone(), 1);
        }
        let n = self.nba.num_states();
        let mut label: Vec<StateSet> = match letter {
            Some(l) => tree.label.iter().map(|s| self.post(s, l)).collect(),
            None => tree.label.clone(),
        };
        let mut parent = tree.parent.clone();
        let existing = label.len();

        for v in 0..existing {
            let mut fresh = label[v].clone();
            fresh.intersect_with(&self.accepting);
            if !fresh.is_empty() {
                parent.push(v as u16);
                label.push(fresh);
            }
        }
        let len = label.len();

        let mut taken = vec![StateSet::empty(n); len];
        for v in 1..len {
            let p = parent[v] as usize;
            let (head, tail) = label.split_at_mut(v);
            let own = &mut tail[0];
            own.intersect_with(&head[p]);
            own.subtract(&taken[p]);
            taken[p].union_with(own);
        }

        let mut alive = vec![false; len];
        for v in 0..len {
            alive[v] = !label[v].is_empty() && (v == 0 || alive[parent[v] as usize]);
        }

        let mut below = vec![StateSet::empty(n); len];
        for v in 1..len {
            if alive[v] {
                below[parent[v] as usize].union_with(&label[v]);
            }
        }
        let mut marked = vec![false; len];
        for v in 0..len {
            if v > 0 {
                let p = parent[v] as usize;
                if !alive[p] || marked[p] {
                    alive[v] = false;
                    continue;
                }
            }
            if alive[v] && below[v] == label[v] {
                marked[v] = true;
            }
        }

        let removed = (0..existing).find(|&v| !alive[v]).map(|v| v as u32 + 1);
        let flashed = (0..len).find(|&v| marked[v]).map(|v| v as u32 + 1);
        let color = match (flashed, removed) {
            (Some(f), Some(e)) if f < e => 2 * f,
            (Some(f), None) => 2 * f,
            (_, Some(e)) => 2 * e - 1,
            (None, None) => self.neutral,
        };

        let mut rename = vec![ROOT; len];
        let mut out = Tree {
            parent: Vec::new(),
            label: Vec::new(),
        };
        for v in 0..len {
            if !alive[v] {
                continue;
            }
            rename[v] = out.label.len() as u16;
            out.parent.push(if v == 0 {
                ROOT
            } else {
                rename[parent[v] as usize]
            });
            out.label
                .push(std::mem::replace(&mut label[v], StateSet::empty(0)));
        }
        (out, color)
    }
}

pub(super) fn safra(nba: &Nba, cap: usize) -> Result<Dpa> {
    let n = nba.num_states();
    let mut accepting = StateSet::empty(n);
    for q in 0..n {
        if nba.is_accepting(q) {
            accepting.insert(q);
        }
    }
    let stepper = Stepper {
        nba,
        accepting,
        neutral: 2 * n as u32 + 1,
    };
    let nl = letters(nba.width());
    let root = Tree {
        parent: vec![ROOT],
        label: vec![StateSet::singleton(n, nba.init())],
    };
    let (start, _) = stepper.step(&root, None);

    let mut trees: Vec<Tree> = vec![start.clone()];
    let mut tree_ids: HashMap<Tree, u32> = HashMap::from([(start, 0)]);
    let mut tree_succ: Vec<Option<Vec<(u32, u32)>>> = vec![None];

    let mut states: Vec<(u32, u32)> = vec![(0, stepper.neutral)];
    let mut state_ids: HashMap<(u32, u32), u32> = HashMap::from([((0, stepper.neutral), 0)]);
    let mut delta: Vec<u32> = Vec::new();

    let mut i = 0;
    while i < states.len() {
        let t = states[i].0 as usize;
        if tree_succ[t].is_none() {
            let mut row = Vec::with_capacity(nl);
            for l in 0..nl as Letter {
                let (next, color) = stepper.step(&trees[t], Some(l));
                let id = match tree_ids.get(&next) {
                    Some(&id) => id,
                    None => {
                        let id = trees.len() as u32;
                        tree_ids.insert(next.clone(), id);
                        trees.push(next);
                        tree_succ.push(None);
                        id
                    }
                };
                row.push((id, color));
            }
            tree_succ[t] = Some(row);
        }
        for &key in tree_succ[t].as_ref().unwrap() {
            let id = match state_ids.get(&key) {
                Some(&id) => id,
                None => {
                    let id = states.len() as u32;
                    if states.len() >= cap {
                        return Err(Error::Capacity {
                            what: "determinization",
                            limit: cap,
                        });
                    }
                    state_ids.insert(key, id);
                    states.push(key);
                    id
                }
            };
            delta.push(id);
        }
        i += 1;
    }
    let color = states.iter().map(|&(_, c)| c).collect();
    Ok(Dpa::from_raw(nba.width(), delta, color, 0))
}
