use std::collections::HashMap;

use super::{check_width, letters, remap_letter, Lasso, Letter};
use crate::error::{Error, Result};
use crate::graph;

/// Nondeterministic Büchi automaton with a single initial state. Successor
/// lists are stored compactly per (state, letter).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Nba {
    width: usize,
    offsets: Vec<u32>,
    targets: Vec<u32>,
    accepting: Vec<bool>,
    init: u32,
}

impl Nba {
    /// `succ[q * 2^width + letter]` lists the successors of `q`.
    pub fn new(width: usize, succ: Vec<Vec<u32>>, accepting: Vec<bool>, init: u32) -> Result<Self> {
        check_width(width)?;
        let n = accepting.len();
        if n == 0 || succ.len() != n * letters(width) {
            return Err(Error::malformed(
                "nba",
                "transition table does not match state count",
            ));
        }
        if init as usize >= n || succ.iter().flatten().any(|&q| q as usize >= n) {
            return Err(Error::malformed("nba", "state out of range"));
        }
        Ok(Self::from_lists(width, succ, accepting, init))
    }

    pub(crate) fn from_lists(
        width: usize,
        succ: Vec<Vec<u32>>,
        accepting: Vec<bool>,
        init: u32,
    ) -> Self {
        let mut offsets = Vec::with_capacity(succ.len() + 1);
        let mut targets = Vec::new();
        offsets.push(0);
        for mut s in succ {
            s.sort_unstable();
            s.dedup();
            targets.extend(s);
            offsets.push(targets.len() as u32);
        }
        Nba {
            width,
            offsets,
            targets,
            accepting,
            init,
        }
    }

    pub fn empty(width: usize) -> Self {
        Self::from_lists(width, vec![Vec::new(); letters(width)], vec![false], 0)
    }

    pub fn universal(width: usize) -> Self {
        Self::from_lists(width, vec![vec![0]; letters(width)], vec![true], 0)
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn num_states(&self) -> usize {
        self.accepting.len()
    }

    pub fn init(&self) -> usize {
        self.init as usize
    }

    pub fn is_accepting(&self, q: usize) -> bool {
        self.accepting[q]
    }

    pub fn accepting(&self) -> &[bool] {
        &self.accepting
    }

    #[inline]
    pub fn succ(&self, q: usize, letter: Letter) -> &[u32] {
        let i = (q << self.width) | letter as usize;
        &self.targets[self.offsets[i] as usize..self.offsets[i + 1] as usize]
    }

    pub(crate) fn adjacency(&self) -> Vec<Vec<usize>> {
        (0..self.num_states())
            .map(|q| {
                let lo = self.offsets[q << self.width] as usize;
                let hi = self.offsets[(q + 1) << self.width] as usize;
                let mut s: Vec<usize> = self.targets[lo..hi].iter().map(|&p| p as usize).collect();
                s.sort_unstable();
                s.dedup();
                s
            })
            .collect()
    }

    pub fn is_deterministic(&self) -> bool {
        self.offsets.windows(2).all(|w| w[1] - w[0] <= 1)
    }

    fn same_width(&self, other: &Nba) -> Result<()> {
        if self.width != other.width {
            return Err(Error::WidthMismatch {
                expected: self.width,
                found: other.width,
            });
        }
        Ok(())
    }

    /// Lasso membership: search the product of the lasso's positions with the
    /// automaton for a reachable cycle through an accepting state.
    pub fn accepts(&self, w: &Lasso) -> Result<bool> {
        if w.width != self.width {
            return Err(Error::WidthMismatch {
                expected: self.width,
                found: w.width,
            });
        }
        let span = w.span();
        let n = self.num_states();
        let next_pos = |i: usize| if i + 1 < span { i + 1 } else { w.prefix.len() };
        let node = |i: usize, q: usize| i * n + q;
        let mut adj = vec![Vec::new(); span * n];
        for i in 0..span {
            let l = w.letter_at(i);
            for q in 0..n {
                adj[node(i, q)] = self
                    .succ(q, l)
                    .iter()
                    .map(|&p| node(next_pos(i), p as usize))
                    .collect();
            }
        }
        let reach = graph::reachable(&adj, &[node(0, self.init())]);
        let s = graph::sccs_filtered(&adj, |v| reach[v]);
        Ok((0..span * n).any(|v| reach[v] && self.accepting[v % n] && s.cyclic[s.comp[v]]))
    }

    /// Remove states that are unreachable or cannot reach an accepting cycle.
    pub fn trim(&self) -> Nba {
        let adj = self.adjacency();
        let reach = graph::reachable(&adj, &[self.init()]);
        let s = graph::sccs_filtered(&adj, |q| reach[q]);
        let mut seeds = vec![false; self.num_states()];
        let mut good = vec![false; s.count];
        for q in 0..self.num_states() {
            if reach[q] && self.accepting[q] && s.cyclic[s.comp[q]] {
                good[s.comp[q]] = true;
            }
        }
        for q in 0..self.num_states() {
            if reach[q] && good[s.comp[q]] {
                seeds[q] = true;
            }
        }
        let useful = graph::coreachable(&adj, &seeds);
        let keep: Vec<bool> = (0..self.num_states())
            .map(|q| reach[q] && useful[q])
            .collect();
        if !keep[self.init()] {
            return Nba::empty(self.width);
        }
        let mut index = vec![u32::MAX; self.num_states()];
        let mut k = 0u32;
        for q in 0..self.num_states() {
            if keep[q] {
                index[q] = k;
                k += 1;
            }
        }
        let mut succ = Vec::with_capacity((k as usize) << self.width);
        let mut accepting = Vec::with_capacity(k as usize);
        for q in 0..self.num_states() {
            if !keep[q] {
                continue;
            }
            accepting.push(self.accepting[q]);
            for l in 0..letters(self.width) as Letter {
                succ.push(
                    self.succ(q, l)
                        .iter()
                        .filter(|&&p| keep[p as usize])
                        .map(|&p| index[p as usize])
                        .collect(),
                );
            }
        }
        Nba::from_lists(self.width, succ, accepting, index[self.init()])
    }

    /// Trim, then merge bisimilar states (same acceptance, same successor
    /// classes on every letter).
    pub fn reduce(&self) -> Nba {
        let a = self.trim();
        let n = a.num_states();
        let nl = letters(a.width);
        let mut class: Vec<u32> = a.accepting.iter().map(|&f| f as u32).collect();
        let mut count = class.iter().collect::<std::collections::HashSet<_>>().len();
        loop {
            let mut ids: HashMap<(u32, Vec<Vec<u32>>), u32> = HashMap::with_capacity(n);
            let mut next = Vec::with_capacity(n);
            for q in 0..n {
                let sig: Vec<Vec<u32>> = (0..nl as Letter)
                    .map(|l| {
                        let mut v: Vec<u32> =
                            a.succ(q, l).iter().map(|&p| class[p as usize]).collect();
                        v.sort_unstable();
                        v.dedup();
                        v
                    })
                    .collect();
                let fresh = ids.len() as u32;
                next.push(*ids.entry((class[q], sig)).or_insert(fresh));
            }
            let stable = ids.len() == count;
            count = ids.len();
            class = next;
            if stable {
                break;
            }
        }
        if count == n {
            return a;
        }
        let mut rep = vec![usize::MAX; count];
        for q in 0..n {
            if rep[class[q] as usize] == usize::MAX {
                rep[class[q] as usize] = q;
            }
        }
        let mut succ = Vec::with_capacity(count * nl);
        let mut accepting = Vec::with_capacity(count);
        for &q in &rep {
            accepting.push(a.accepting[q]);
            for l in 0..nl as Letter {
                succ.push(a.succ(q, l).iter().map(|&p| class[p as usize]).collect());
            }
        }
        Nba::from_lists(a.width, succ, accepting, class[a.init()])
    }

    pub fn is_empty(&self) -> bool {
        let t = self.trim();
        t.num_states() == 1 && !t.accepting[0] && t.targets.is_empty()
    }

    /// Whether the accepting set is a union of strongly connected components
    /// (transient states aside), so runs settle into an all-accepting or an
    /// all-rejecting component.
    pub fn is_weak(&self) -> bool {
        let s = graph::sccs(&self.adjacency());
        let mut seen: Vec<Option<bool>> = vec![None; s.count];
        for q in 0..self.num_states() {
            let c = s.comp[q];
            if !s.cyclic[c] {
                continue;
            }
            match seen[c] {
                None => seen[c] = Some(self.accepting[q]),
                Some(v) if v != self.accepting[q] => return false,
                _ => {}
            }
        }
        true
    }

    pub fn union(&self, other: &Nba) -> Result<Nba> {
        self.same_width(other)?;
        let nl = letters(self.width);
        let na = self.num_states() as u32;
        // State 0 is the fresh initial state; then copies of both automata.
        let mut succ = vec![Vec::new(); nl];
        let mut accepting = vec![false];
        for l in 0..nl as Letter {
            let s = &mut succ[l as usize];
            s.extend(self.succ(self.init(), l).iter().map(|&p| p + 1));
            s.extend(other.succ(other.init(), l).iter().map(|&p| p + 1 + na));
        }
        for (aut, shift) in [(self, 1), (other, 1 + na)] {
            for q in 0..aut.num_states() {
                accepting.push(aut.accepting[q]);
                for l in 0..nl as Letter {
                    succ.push(aut.succ(q, l).iter().map(|&p| p + shift).collect());
                }
            }
        }
        Ok(Nba::from_lists(self.width, succ, accepting, 0).trim())
    }

    /// Product automaton. When either side is weak a plain synchronous product
    /// suffices; otherwise a two-phase counter alternates between the two
    /// acceptance sets.
    pub fn intersect(&self, other: &Nba) -> Result<Nba> {
        self.same_width(other)?;
        let weak = if other.is_weak() {
            Some(false)
        } else if self.is_weak() {
            Some(true)
        } else {
            None
        };
        let nl = letters(self.width);
        let mut index: HashMap<(u32, u32, u8), u32> = HashMap::new();
        let mut states = vec![(self.init, other.init, 0u8)];
        index.insert(states[0], 0);
        let mut succ: Vec<Vec<u32>> = Vec::new();
        let mut i = 0;
        while i < states.len() {
            let (p, q, phase) = states[i];
            let next_phase = match weak {
                Some(_) => 0,
                None => {
                    if phase == 0 && self.accepting[p as usize] {
                        1
                    } else if phase == 1 && other.accepting[q as usize] {
                        0
                    } else {
                        phase
                    }
                }
            };
            for l in 0..nl as Letter {
                let mut out = Vec::new();
                for &p2 in self.succ(p as usize, l) {
                    for &q2 in other.succ(q as usize, l) {
                        let key = (p2, q2, next_phase);
                        let id = *index.entry(key).or_insert_with(|| {
                            states.push(key);
                            states.len() as u32 - 1
                        });
                        out.push(id);
                    }
                }
                succ.push(out);
            }
            i += 1;
        }
        let accepting = states
            .iter()
            .map(|&(p, q, phase)| match weak {
                Some(_) => self.accepting[p as usize] && other.accepting[q as usize],
                None => phase == 1 && other.accepting[q as usize],
            })
            .collect();
        Ok(Nba::from_lists(self.width, succ, accepting, 0).trim())
    }

    /// Existentially quantify the given tracks; the remaining tracks keep their
    /// relative order.
    pub fn project(&self, tracks: &[usize]) -> Result<Nba> {
        for &t in tracks {
            if t >= self.width {
                return Err(Error::TrackOutOfRange {
                    track: t,
                    width: self.width,
                });
            }
        }
        let kept: Vec<usize> = (0..self.width).filter(|t| !tracks.contains(t)).collect();
        let new_width = kept.len();
        let nl = letters(new_width);
        let mut succ = Vec::with_capacity(self.num_states() * nl);
        for q in 0..self.num_states() {
            for l in 0..nl as Letter {
                let base = remap_letter_inverse(l, &kept);
                let mut out = Vec::new();
                for ext in 0..letters(tracks.len()) as Letter {
                    let mut full = base;
                    for (j, &t) in tracks.iter().enumerate() {
                        full |= (ext >> j & 1) << t;
                    }
                    out.extend_from_slice(self.succ(q, full));
                }
                succ.push(out);
            }
        }
        Ok(Nba::from_lists(new_width, succ, self.accepting.clone(), self.init).trim())
    }

    /// Re-express over a wider alphabet: old track `i` becomes new track
    /// `positions[i]`; other new tracks are ignored.
    pub fn remap(&self, new_width: usize, positions: &[usize]) -> Result<Nba> {
        check_width(new_width)?;
        let mut succ = Vec::with_capacity(self.num_states() << new_width);
        for q in 0..self.num_states() {
            for l in 0..letters(new_width) as Letter {
                succ.push(self.succ(q, remap_letter(l, positions)).to_vec());
            }
        }
        Ok(Nba::from_lists(
            new_width,
            succ,
            self.accepting.clone(),
            self.init,
        ))
    }
}

/// Place the bits of a narrow letter at the given wide track positions.
fn remap_letter_inverse(l: Letter, positions: &[usize]) -> Letter {
    positions
        .iter()
        .enumerate()
        .fold(0, |acc, (i, &t)| acc | (l >> i & 1) << t)
}
