use std::collections::{HashMap, VecDeque};

use super::{check_width, letters, remap_letter, Lasso, Letter, Nba};
use crate::error::{Error, Result};
use crate::graph;

/// Deterministic parity automaton with state colors. A run is accepting when
/// the least color it visits infinitely often is even.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Dpa {
    width: usize,
    delta: Vec<u32>,
    color: Vec<u32>,
    init: u32,
}

impl Dpa {
    /// `delta[q * 2^width + letter]` is the successor of `q`.
    pub fn new(width: usize, delta: Vec<u32>, color: Vec<u32>, init: u32) -> Result<Self> {
        check_width(width)?;
        let n = color.len();
        if n == 0 {
            return Err(Error::malformed("dpa", "no states"));
        }
        if delta.len() != n * letters(width) {
            return Err(Error::malformed(
                "dpa",
                format!(
                    "transition table has {} entries, expected {}",
                    delta.len(),
                    n * letters(width)
                ),
            ));
        }
        if let Some(bad) = delta
            .iter()
            .chain(std::iter::once(&init))
            .find(|&&q| q as usize >= n)
        {
            return Err(Error::malformed("dpa", format!("state {bad} out of range")));
        }
        Ok(Dpa {
            width,
            delta,
            color,
            init,
        })
    }

    pub(crate) fn from_raw(width: usize, delta: Vec<u32>, color: Vec<u32>, init: u32) -> Self {
        debug_assert_eq!(delta.len(), color.len() << width);
        Dpa {
            width,
            delta,
            color,
            init,
        }
    }

    /// One state looping on every letter, accepting iff `accept`.
    pub fn constant(width: usize, accept: bool) -> Self {
        Dpa::from_raw(width, vec![0; letters(width)], vec![!accept as u32], 0)
    }

    pub fn universal(width: usize) -> Self {
        Self::constant(width, true)
    }

    pub fn empty(width: usize) -> Self {
        Self::constant(width, false)
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn num_states(&self) -> usize {
        self.color.len()
    }

    pub fn init(&self) -> usize {
        self.init as usize
    }

    pub fn color(&self, q: usize) -> u32 {
        self.color[q]
    }

    pub fn colors(&self) -> &[u32] {
        &self.color
    }

    pub fn max_color(&self) -> u32 {
        self.color.iter().copied().max().unwrap_or(0)
    }

    #[inline]
    pub fn next(&self, q: usize, letter: Letter) -> usize {
        self.delta[(q << self.width) | letter as usize] as usize
    }

    /// Runs the automaton on `u·v^ω`; the cycle is iterated until the state at
    /// the start of the cycle repeats.
    pub fn accepts(&self, w: &Lasso) -> Result<bool> {
        if w.width != self.width {
            return Err(Error::WidthMismatch {
                expected: self.width,
                found: w.width,
            });
        }
        let mut q = self.init();
        for &l in &w.prefix {
            q = self.next(q, l);
        }
        let mut seen: HashMap<usize, usize> = HashMap::new();
        let mut mins = Vec::new();
        loop {
            if let Some(&start) = seen.get(&q) {
                let min = mins[start..].iter().copied().min().unwrap();
                return Ok(min % 2 == 0);
            }
            seen.insert(q, mins.len());
            let mut m = u32::MAX;
            for &l in &w.cycle {
                q = self.next(q, l);
                m = m.min(self.color[q]);
            }
            mins.push(m);
        }
    }

    pub fn complement(&self) -> Dpa {
        Dpa {
            color: self.color.iter().map(|c| c + 1).collect(),
            ..self.clone()
        }
    }

    /// Re-express over a wider alphabet: old track `i` becomes new track
    /// `positions[i]`; the remaining new tracks are ignored.
    pub fn remap(&self, new_width: usize, positions: &[usize]) -> Result<Dpa> {
        check_width(new_width)?;
        debug_assert_eq!(positions.len(), self.width);
        let n = self.num_states();
        let mut delta = Vec::with_capacity(n << new_width);
        for q in 0..n {
            for l in 0..letters(new_width) as Letter {
                delta.push(self.delta[(q << self.width) | remap_letter(l, positions) as usize]);
            }
        }
        Ok(Dpa::from_raw(
            new_width,
            delta,
            self.color.clone(),
            self.init,
        ))
    }

    pub(crate) fn adjacency(&self) -> Vec<Vec<usize>> {
        (0..self.num_states())
            .map(|q| {
                let mut s: Vec<usize> = self.delta[q << self.width..(q + 1) << self.width]
                    .iter()
                    .map(|&p| p as usize)
                    .collect();
                s.sort_unstable();
                s.dedup();
                s
            })
            .collect()
    }

    /// Restrict to states reachable from the initial state.
    pub fn reachable_part(&self) -> Dpa {
        let keep = graph::reachable(&self.adjacency(), &[self.init()]);
        self.restrict(&keep)
    }

    fn restrict(&self, keep: &[bool]) -> Dpa {
        let mut index = vec![u32::MAX; self.num_states()];
        let mut k = 0;
        for q in 0..self.num_states() {
            if keep[q] {
                index[q] = k;
                k += 1;
            }
        }
        let mut delta = Vec::with_capacity((k as usize) << self.width);
        let mut color = Vec::with_capacity(k as usize);
        for q in 0..self.num_states() {
            if keep[q] {
                color.push(self.color[q]);
                delta.extend(
                    self.delta[q << self.width..(q + 1) << self.width]
                        .iter()
                        .map(|&p| index[p as usize]),
                );
            }
        }
        Dpa::from_raw(self.width, delta, color, index[self.init()])
    }

    /// Merge states with identical colors and identical successor behaviour
    /// (Moore partition refinement). Unreachable states are dropped first.
    pub fn minimize(&self) -> Dpa {
        let a = self.reachable_part();
        let n = a.num_states();
        let nl = letters(a.width);
        let mut block: Vec<u32> = {
            let mut ids = HashMap::new();
            a.color
                .iter()
                .map(|&c| {
                    let next = ids.len() as u32;
                    *ids.entry(c).or_insert(next)
                })
                .collect()
        };
        let mut count = block.iter().copied().max().map_or(0, |m| m + 1);
        loop {
            let mut ids: HashMap<Vec<u32>, u32> = HashMap::with_capacity(n);
            let mut next_block = Vec::with_capacity(n);
            for q in 0..n {
                let mut sig = Vec::with_capacity(nl + 1);
                sig.push(block[q]);
                sig.extend(
                    a.delta[q * nl..(q + 1) * nl]
                        .iter()
                        .map(|&p| block[p as usize]),
                );
                let fresh = ids.len() as u32;
                next_block.push(*ids.entry(sig).or_insert(fresh));
            }
            let new_count = ids.len() as u32;
            block = next_block;
            if new_count == count {
                break;
            }
            count = new_count;
        }
        let k = count as usize;
        let mut rep = vec![usize::MAX; k];
        for q in 0..n {
            let b = block[q] as usize;
            if rep[b] == usize::MAX {
                rep[b] = q;
            }
        }
        let mut delta = Vec::with_capacity(k * nl);
        let mut color = Vec::with_capacity(k);
        for &q in &rep {
            color.push(a.color[q]);
            delta.extend(
                a.delta[q * nl..(q + 1) * nl]
                    .iter()
                    .map(|&p| block[p as usize]),
            );
        }
        Dpa::from_raw(a.width, delta, color, block[a.init()])
    }

    /// Compress the colors to a contiguous range starting at 0 or 1 while
    /// preserving the parity order, which leaves every run's verdict unchanged.
    pub fn normalize_colors(&self) -> Dpa {
        let mut used: Vec<u32> = self.color.clone();
        used.sort_unstable();
        used.dedup();
        let mut map = HashMap::new();
        let mut current = used[0] % 2;
        let mut prev_parity = used[0] % 2;
        for &c in &used {
            if c % 2 != prev_parity {
                current += 1;
                prev_parity = c % 2;
            }
            map.insert(c, current);
        }
        Dpa {
            color: self.color.iter().map(|c| map[c]).collect(),
            ..self.clone()
        }
    }

    /// Recolor with as few colors as the transition graph allows: inside each
    /// strongly connected component the states of least color get the
    /// lowest admissible value of that parity, and the rest is handled
    /// recursively above it. Every cycle keeps the parity of its least color.
    pub fn normalize_priorities(&self) -> Dpa {
        fn assign(a: &Dpa, adj: &[Vec<usize>], keep: &[bool], base: u32, out: &mut [u32]) {
            let s = graph::sccs_filtered(adj, |q| keep[q]);
            let mut members = vec![Vec::new(); s.count];
            for q in 0..a.num_states() {
                if keep[q] {
                    members[s.comp[q]].push(q);
                }
            }
            for (c, qs) in members.iter().enumerate() {
                if !s.cyclic[c] {
                    for &q in qs {
                        out[q] = base;
                    }
                    continue;
                }
                let m = qs.iter().map(|&q| a.color[q]).min().unwrap();
                let k = if base % 2 == m % 2 { base } else { base + 1 };
                let mut rest = vec![false; a.num_states()];
                for &q in qs {
                    if a.color[q] == m {
                        out[q] = k;
                    } else {
                        rest[q] = true;
                    }
                }
                assign(a, adj, &rest, k, out);
            }
        }
        let adj = self.adjacency();
        let mut out = vec![0; self.num_states()];
        assign(self, &adj, &vec![true; self.num_states()], 0, &mut out);
        Dpa {
            color: out,
            ..self.clone()
        }
    }

    /// States from which some word is accepted.
    pub fn nonempty_states(&self) -> Vec<bool> {
        let adj = self.adjacency();
        let mut seeds = vec![false; self.num_states()];
        let mut evens: Vec<u32> = self.color.iter().copied().filter(|c| c % 2 == 0).collect();
        evens.sort_unstable();
        evens.dedup();
        for c in evens {
            let s = graph::sccs_filtered(&adj, |q| self.color[q] >= c);
            let mut good = vec![false; s.count];
            for q in 0..self.num_states() {
                if self.color[q] == c && s.cyclic[s.comp[q]] {
                    good[s.comp[q]] = true;
                }
            }
            for q in 0..self.num_states() {
                if s.comp[q] != usize::MAX && good[s.comp[q]] {
                    seeds[q] = true;
                }
            }
        }
        graph::coreachable(&adj, &seeds)
    }

    pub fn is_empty(&self) -> bool {
        !self.nonempty_states()[self.init()]
    }

    pub fn is_universal(&self) -> bool {
        self.complement().is_empty()
    }

    /// Whether every cycle inside each strongly connected component has the
    /// same verdict; checked by requiring one color parity per component.
    pub fn is_weak(&self) -> bool {
        let s = graph::sccs(&self.adjacency());
        let mut parity = vec![None; s.count];
        for q in 0..self.num_states() {
            let c = s.comp[q];
            if !s.cyclic[c] {
                continue;
            }
            match parity[c] {
                None => parity[c] = Some(self.color[q] % 2),
                Some(p) if p != self.color[q] % 2 => return false,
                _ => {}
            }
        }
        true
    }

    /// Recolor a weak automaton with colors 0/1 only. Transient states get 0
    /// when every cyclic component they reach accepts.
    fn weak_recolor(&self) -> Dpa {
        let adj = self.adjacency();
        let s = graph::sccs(&adj);
        // Components are in reverse topological order, so successors are done first.
        let mut members = vec![Vec::new(); s.count];
        for q in 0..self.num_states() {
            members[s.comp[q]].push(q);
        }
        let mut all_accept = vec![true; s.count];
        let mut col = vec![0u32; self.num_states()];
        for c in 0..s.count {
            let mut ok = true;
            if s.cyclic[c] {
                ok = self.color[members[c][0]].is_multiple_of(2);
            }
            for &q in &members[c] {
                for &p in &adj[q] {
                    if s.comp[p] != c {
                        ok &= all_accept[s.comp[p]];
                    }
                }
            }
            all_accept[c] = ok;
            let value = if s.cyclic[c] {
                self.color[members[c][0]] % 2
            } else {
                !ok as u32
            };
            for &q in &members[c] {
                col[q] = value;
            }
        }
        Dpa {
            color: col,
            ..self.clone()
        }
    }

    /// Canonical cleanup applied after every construction: prune, recolor
    /// dead and universal states, shrink colors and minimize.
    pub fn simplify(&self) -> Dpa {
        let a = self.reachable_part();
        let live = a.nonempty_states();
        let co_live = a.complement().nonempty_states();
        let mut color = a.color.clone();
        for q in 0..a.num_states() {
            if !live[q] {
                color[q] = 1;
            } else if !co_live[q] {
                color[q] = 0;
            }
        }
        let mut a = Dpa { color, ..a };
        if a.is_weak() {
            a = a.weak_recolor();
        }
        let a = a.normalize_priorities().minimize();
        let merged = super::merge::merge_equivalent(&a);
        if merged.num_states() < a.num_states() {
            merged
                .normalize_priorities()
                .minimize()
                .normalize_priorities()
        } else {
            a.normalize_priorities()
        }
    }

    /// Intersection with an automaton that passes [`Dpa::is_weak`].
    pub fn product_weak(&self, weak: &Dpa) -> Result<Dpa> {
        if self.width != weak.width {
            return Err(Error::WidthMismatch {
                expected: self.width,
                found: weak.width,
            });
        }
        let w = weak.weak_recolor();
        self.product_with(&w, |a, b| if b % 2 == 1 { 1 } else { a + 2 })
    }

    /// Whether every color is 1 or 2: accepted exactly when color 1 occurs
    /// finitely often.
    pub fn is_co_buchi(&self) -> bool {
        self.color.iter().all(|&c| c == 1 || c == 2)
    }

    /// Whether every color is 0 or 1: accepted exactly when color 0 occurs
    /// infinitely often.
    pub fn is_buchi(&self) -> bool {
        self.color.iter().all(|&c| c <= 1)
    }

    /// Intersection with an automaton that passes [`Dpa::is_co_buchi`]. No
    /// extra memory is needed: visits to color 1 dominate everything else.
    pub fn product_co_buchi(&self, other: &Dpa) -> Result<Dpa> {
        if self.width != other.width {
            return Err(Error::WidthMismatch {
                expected: self.width,
                found: other.width,
            });
        }
        self.product_with(other, |a, b| if b == 1 { 1 } else { a + 2 })
    }

    /// Intersection with an automaton that passes [`Dpa::is_buchi`]. The
    /// product remembers the least color of `self` since the last accepting
    /// visit of `other` and only reports it at such visits; all other
    /// states get an odd color above every color of `self`.
    pub fn product_buchi(&self, other: &Dpa) -> Result<Dpa> {
        if self.width != other.width {
            return Err(Error::WidthMismatch {
                expected: self.width,
                found: other.width,
            });
        }
        let top = (self.max_color() + 1) | 1;
        let nl = letters(self.width);
        type Key = (u32, u32, u32);
        let start: Key = (self.init, other.init, top);
        let mut index: HashMap<Key, u32> = HashMap::from([(start, 0)]);
        let mut states = vec![start];
        let mut delta = Vec::new();
        let mut color = Vec::new();
        let mut i = 0;
        while i < states.len() {
            let (p, q, m) = states[i];
            let seen = m.min(self.color[p as usize]);
            let accepting = other.color[q as usize] == 0;
            color.push(if accepting { seen } else { top });
            let carry = if accepting { top } else { seen };
            for l in 0..nl {
                let t = (
                    self.delta[p as usize * nl + l],
                    other.delta[q as usize * nl + l],
                    carry,
                );
                let len = states.len() as u32;
                let id = *index.entry(t).or_insert_with(|| {
                    states.push(t);
                    len
                });
                delta.push(id);
            }
            i += 1;
        }
        Ok(Dpa::from_raw(self.width, delta, color, 0))
    }

    pub(crate) fn product_with(&self, other: &Dpa, paint: impl Fn(u32, u32) -> u32) -> Result<Dpa> {
        let nl = letters(self.width);
        let mut index: HashMap<(u32, u32), u32> = HashMap::new();
        let mut pairs = vec![(self.init, other.init)];
        index.insert((self.init, other.init), 0);
        let mut delta = Vec::new();
        let mut i = 0;
        while i < pairs.len() {
            let (p, q) = pairs[i];
            for l in 0..nl {
                let t = (
                    self.delta[(p as usize) * nl + l],
                    other.delta[(q as usize) * nl + l],
                );
                let id = match index.get(&t) {
                    Some(&id) => id,
                    None => {
                        let id = pairs.len() as u32;
                        index.insert(t, id);
                        pairs.push(t);
                        id
                    }
                };
                delta.push(id);
            }
            i += 1;
        }
        let color = pairs
            .iter()
            .map(|&(p, q)| paint(self.color[p as usize], other.color[q as usize]))
            .collect();
        Ok(Dpa::from_raw(self.width, delta, color, 0))
    }

    /// A lasso accepted by the automaton, if its language is nonempty.
    pub fn nonemptiness_witness(&self) -> Option<Lasso> {
        let adj = self.adjacency();
        let reach = graph::reachable(&adj, &[self.init()]);
        let mut evens: Vec<u32> = self.color.iter().copied().filter(|c| c % 2 == 0).collect();
        evens.sort_unstable();
        evens.dedup();
        for c in evens {
            let s = graph::sccs_filtered(&adj, |q| reach[q] && self.color[q] >= c);
            let hit = (0..self.num_states())
                .find(|&q| reach[q] && self.color[q] == c && s.cyclic[s.comp[q]]);
            let Some(target) = hit else { continue };
            let comp = s.comp[target];
            let prefix = self.path(self.init(), |q| q == target, |_| true)?;
            // Leave the target by one edge inside its component, then return.
            let nl = letters(self.width) as Letter;
            let (first, via) = (0..nl)
                .map(|l| (l, self.next(target, l)))
                .find(|&(_, p)| s.comp[p] == comp)?;
            let mut cycle = vec![first];
            cycle.extend(self.path(via, |q| q == target, |q| s.comp[q] == comp)?);
            return Some(Lasso {
                width: self.width,
                prefix,
                cycle,
            });
        }
        None
    }

    /// Breadth-first letter path from `from` to a state satisfying `goal`,
    /// moving only through states accepted by `allowed`.
    fn path(
        &self,
        from: usize,
        goal: impl Fn(usize) -> bool,
        allowed: impl Fn(usize) -> bool,
    ) -> Option<Vec<Letter>> {
        let mut parent: HashMap<usize, (usize, Letter)> = HashMap::new();
        let mut queue = VecDeque::from([from]);
        let mut seen = vec![false; self.num_states()];
        seen[from] = true;
        while let Some(q) = queue.pop_front() {
            if goal(q) {
                let mut word = Vec::new();
                let mut cur = q;
                while let Some(&(p, l)) = parent.get(&cur) {
                    word.push(l);
                    cur = p;
                }
                word.reverse();
                return Some(word);
            }
            for l in 0..letters(self.width) as Letter {
                let p = self.next(q, l);
                if !seen[p] && allowed(p) {
                    seen[p] = true;
                    parent.insert(p, (q, l));
                    queue.push_back(p);
                }
            }
        }
        None
    }

    /// Language-equivalent Büchi automaton. Weak automata and automata whose
    /// only even color is the least one translate directly; otherwise the
    /// automaton guesses the even color that is minimal infinitely often.
    pub fn to_nba(&self) -> Nba {
        let a = self.reachable_part();
        let n = a.num_states();
        let nl = letters(a.width);
        let min = *a.color.iter().min().unwrap();
        let evens: Vec<u32> = {
            let mut e: Vec<u32> = a.color.iter().copied().filter(|c| c % 2 == 0).collect();
            e.sort_unstable();
            e.dedup();
            e
        };
        let direct = if a.is_weak() {
            Some(
                a.weak_recolor()
                    .color
                    .iter()
                    .map(|c| c % 2 == 0)
                    .collect::<Vec<_>>(),
            )
        } else if evens.is_empty() || evens == [min] {
            Some(a.color.iter().map(|&c| c == min && c % 2 == 0).collect())
        } else {
            None
        };
        if let Some(accepting) = direct {
            let succ = a.delta.iter().map(|&p| vec![p]).collect();
            return Nba::from_lists(a.width, succ, accepting, a.init);
        }
        // Copy 0 is the plain automaton; copy k (k >= 1) stays within colors
        // >= evens[k-1] and accepts at color evens[k-1].
        let copies = evens.len() + 1;
        let id = |copy: usize, q: usize| (copy * n + q) as u32;
        let mut succ = vec![Vec::new(); copies * n * nl];
        let mut accepting = vec![false; copies * n];
        for q in 0..n {
            for l in 0..nl {
                let p = a.delta[q * nl + l] as usize;
                let slot = &mut succ[id(0, q) as usize * nl + l];
                slot.push(id(0, p));
                for (k, &c) in evens.iter().enumerate() {
                    if a.color[p] >= c {
                        slot.push(id(k + 1, p));
                    }
                }
            }
        }
        for (k, &c) in evens.iter().enumerate() {
            for q in 0..n {
                if a.color[q] < c {
                    continue;
                }
                accepting[id(k + 1, q) as usize] = a.color[q] == c;
                for l in 0..nl {
                    let p = a.delta[q * nl + l] as usize;
                    if a.color[p] >= c {
                        succ[id(k + 1, q) as usize * nl + l].push(id(k + 1, p));
                    }
                }
            }
        }
        Nba::from_lists(a.width, succ, accepting, a.init).trim()
    }
}
