//! State reduction beyond Moore minimization: merge states that accept the
//! same language whenever the merged automaton is still equivalent.

use super::{letters, Dpa};
use crate::graph;

/// Product of two automata restricted to pairs reachable from `starts`.
struct Product {
    /// Dense index `p * nb + q`, `usize::MAX` when unvisited.
    index: Vec<usize>,
    pairs: Vec<(usize, usize)>,
    adj: Vec<Vec<usize>>,
}

fn product(a: &Dpa, b: &Dpa, starts: impl IntoIterator<Item = (usize, usize)>) -> Product {
    let nb = b.num_states();
    let nl = letters(a.width());
    let mut index = vec![usize::MAX; a.num_states() * nb];
    let mut pairs = Vec::new();
    for (p, q) in starts {
        if index[p * nb + q] == usize::MAX {
            index[p * nb + q] = pairs.len();
            pairs.push((p, q));
        }
    }
    let mut adj = Vec::new();
    let mut i = 0;
    while i < pairs.len() {
        let (p, q) = pairs[i];
        let mut out = Vec::new();
        for l in 0..nl as u32 {
            let t = a.next(p, l) * nb + b.next(q, l);
            if index[t] == usize::MAX {
                index[t] = pairs.len();
                pairs.push((t / nb, t % nb));
            }
            out.push(index[t]);
        }
        out.sort_unstable();
        out.dedup();
        adj.push(out);
        i += 1;
    }
    Product { index, pairs, adj }
}

/// Product vertices that can reach a cycle accepted by exactly one side.
fn disagreeing(a: &Dpa, b: &Dpa, pr: &Product) -> Vec<bool> {
    let mut ca: Vec<u32> = a.colors().to_vec();
    let mut cb: Vec<u32> = b.colors().to_vec();
    ca.sort_unstable();
    ca.dedup();
    cb.sort_unstable();
    cb.dedup();
    let n = pr.pairs.len();
    let mut seeds = vec![false; n];
    for &x in &ca {
        for &y in cb.iter().filter(|&&y| y % 2 != x % 2) {
            let s = graph::sccs_filtered(&pr.adj, |v| {
                let (p, q) = pr.pairs[v];
                a.color(p) >= x && b.color(q) >= y
            });
            let mut has_x = vec![false; s.count];
            let mut has_y = vec![false; s.count];
            for v in 0..n {
                let c = s.comp[v];
                if c == usize::MAX || !s.cyclic[c] {
                    continue;
                }
                let (p, q) = pr.pairs[v];
                has_x[c] |= a.color(p) == x;
                has_y[c] |= b.color(q) == y;
            }
            for v in 0..n {
                let c = s.comp[v];
                if c != usize::MAX && has_x[c] && has_y[c] {
                    seeds[v] = true;
                }
            }
        }
    }
    graph::coreachable(&pr.adj, &seeds)
}

/// Whether two automata over the same alphabet accept the same language.
pub(crate) fn equivalent(a: &Dpa, b: &Dpa) -> bool {
    let pr = product(a, b, [(a.init(), b.init())]);
    !disagreeing(a, b, &pr)[0]
}

/// Largest self-product examined when looking for equivalent states.
const PRODUCT_BUDGET: usize = 1 << 22;

/// Try to redirect every transition into a state to a language-equivalent
/// earlier state, keeping each merge only if the whole automaton stays
/// equivalent to the original.
pub(crate) fn merge_equivalent(a: &Dpa) -> Dpa {
    let n = a.num_states();
    if n < 2 || n * n * letters(a.width()) > PRODUCT_BUDGET {
        return a.clone();
    }
    let pr = product(a, a, (0..n).flat_map(|p| (0..n).map(move |q| (p, q))));
    let bad = disagreeing(a, a, &pr);
    let same = |p: usize, q: usize| !bad[pr.index[p * n + q]];
    let mut palette: Vec<u32> = a.colors().to_vec();
    palette.sort_unstable();
    palette.dedup();
    // Small automata get every equivalent pair tried, large ones only the
    // least candidate.
    let thorough = n <= THOROUGH_STATES;
    let mut target: Vec<usize> = (0..n).collect();
    let mut color = a.colors().to_vec();
    let mut current = a.clone();
    let mut changed = true;
    while changed {
        changed = false;
        for q in 0..n {
            if target[q] != q {
                continue;
            }
            let candidates: Vec<usize> = (0..n)
                .filter(|&r| r != q && target[r] == r && same(r, q))
                .take(if thorough { n } else { 1 })
                .collect();
            'merge: for r in candidates {
                let mut trial = target.clone();
                for t in trial.iter_mut().filter(|t| **t == q) {
                    *t = r;
                }
                // The merged state may need a different color; try the
                // palette, starting with the one it already has.
                let options = std::iter::once(color[r])
                    .chain(palette.iter().copied().filter(|&c| c != color[r]));
                for c in options {
                    let mut trial_color = color.clone();
                    trial_color[r] = c;
                    let candidate = redirect(a, &trial, &trial_color);
                    if equivalent(&candidate, a) {
                        target = trial;
                        color = trial_color;
                        current = candidate;
                        changed = true;
                        break 'merge;
                    }
                }
            }
        }
    }
    current.reachable_part()
}

const THOROUGH_STATES: usize = 40;

fn redirect(a: &Dpa, target: &[usize], color: &[u32]) -> Dpa {
    let nl = letters(a.width());
    let delta = (0..a.num_states())
        .flat_map(|q| (0..nl as u32).map(move |l| (q, l)))
        .map(|(q, l)| target[a.next(q, l)] as u32)
        .collect();
    Dpa::from_raw(a.width(), delta, color.to_vec(), target[a.init()] as u32)
}
