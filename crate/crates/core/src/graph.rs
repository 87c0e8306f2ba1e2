//! Small directed-graph helpers shared by the automata and game code.

/// Strongly connected components of a graph given as adjacency lists.
///
/// Components are numbered in reverse topological order (a component only
/// reaches components with smaller or equal numbers).
pub struct Sccs {
    pub comp: Vec<usize>,
    pub count: usize,
    /// Whether the component contains a cycle (more than one vertex or a self-loop).
    pub cyclic: Vec<bool>,
}

pub fn sccs(adj: &[Vec<usize>]) -> Sccs {
    sccs_filtered(adj, |_| true)
}

/// Like [`sccs`], but vertices rejected by `keep` (and edges touching them) are
/// ignored. Ignored vertices get component `usize::MAX`.
pub fn sccs_filtered(adj: &[Vec<usize>], keep: impl Fn(usize) -> bool) -> Sccs {
    const NONE: usize = usize::MAX;
    let n = adj.len();
    let mut index = vec![NONE; n];
    let mut low = vec![0; n];
    let mut on_stack = vec![false; n];
    let mut stack = Vec::new();
    let mut comp = vec![NONE; n];
    let mut cyclic = Vec::new();
    let mut count = 0;
    let mut next = 0;
    let mut call: Vec<(usize, usize)> = Vec::new();

    for root in 0..n {
        if index[root] != NONE || !keep(root) {
            continue;
        }
        call.push((root, 0));
        index[root] = next;
        low[root] = next;
        next += 1;
        stack.push(root);
        on_stack[root] = true;
        while let Some(&(v, i)) = call.last() {
            if i < adj[v].len() {
                let w = adj[v][i];
                call.last_mut().unwrap().1 += 1;
                if !keep(w) {
                    continue;
                }
                if index[w] == NONE {
                    index[w] = next;
                    low[w] = next;
                    next += 1;
                    stack.push(w);
                    on_stack[w] = true;
                    call.push((w, 0));
                } else if on_stack[w] {
                    low[v] = low[v].min(index[w]);
                }
            } else {
                call.pop();
                if let Some(&(u, _)) = call.last() {
                    low[u] = low[u].min(low[v]);
                }
                if low[v] == index[v] {
                    let mut size = 0;
                    loop {
                        let w = stack.pop().unwrap();
                        on_stack[w] = false;
                        comp[w] = count;
                        size += 1;
                        if w == v {
                            break;
                        }
                    }
                    let looped = size > 1 || adj[v].contains(&v);
                    cyclic.push(looped);
                    count += 1;
                }
            }
        }
    }
    Sccs {
        comp,
        count,
        cyclic,
    }
}

/// Vertices reachable from `start` (inclusive).
pub fn reachable(adj: &[Vec<usize>], start: &[usize]) -> Vec<bool> {
    let mut seen = vec![false; adj.len()];
    let mut todo: Vec<usize> = Vec::new();
    for &s in start {
        if !seen[s] {
            seen[s] = true;
            todo.push(s);
        }
    }
    while let Some(v) = todo.pop() {
        for &w in &adj[v] {
            if !seen[w] {
                seen[w] = true;
                todo.push(w);
            }
        }
    }
    seen
}

/// Vertices that can reach some vertex in `target`.
pub fn coreachable(adj: &[Vec<usize>], target: &[bool]) -> Vec<bool> {
    let mut rev = vec![Vec::new(); adj.len()];
    for (v, succ) in adj.iter().enumerate() {
        for &w in succ {
            rev[w].push(v);
        }
    }
    let start: Vec<usize> = (0..adj.len()).filter(|&v| target[v]).collect();
    reachable(&rev, &start)
}

/// Vertices `v` lying on a cycle whose minimal color is `color[v]` and has
/// the given parity (`1` for odd, `0` for even). Some vertex of every such
/// cycle is marked, so a reachable marked vertex means a reachable cycle of
/// that parity.
pub fn min_color_cycles(adj: &[Vec<usize>], color: &[u32], parity: u32) -> Vec<bool> {
    let mut marked = vec![false; adj.len()];
    let mut levels: Vec<u32> = color.iter().copied().filter(|c| c % 2 == parity).collect();
    levels.sort_unstable();
    levels.dedup();
    for c in levels {
        let s = sccs_filtered(adj, |v| color[v] >= c);
        for v in 0..adj.len() {
            if color[v] == c && s.cyclic[s.comp[v]] {
                marked[v] = true;
            }
        }
    }
    marked
}
