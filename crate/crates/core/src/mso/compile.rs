use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::formula::{Formula, Sort};
use crate::omega::{
    determinize_with, has_cheap_determinization, Dpa, Lasso, Nba, DEFAULT_STATE_CAP, MAX_WIDTH,
};

pub(crate) type VarId = usize;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
enum Binding {
    Var(VarId),
    /// Index into the instantiated parameter table.
    Param(usize),
}

#[derive(Clone, Debug)]
enum Aut {
    Det(Dpa),
    Nondet(Nba),
}

/// Automaton over the tracks of `vars` (sorted; bit `i` is `vars[i]`).
#[derive(Clone, Debug)]
struct Node {
    vars: Vec<VarId>,
    aut: Aut,
}

impl Node {
    fn constant(value: bool) -> Node {
        Node {
            vars: Vec::new(),
            aut: Aut::Det(Dpa::constant(0, value)),
        }
    }

    fn as_constant(&self) -> Option<bool> {
        if !self.vars.is_empty() {
            return None;
        }
        Some(match &self.aut {
            Aut::Det(d) => !d.is_empty(),
            Aut::Nondet(n) => !n.is_empty(),
        })
    }

    fn states(&self) -> usize {
        match &self.aut {
            Aut::Det(d) => d.num_states(),
            Aut::Nondet(n) => n.num_states(),
        }
    }

    fn positions(&self, vars: &[VarId]) -> Vec<usize> {
        self.vars
            .iter()
            .map(|v| vars.binary_search(v).expect("superset"))
            .collect()
    }

    fn aligned_dpa(&self, vars: &[VarId], cap: usize) -> Result<Dpa> {
        let d = match &self.aut {
            Aut::Det(d) => d.clone(),
            Aut::Nondet(n) => determinize_with(n, cap)?,
        };
        d.remap(vars.len(), &self.positions(vars))
    }

    fn aligned_nba(&self, vars: &[VarId]) -> Result<Nba> {
        let n = match &self.aut {
            Aut::Det(d) => d.to_nba(),
            Aut::Nondet(n) => n.clone(),
        };
        n.remap(vars.len(), &self.positions(vars))
    }

    /// Collapse automata without tracks to constants.
    fn settle(self) -> Node {
        match self.as_constant() {
            Some(b) => Node::constant(b),
            None => self,
        }
    }
}

/// Compiles formulas to automata. The state cap bounds every determinization.
#[derive(Clone, Debug)]
pub struct Compiler {
    pub state_cap: usize,
    pub width_limit: usize,
}

impl Default for Compiler {
    fn default() -> Self {
        Compiler {
            state_cap: DEFAULT_STATE_CAP,
            width_limit: MAX_WIDTH,
        }
    }
}

/// Largest automaton `cheap_det` converts.
const CHEAP_DET_STATES: usize = 16;

type Scope = Vec<(String, Binding)>;

struct Run<'a> {
    cfg: &'a Compiler,
    sorts: Vec<Sort>,
    /// Per parameter, its bit at each phase.
    params: Vec<Vec<bool>>,
    /// Phase successor table shared by all parameters.
    phase_next: Vec<usize>,
    memo: HashMap<(Formula, Vec<(String, Binding)>), Node>,
}

fn lookup<'s>(scope: &'s Scope, name: &str) -> Option<&'s Binding> {
    scope.iter().rev().find(|(n, _)| n == name).map(|(_, b)| b)
}

fn merge(a: &[VarId], b: &[VarId]) -> Vec<VarId> {
    let mut v: Vec<VarId> = a.iter().chain(b).copied().collect();
    v.sort_unstable();
    v.dedup();
    v
}

/// Small deterministic automaton over the given (local) track order.
fn atom(vars: &[VarId], delta: &[[u32; 4]], colors: &[u32]) -> Node {
    let width = vars.len();
    let mut table = Vec::new();
    for row in delta {
        table.extend_from_slice(&row[..1 << width]);
    }
    let d = Dpa::from_raw(width, table, colors.to_vec(), 0);
    let mut sorted = vars.to_vec();
    sorted.sort_unstable();
    let positions: Vec<usize> = vars
        .iter()
        .map(|v| sorted.binary_search(v).unwrap())
        .collect();
    let d = d.remap(width, &positions).expect("width 2");
    Node {
        vars: sorted,
        aut: Aut::Det(d),
    }
}

// Letters for two tracks (a, b): bit 0 is a, bit 1 is b.
// States: 0 waiting, then accepting sink 2 / rejecting sink 3.
const ACC: u32 = 2;
const REJ: u32 = 3;

fn less_atom(x: VarId, y: VarId) -> Node {
    // 1: x seen, waiting for y.
    atom(
        &[x, y],
        &[[0, 1, REJ, REJ], [1, 1, ACC, ACC], [ACC; 4], [REJ; 4]],
        &[1, 1, 0, 1],
    )
}

fn equal_atom(x: VarId, y: VarId) -> Node {
    atom(
        &[x, y],
        &[[0, REJ, REJ, ACC], [REJ; 4], [ACC; 4], [REJ; 4]],
        &[1, 1, 0, 1],
    )
}

fn member_atom(t: VarId, set: VarId) -> Node {
    atom(
        &[t, set],
        &[[0, REJ, 0, ACC], [REJ; 4], [ACC; 4], [REJ; 4]],
        &[1, 1, 0, 1],
    )
}

/// Exactly one position carries a 1.
fn singleton(v: VarId) -> Node {
    Node {
        vars: vec![v],
        aut: Aut::Det(Dpa::from_raw(1, vec![0, 1, 1, 2, 2, 2], vec![1, 0, 1], 0)),
    }
}

impl Run<'_> {
    fn fresh(&mut self, sort: Sort) -> VarId {
        self.sorts.push(sort);
        self.sorts.len() - 1
    }

    fn check_width(&self, width: usize) -> Result<()> {
        if width > self.cfg.width_limit {
            return Err(Error::WidthLimit {
                width,
                limit: self.cfg.width_limit,
            });
        }
        Ok(())
    }

    fn var(&self, scope: &Scope, name: &str) -> Result<Binding> {
        lookup(scope, name)
            .cloned()
            .ok_or_else(|| Error::UnboundParameter(name.to_string()))
    }

    fn first_order(&self, scope: &Scope, name: &str) -> Result<VarId> {
        match self.var(scope, name)? {
            Binding::Var(v) => Ok(v),
            Binding::Param(_) => Err(Error::malformed(
                "formula",
                format!("parameter `{name}` used as a position"),
            )),
        }
    }

    /// Membership in an instantiated parameter: follow the phase clock until
    /// the position is marked, then check the parameter bit.
    fn clock(&self, t: VarId, param: usize) -> Node {
        let bits = &self.params[param];
        let span = bits.len() as u32;
        let (acc, rej) = (span, span + 1);
        let mut delta = Vec::new();
        for i in 0..bits.len() {
            delta.push(self.phase_next[i] as u32);
            delta.push(if bits[i] { acc } else { rej });
        }
        delta.extend([acc, acc, rej, rej]);
        let mut colors = vec![1; bits.len()];
        colors.extend([0, 1]);
        Node {
            vars: vec![t],
            aut: Aut::Det(Dpa::from_raw(1, delta, colors, 0).simplify()),
        }
    }

    fn compile(&mut self, f: &Formula, scope: &mut Scope) -> Result<Node> {
        let key = match f {
            Formula::Not(_) | Formula::Exists(..) => {
                let fv = f.free_vars();
                let ctx: Vec<(String, Binding)> = fv
                    .first
                    .iter()
                    .chain(fv.second.iter())
                    .filter_map(|n| lookup(scope, n).map(|b| (n.clone(), b.clone())))
                    .collect();
                let key = (f.clone(), ctx);
                if let Some(n) = self.memo.get(&key) {
                    return Ok(n.clone());
                }
                Some(key)
            }
            _ => None,
        };
        let node = match f {
            Formula::Less(a, b) => {
                let (x, y) = (self.first_order(scope, a)?, self.first_order(scope, b)?);
                if x == y {
                    Node::constant(false)
                } else {
                    less_atom(x, y)
                }
            }
            Formula::Equal(a, b) => {
                let (x, y) = (self.first_order(scope, a)?, self.first_order(scope, b)?);
                if x == y {
                    Node::constant(true)
                } else {
                    equal_atom(x, y)
                }
            }
            Formula::Member(t, s) => {
                let x = self.first_order(scope, t)?;
                match self.var(scope, s)? {
                    Binding::Var(v) => member_atom(x, v),
                    Binding::Param(p) => self.clock(x, p),
                }
            }
            Formula::Not(g) => {
                let inner = self.compile(g, scope)?;
                self.negate(inner)?
            }
            Formula::And(..) | Formula::Exists(..) => {
                let mut vars = Vec::new();
                let mut parts = Vec::new();
                self.flatten(f, scope, &mut vars, &mut parts)?;
                let nodes = parts
                    .into_iter()
                    .map(|(g, mut sc)| self.compile(&g, &mut sc))
                    .collect::<Result<Vec<_>>>()?;
                self.eliminate(vars, nodes)?
            }
        };
        if let Some(key) = key {
            self.memo.insert(key, node.clone());
        }
        Ok(node)
    }

    /// Gather a block of nested conjunctions and existentials. Each bound
    /// variable receives a fresh id; conjuncts keep their own scope.
    fn flatten(
        &mut self,
        f: &Formula,
        scope: &mut Scope,
        vars: &mut Vec<VarId>,
        parts: &mut Vec<(Formula, Scope)>,
    ) -> Result<()> {
        match f {
            Formula::And(a, b) => {
                self.flatten(a, scope, vars, parts)?;
                self.flatten(b, scope, vars, parts)
            }
            Formula::Exists(v, sort, g) => {
                let id = self.fresh(*sort);
                vars.push(id);
                scope.push((v.clone(), Binding::Var(id)));
                let r = self.flatten(g, scope, vars, parts);
                scope.pop();
                r
            }
            other => {
                parts.push((other.clone(), scope.clone()));
                Ok(())
            }
        }
    }

    fn negate(&mut self, n: Node) -> Result<Node> {
        if let Some(b) = n.as_constant() {
            return Ok(Node::constant(!b));
        }
        let d = match n.aut {
            Aut::Det(d) => d,
            Aut::Nondet(a) => determinize_with(&a, self.cfg.state_cap)?,
        };
        Ok(Node {
            vars: n.vars,
            aut: Aut::Det(d.complement()),
        }
        .settle())
    }

    fn conjoin(&mut self, a: Node, b: Node) -> Result<Node> {
        match (a.as_constant(), b.as_constant()) {
            (Some(false), _) | (_, Some(false)) => return Ok(Node::constant(false)),
            (Some(true), _) => return Ok(b),
            (_, Some(true)) => return Ok(a),
            _ => {}
        }
        let vars = merge(&a.vars, &b.vars);
        self.check_width(vars.len())?;
        let a = self.cheap_det(a)?;
        let b = self.cheap_det(b)?;
        // Deterministic products exist when one side has a simple acceptance
        // condition: 0 weak, 1 co-Büchi, 2 Büchi.
        let rank = |n: &Node| match &n.aut {
            Aut::Det(d) if d.is_weak() => Some(0),
            Aut::Det(d) if d.is_co_buchi() => Some(1),
            Aut::Det(d) if d.is_buchi() => Some(2),
            Aut::Det(_) => Some(3),
            Aut::Nondet(_) => None,
        };
        let aut = match (rank(&a), rank(&b)) {
            (Some(ra), Some(rb)) if ra.min(rb) < 3 => {
                let (other, simple, r) = if rb <= ra { (&a, &b, rb) } else { (&b, &a, ra) };
                let x = other.aligned_dpa(&vars, self.cfg.state_cap)?;
                let y = simple.aligned_dpa(&vars, self.cfg.state_cap)?;
                let product = match r {
                    0 => x.product_weak(&y)?,
                    1 => x.product_co_buchi(&y)?,
                    _ => x.product_buchi(&y)?,
                };
                Aut::Det(product.simplify())
            }
            _ => {
                let x = a.aligned_nba(&vars)?;
                let y = b.aligned_nba(&vars)?;
                Aut::Nondet(x.intersect(&y)?.reduce())
            }
        };
        Ok(Node { vars, aut }.settle())
    }

    /// Determinize small automata that avoid Safra trees, so conjunctions
    /// can use deterministic products.
    fn cheap_det(&self, n: Node) -> Result<Node> {
        match &n.aut {
            Aut::Nondet(a)
                if a.num_states() <= CHEAP_DET_STATES && has_cheap_determinization(a) =>
            {
                Ok(Node {
                    aut: Aut::Det(determinize_with(a, self.cfg.state_cap)?),
                    vars: n.vars,
                })
            }
            _ => Ok(n),
        }
    }

    fn project(&mut self, n: Node, gone: &[VarId]) -> Result<Node> {
        if gone.is_empty() {
            return Ok(n);
        }
        let tracks: Vec<usize> = gone
            .iter()
            .map(|v| n.vars.binary_search(v).expect("projected variable present"))
            .collect();
        let nba = match &n.aut {
            Aut::Det(d) => d.to_nba(),
            Aut::Nondet(a) => a.clone(),
        };
        let vars = n
            .vars
            .iter()
            .copied()
            .filter(|v| !gone.contains(v))
            .collect();
        Ok(Node {
            vars,
            aut: Aut::Nondet(nba.project(&tracks)?.reduce()),
        }
        .settle())
    }

    /// Conjoin `nodes` and project away `block`, one variable at a time,
    /// always eliminating the variable whose factors span the fewest tracks.
    fn eliminate(&mut self, block: Vec<VarId>, nodes: Vec<Node>) -> Result<Node> {
        let mut nodes = nodes;
        for &v in &block {
            if self.sorts[v] == Sort::First {
                nodes.push(singleton(v));
            }
        }
        if nodes.iter().any(|n| n.as_constant() == Some(false)) {
            return Ok(Node::constant(false));
        }
        let mut pending: Vec<VarId> = block.clone();
        loop {
            pending.retain(|v| nodes.iter().any(|n| n.vars.contains(v)));
            let Some(&v) = pending.iter().min_by_key(|&&v| {
                let span = nodes
                    .iter()
                    .filter(|n| n.vars.contains(&v))
                    .fold(Vec::new(), |acc, n| merge(&acc, &n.vars));
                (span.len(), v)
            }) else {
                break;
            };
            let (mut touching, rest): (Vec<Node>, Vec<Node>) =
                nodes.into_iter().partition(|n| n.vars.contains(&v));
            nodes = rest;
            touching.sort_by_key(|n| (n.vars.len(), n.states()));
            let mut acc = touching.remove(0);
            for n in touching {
                acc = self.conjoin(acc, n)?;
                if acc.as_constant() == Some(false) {
                    return Ok(Node::constant(false));
                }
            }
            let gone: Vec<VarId> = acc
                .vars
                .iter()
                .copied()
                .filter(|u| pending.contains(u) && !nodes.iter().any(|n| n.vars.contains(u)))
                .collect();
            let projected = self.project(acc, &gone)?;
            if projected.as_constant() == Some(false) {
                return Ok(Node::constant(false));
            }
            nodes.push(projected);
        }
        nodes.sort_by_key(|n| (n.vars.len(), n.states()));
        let mut acc = Node::constant(true);
        for n in nodes {
            acc = self.conjoin(acc, n)?;
        }
        Ok(acc)
    }

    fn finish(&mut self, n: Node, width: usize) -> Result<Dpa> {
        let vars: Vec<VarId> = (0..width).collect();
        let d = match n.aut {
            Aut::Det(d) => d.simplify(),
            Aut::Nondet(a) => determinize_with(&a, self.cfg.state_cap)?,
        };
        let positions: Vec<usize> = n
            .vars
            .iter()
            .map(|v| vars.binary_search(v).unwrap())
            .collect();
        Ok(d.remap(width, &positions)?.simplify())
    }
}

impl Compiler {
    fn run(&self, params: Vec<Vec<bool>>, phase_next: Vec<usize>) -> Run<'_> {
        Run {
            cfg: self,
            sorts: Vec::new(),
            params,
            phase_next,
            memo: HashMap::new(),
        }
    }

    /// Automaton over the tracks `order` (track `i` is `order[i]`) accepting
    /// exactly the assignments that satisfy `f`. Position variables are
    /// constrained to singletons. Names in `order` that do not occur in `f`
    /// give unconstrained tracks.
    pub fn compile(&self, f: &Formula, order: &[&str]) -> Result<Dpa> {
        self.check_width(order.len())?;
        let fv = f.free_vars();
        let missing: Vec<String> = fv
            .first
            .iter()
            .chain(fv.second.iter())
            .filter(|n| !order.contains(&n.as_str()))
            .cloned()
            .collect();
        if !missing.is_empty() {
            return Err(Error::TrackAssignment {
                expected: order.iter().map(|s| s.to_string()).collect(),
                found: fv.first.iter().chain(fv.second.iter()).cloned().collect(),
            });
        }
        let mut run = self.run(Vec::new(), Vec::new());
        let mut scope: Scope = Vec::new();
        for name in order {
            let sort = if fv.first.contains(*name) {
                Sort::First
            } else {
                Sort::Second
            };
            let id = run.fresh(sort);
            scope.push((name.to_string(), Binding::Var(id)));
        }
        let mut node = run.compile(f, &mut scope)?;
        for (id, name) in order.iter().enumerate() {
            if fv.first.contains(*name) {
                node = run.conjoin(node, singleton(id))?;
            }
        }
        run.finish(node, order.len())
    }

    /// Truth of `f` when its free set variables are the given ω-words.
    pub fn model_check(&self, f: &Formula, params: &[(&str, &Lasso)]) -> Result<bool> {
        let fv = f.free_vars();
        if let Some(name) = fv.first.iter().next() {
            return Err(Error::UnboundParameter(name.clone()));
        }
        for name in &fv.second {
            if !params.iter().any(|(n, _)| n == name) {
                return Err(Error::UnboundParameter(name.clone()));
            }
        }
        let used: Vec<(&str, &Lasso)> = params
            .iter()
            .filter(|(n, _)| fv.second.contains(*n))
            .map(|&(n, w)| (n, w))
            .collect();
        let tracks: Vec<Lasso> = used.iter().map(|(_, w)| w.track(0)).collect();
        let refs: Vec<&Lasso> = tracks.iter().collect();
        let zipped = if refs.is_empty() {
            Lasso::empty_word()
        } else {
            Lasso::zip(&refs)
        };
        let span = zipped.span();
        let start = zipped.prefix.len();
        let phase_next = (0..span)
            .map(|i| if i + 1 < span { i + 1 } else { start })
            .collect();
        let bits = (0..used.len())
            .map(|j| (0..span).map(|i| zipped.bit_at(j, i)).collect())
            .collect();
        let mut run = self.run(bits, phase_next);
        let mut scope: Scope = used
            .iter()
            .enumerate()
            .map(|(j, (n, _))| (n.to_string(), Binding::Param(j)))
            .collect();
        let node = run.compile(f, &mut scope)?;
        Ok(node
            .as_constant()
            .expect("a sentence over instantiated parameters has no tracks"))
    }

    /// Same verdict as [`Compiler::model_check`], computed by compiling over
    /// parameter tracks and running the automaton on the zipped word.
    pub fn model_check_direct(&self, f: &Formula, params: &[(&str, &Lasso)]) -> Result<bool> {
        let names: Vec<&str> = params.iter().map(|(n, _)| *n).collect();
        let fv = f.free_vars();
        for n in fv.first.iter().chain(fv.second.iter()) {
            if !names.contains(&n.as_str()) {
                return Err(Error::UnboundParameter(n.clone()));
            }
        }
        let d = self.compile(f, &names)?;
        let tracks: Vec<Lasso> = params.iter().map(|(_, w)| w.track(0)).collect();
        let refs: Vec<&Lasso> = tracks.iter().collect();
        let w = if refs.is_empty() {
            Lasso::empty_word()
        } else {
            Lasso::zip(&refs)
        };
        d.accepts(&w)
    }

    fn check_width(&self, width: usize) -> Result<()> {
        if width > self.width_limit.min(MAX_WIDTH) {
            return Err(Error::WidthLimit {
                width,
                limit: self.width_limit.min(MAX_WIDTH),
            });
        }
        Ok(())
    }
}
