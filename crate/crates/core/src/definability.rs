//! Formulas over the naturals that define winning strategies, the operators
//! they induce, and the winner of a specification.
//!
//! A memoryless strategy is encoded by per-state sets: for Player I, `Z_q`
//! holds the positions `n` where the strategy picks X bit 1 at `(q, n)`; for
//! Player II, `Z_q_a` holds those where it answers X bit `a` at `(q, n)`
//! with Y bit 1. Runs of the automaton are encoded by binary state codes
//! over a few bound set variables.

use crate::arena::{build_arena, Phases, Vertex};
use crate::error::{Error, Result};
use crate::formula::{substitute_param, Formula, Names, Sort};
use crate::mso::Compiler;
use crate::omega::Dpa;
use crate::predicate::{up_to_formula, UpPredicate};
use crate::solver::{solve, Player};

/// Roles of the free set variables of a specification.
#[derive(Clone, Debug)]
pub struct Roles {
    pub input: String,
    pub output: String,
    pub param: String,
}

impl Roles {
    pub fn new(input: &str, output: &str, param: &str) -> Self {
        Roles {
            input: input.into(),
            output: output.into(),
            param: param.into(),
        }
    }
}

/// Strategy variable names for `a` and `player`: `Z_q` for I, `Z_q_a` for II
/// (index `2q + a`). Names clashing with `avoid` get a prime.
pub fn strategy_vars(a: &Dpa, player: Player, avoid: &[&str]) -> Vec<String> {
    let base = |s: String| {
        let mut s = s;
        while avoid.contains(&s.as_str()) {
            s.push('\'');
        }
        s
    };
    (0..a.num_states())
        .flat_map(|q| match player {
            Player::I => vec![base(format!("Z_{q}"))],
            Player::II => vec![base(format!("Z_{q}_0")), base(format!("Z_{q}_1"))],
        })
        .collect()
}

/// Builder for formulas about runs of one automaton.
struct RunFormulas<'a> {
    a: &'a Dpa,
    names: Names,
    /// State-code bit variables.
    code: Vec<String>,
    param: String,
}

fn literal(f: Formula, positive: bool) -> Formula {
    if positive {
        f
    } else {
        f.not()
    }
}

impl<'a> RunFormulas<'a> {
    fn new(a: &'a Dpa, reserved: &[&str], param: &str) -> Self {
        let mut names = Names::new();
        names.reserve_all(reserved.iter().copied());
        names.reserve(param);
        let bits = usize::BITS - (a.num_states().max(2) - 1).leading_zeros();
        let code = (0..bits).map(|_| names.fresh("R")).collect();
        RunFormulas {
            a,
            names,
            code,
            param: param.to_string(),
        }
    }

    /// The run is in state `q` at position `t`.
    fn state(&self, q: usize, t: &str) -> Formula {
        let mut f: Option<Formula> = None;
        for (i, r) in self.code.iter().enumerate() {
            let lit = literal(Formula::member(t, r.clone()), q >> i & 1 == 1);
            f = Some(match f {
                None => lit,
                Some(g) => g.and(lit),
            });
        }
        f.unwrap()
    }

    fn bit(&self, set: &str, t: &str, value: bool) -> Formula {
        literal(Formula::member(t, set), value)
    }

    fn initial(&mut self) -> Formula {
        let mut names = std::mem::take(&mut self.names);
        let f = names.at_position(0, |_, t| self.state(self.a.init(), t));
        self.names = names;
        f
    }

    /// `∀t. state_q(t) → body(t)`.
    fn in_state(&mut self, q: usize, body: impl FnOnce(&str) -> Formula) -> Formula {
        let mut names = std::mem::take(&mut self.names);
        let f = names.forall_first("t", |_, t| self.state(q, t).implies(body(t)));
        self.names = names;
        f
    }

    /// In state `q` at `t`, the successor position carries the state reached
    /// on the letter given by the bit sources.
    fn transition(
        &mut self,
        q: usize,
        x: &dyn Fn(&str, bool) -> Formula,
        y: &dyn Fn(&str, bool) -> Formula,
    ) -> Formula {
        let mut names = std::mem::take(&mut self.names);
        let f = names.forall_first("t", |names, t| {
            let step = names.at_next(t, |names, s| {
                let mut cases = Vec::new();
                for xb in [false, true] {
                    for yb in [false, true] {
                        for c in [false, true] {
                            let target = self.a.next(q, crate::arena::letter(xb, yb, c));
                            let guard = x(t, xb).and(y(t, yb)).and(self.bit(&self.param, t, c));
                            cases.push(guard.implies(self.state(target, s)));
                        }
                    }
                }
                names.conj(cases)
            });
            self.state(q, t).implies(step)
        });
        self.names = names;
        f
    }

    fn colored(&mut self, color: u32, t: &str) -> Formula {
        let states: Vec<usize> = (0..self.a.num_states())
            .filter(|&q| self.a.color(q) == color)
            .collect();
        let parts: Vec<Formula> = states.iter().map(|&q| self.state(q, t)).collect();
        self.names.disj(parts)
    }

    /// Color `c` occurs at infinitely many positions of the run.
    fn infinitely(&mut self, c: u32) -> Formula {
        let t = self.names.fresh("t");
        let s = self.names.fresh("s");
        let body = Formula::less(t.clone(), s.clone()).and(self.colored(c, &s));
        Formula::forall(t, Sort::First, Formula::exists(s, Sort::First, body))
    }

    /// The least color occurring infinitely often is even.
    fn even(&mut self) -> Formula {
        let max = self.a.max_color();
        let mut options = Vec::new();
        for c in (0..=max).step_by(2) {
            let mut parts = vec![self.infinitely(c)];
            for j in 0..c {
                parts.push(self.infinitely(j).not());
            }
            options.push(self.names.conj(parts));
        }
        self.names.disj(options)
    }

    fn exists_code(&self, body: Formula) -> Formula {
        self.code
            .iter()
            .rev()
            .fold(body, |f, r| Formula::exists(r.clone(), Sort::Second, f))
    }
}

/// WinSt: the strategy encoded by the free variables `strategy_vars(a,
/// player)` wins the game of `a` (tracks X, Y, P) under the parameter `param`.
pub fn emit_winst(a: &Dpa, player: Player, param: &str) -> Result<Formula> {
    check_tracks(a)?;
    let z = strategy_vars(a, player, &[param]);
    let reserved: Vec<&str> = z.iter().map(String::as_str).collect();
    let mut run = RunFormulas::new(a, &reserved, param);
    let other = run.names.fresh(match player {
        Player::I => "Y",
        Player::II => "X",
    });
    let mut parts = vec![run.initial()];
    for q in 0..a.num_states() {
        let trans = match player {
            Player::I => {
                let zq = z[q].clone();
                let other = other.clone();
                run.transition(
                    q,
                    &move |t, b| literal(Formula::member(t, zq.clone()), b),
                    &move |t, b| literal(Formula::member(t, other.clone()), b),
                )
            }
            Player::II => {
                let (z0, z1) = (z[2 * q].clone(), z[2 * q + 1].clone());
                let other = other.clone();
                let other2 = other.clone();
                run.transition(
                    q,
                    &move |t, b| literal(Formula::member(t, other.clone()), b),
                    &move |t, b| {
                        // Y bit is the strategy's answer to the current X bit.
                        let answer = Formula::member(t, other2.clone())
                            .and(Formula::member(t, z1.clone()))
                            .or(Formula::member(t, other2.clone())
                                .not()
                                .and(Formula::member(t, z0.clone())));
                        literal(answer, b)
                    },
                )
            }
        };
        parts.push(trans);
    }
    let runs = run.names.conj(parts);
    let good = match player {
        Player::I => run.even().not(),
        Player::II => run.even(),
    };
    // Every run consistent with the strategy is won: no opponent sequence
    // and run violate it.
    let bad = run.exists_code(runs.and(good.not()));
    Ok(Formula::exists(other, Sort::Second, bad).not())
}

/// op: the operator induced by the encoded strategy maps the opponent's
/// sequence to the player's sequence (Y = F(X) for II, X = F(Y) for I).
pub fn emit_op_formula(a: &Dpa, player: Player, roles: &Roles) -> Result<Formula> {
    check_tracks(a)?;
    let z = strategy_vars(a, player, &[&roles.input, &roles.output, &roles.param]);
    let mut reserved: Vec<&str> = z.iter().map(String::as_str).collect();
    reserved.extend([roles.input.as_str(), roles.output.as_str()]);
    let mut run = RunFormulas::new(a, &reserved, &roles.param);
    let (xv, yv) = (roles.input.clone(), roles.output.clone());
    let mut parts = vec![run.initial()];
    for q in 0..a.num_states() {
        let (x1, y1) = (xv.clone(), yv.clone());
        parts.push(run.transition(
            q,
            &move |t, b| literal(Formula::member(t, x1.clone()), b),
            &move |t, b| literal(Formula::member(t, y1.clone()), b),
        ));
        // The player's bit at a position in state q is read off the encoding.
        let own = match player {
            Player::I => {
                let zq = z[q].clone();
                let xv = xv.clone();
                run.in_state(q, |t| Formula::member(t, xv).iff(Formula::member(t, zq)))
            }
            Player::II => {
                let (z0, z1) = (z[2 * q].clone(), z[2 * q + 1].clone());
                let (xv, yv) = (xv.clone(), yv.clone());
                run.in_state(q, |t| {
                    let answer = Formula::member(t, xv.clone())
                        .and(Formula::member(t, z1))
                        .or(Formula::member(t, xv).not().and(Formula::member(t, z0)));
                    Formula::member(t, yv).iff(answer)
                })
            }
        };
        parts.push(own);
    }
    let body = run.names.conj(parts);
    Ok(run.exists_code(body))
}

fn check_tracks(a: &Dpa) -> Result<()> {
    if a.width() != 3 {
        return Err(Error::WidthMismatch {
            expected: 3,
            found: a.width(),
        });
    }
    Ok(())
}

/// The automaton of `phi` over (input, output, param) after renaming the
/// parameter to a fresh variable.
pub fn spec_automaton(phi: &Formula, roles: &Roles, compiler: &Compiler) -> Result<Dpa> {
    let mut names = Names::avoiding(phi);
    names.reserve_all([
        roles.input.as_str(),
        roles.output.as_str(),
        roles.param.as_str(),
    ]);
    let fresh = names.fresh("Z");
    let renamed = substitute_param(phi, &roles.param, &fresh)?;
    compiler.compile(&renamed, &[&roles.input, &roles.output, &fresh])
}

/// WIN^II(P): Player I has no memoryless winning strategy, i.e. Player II
/// wins the game of `phi` for the parameter value.
pub fn emit_win_sentence(phi: &Formula, roles: &Roles, compiler: &Compiler) -> Result<Formula> {
    let a = spec_automaton(phi, roles, compiler)?;
    let winst = emit_winst(&a, Player::I, &roles.param)?;
    let z = strategy_vars(&a, Player::I, &[&roles.param]);
    let closed = z
        .iter()
        .rev()
        .fold(winst, |f, v| Formula::exists(v.clone(), Sort::Second, f));
    Ok(closed.not())
}

/// Encoding sets of the solver's strategy for the winner of `a` under `p`.
pub fn encode_strategy(a: &Dpa, p: &UpPredicate) -> Result<(Player, Vec<UpPredicate>)> {
    let g = build_arena(a, p)?;
    let s = solve(&g);
    let winner = s.winner[g.init];
    let phases = Phases::new(&p.canonicalize());
    let per_vertex = a.num_states() * if winner == Player::II { 2 } else { 1 };
    let mut bits = vec![vec![false; phases.span()]; per_vertex];
    for (v, vx) in g.vertex.iter().enumerate() {
        let Some(choice) = s.choice[v] else { continue };
        match (*vx, winner) {
            (Vertex::Choose { q, phase }, Player::I) => bits[q][phase] = choice == 1,
            (Vertex::Respond { q, x, phase }, Player::II) => {
                bits[2 * q + x as usize][phase] = choice == 1
            }
            _ => {}
        }
    }
    let d = p.canonicalize().prefix().len();
    let sets = bits
        .into_iter()
        .map(|b| UpPredicate::new(b[..d].to_vec(), b[d..].to_vec()).map(|u| u.canonicalize()))
        .collect::<Result<_>>()?;
    Ok((winner, sets))
}

/// St(X, Y, P): the graph of the winner's operator for the parameter value
/// `p`, with the strategy sets pinned by their periodic definitions.
pub fn emit_strategy_formula(
    phi: &Formula,
    roles: &Roles,
    p: &UpPredicate,
    compiler: &Compiler,
) -> Result<(Player, Formula)> {
    let a = spec_automaton(phi, roles, compiler)?;
    let (winner, sets) = encode_strategy(&a, p)?;
    let op = emit_op_formula(&a, winner, roles)?;
    let z = strategy_vars(&a, winner, &[&roles.input, &roles.output, &roles.param]);
    let mut body = op;
    for (v, w) in z.iter().zip(&sets).rev() {
        body = up_to_formula(w, v).and(body);
    }
    let f = z
        .iter()
        .rev()
        .fold(body, |f, v| Formula::exists(v.clone(), Sort::Second, f));
    Ok((winner, f))
}
