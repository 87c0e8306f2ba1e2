//! Fixtures shared by several test targets.
#![allow(dead_code)]

use church_core::gen;
use church_core::omega::{Dpa, Lasso};
use church_core::predicate::UpPredicate;
use rand::Rng;

/// Two-track word viewed as the pair (X, Y) with direct readings of the
/// properties in the golden corpus.
pub struct Pair<'a> {
    pub w: &'a Lasso,
}

impl Pair<'_> {
    fn x(&self, n: usize) -> bool {
        self.w.bit_at(0, n)
    }
    fn y(&self, n: usize) -> bool {
        self.w.bit_at(1, n)
    }
    /// Positions past which the word repeats with period `len`.
    fn start(&self) -> usize {
        self.w.prefix.len()
    }
    fn len(&self) -> usize {
        self.w.cycle.len()
    }
    /// Enough positions to see every pattern the corpus formulas look at.
    fn horizon(&self) -> usize {
        self.start() + 2 * self.len() + 3
    }
    fn all(&self, f: impl Fn(usize) -> bool) -> bool {
        (0..self.horizon()).all(f)
    }
    fn any(&self, f: impl Fn(usize) -> bool) -> bool {
        (0..self.horizon()).any(f)
    }
    fn inf_x(&self) -> bool {
        (self.start()..self.start() + self.len()).any(|n| self.x(n))
    }
    fn inf_y(&self) -> bool {
        (self.start()..self.start() + self.len()).any(|n| self.y(n))
    }
}

pub type Reading = fn(&Pair) -> bool;

/// Formulas over X and Y with their languages worked out by hand.
pub fn golden() -> Vec<(&'static str, Reading)> {
    vec![
        ("all t. in(X,t) <-> in(Y,t)", |p| {
            p.all(|n| p.x(n) == p.y(n))
        }),
        ("ex t. in(X,t)", |p| p.any(|n| p.x(n))),
        ("all t. ex s. t < s & in(X,s)", |p| p.inf_x()),
        ("ex d. all t. d < t -> ~in(X,t)", |p| !p.inf_x()),
        ("all t. in(X,t) -> in(Y,t+1)", |p| {
            p.all(|n| !p.x(n) || p.y(n + 1))
        }),
        ("in(X,0) & ~in(Y,0)", |p| p.x(0) && !p.y(0)),
        ("X sub Y", |p| p.all(|n| !p.x(n) || p.y(n))),
        ("all t. in(X,t) -> ex s. t < s & in(Y,s)", |p| {
            p.all(|n| !p.x(n) || (n + 1..=n + p.horizon()).any(|m| p.y(m)))
        }),
        ("all t. ~(in(X,t) & in(X,t+1))", |p| {
            p.all(|n| !(p.x(n) && p.x(n + 1)))
        }),
        ("all t. in(X,t) <-> ~in(X,t+1)", |p| {
            p.all(|n| p.x(n) != p.x(n + 1))
        }),
        ("ex t. in(X,t) & in(Y,t)", |p| p.any(|n| p.x(n) && p.y(n))),
        ("X = {1}", |p| p.all(|n| p.x(n) == (n == 1))),
        (
            "(all t. ex s. t < s & in(X,s)) <-> (all t. ex s. t < s & in(Y,s))",
            |p| p.inf_x() == p.inf_y(),
        ),
        ("all t. in(X,t) <-> in(X,t+2)", |p| {
            p.all(|n| p.x(n) == p.x(n + 2))
        }),
        ("ex t. in(X,t) & all s. t < s -> in(Y,s)", |p| {
            (0..p.start() + p.len()).any(|t| p.x(t) && (t + 1..t + 1 + p.horizon()).all(|s| p.y(s)))
        }),
        (
            "exset Z. in(Z,0) & (all t. in(Z,t) <-> ~in(Z,t+1)) & X sub Z",
            |p| p.all(|n| !p.x(n) || n % 2 == 0),
        ),
    ]
}

/// Small random specification automaton over (X, Y, P) and a parameter with
/// `|u| + |v| <= 3`.
pub fn instance<R: Rng>(r: &mut R, max_states: usize) -> (Dpa, UpPredicate) {
    let states = r.gen_range(1..=max_states);
    let a = gen::dpa(r, 3, states, 4);
    let len = r.gen_range(1..=3);
    let d = r.gen_range(0..len);
    let bits: Vec<bool> = (0..len).map(|_| r.gen_bool(0.5)).collect();
    (
        a,
        UpPredicate::new(bits[..d].to_vec(), bits[d..].to_vec()).unwrap(),
    )
}
