//! Monadic second-order formulas over the natural numbers with order.
//!
//! The core syntax keeps only atoms, negation, conjunction and existential
//! quantification; everything else is surface sugar handled by the parser
//! and the builder helpers.

mod build;
mod parse;
mod print;

use std::collections::{BTreeSet, HashSet};

pub use build::Names;
pub use parse::{parse, parse_with_macros, Macros};
pub use print::{print, print_core};

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Sort {
    /// A position.
    First,
    /// A set of positions.
    Second,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Formula {
    Less(String, String),
    Equal(String, String),
    /// Position (first) belongs to set (second).
    Member(String, String),
    Not(Box<Formula>),
    And(Box<Formula>, Box<Formula>),
    Exists(String, Sort, Box<Formula>),
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct FreeVars {
    pub first: BTreeSet<String>,
    pub second: BTreeSet<String>,
}

impl Formula {
    pub fn less(a: impl Into<String>, b: impl Into<String>) -> Self {
        Formula::Less(a.into(), b.into())
    }

    pub fn equal(a: impl Into<String>, b: impl Into<String>) -> Self {
        Formula::Equal(a.into(), b.into())
    }

    pub fn member(t: impl Into<String>, set: impl Into<String>) -> Self {
        Formula::Member(t.into(), set.into())
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(self) -> Self {
        Formula::Not(Box::new(self))
    }

    pub fn and(self, other: Formula) -> Self {
        Formula::And(Box::new(self), Box::new(other))
    }

    pub fn or(self, other: Formula) -> Self {
        self.not().and(other.not()).not()
    }

    pub fn implies(self, other: Formula) -> Self {
        self.and(other.not()).not()
    }

    pub fn iff(self, other: Formula) -> Self {
        self.clone().implies(other.clone()).and(other.implies(self))
    }

    pub fn exists(var: impl Into<String>, sort: Sort, body: Formula) -> Self {
        Formula::Exists(var.into(), sort, Box::new(body))
    }

    pub fn forall(var: impl Into<String>, sort: Sort, body: Formula) -> Self {
        Formula::exists(var, sort, body.not()).not()
    }

    pub fn free_vars(&self) -> FreeVars {
        fn go(f: &Formula, bound: &mut Vec<String>, out: &mut FreeVars) {
            let mut note = |name: &String, sort: Sort, bound: &Vec<String>| {
                if !bound.contains(name) {
                    match sort {
                        Sort::First => out.first.insert(name.clone()),
                        Sort::Second => out.second.insert(name.clone()),
                    };
                }
            };
            match f {
                Formula::Less(a, b) | Formula::Equal(a, b) => {
                    note(a, Sort::First, bound);
                    note(b, Sort::First, bound);
                }
                Formula::Member(t, s) => {
                    note(t, Sort::First, bound);
                    note(s, Sort::Second, bound);
                }
                Formula::Not(g) => go(g, bound, out),
                Formula::And(g, h) => {
                    go(g, bound, out);
                    go(h, bound, out);
                }
                Formula::Exists(v, _, g) => {
                    bound.push(v.clone());
                    go(g, bound, out);
                    bound.pop();
                }
            }
        }
        let mut out = FreeVars::default();
        go(self, &mut Vec::new(), &mut out);
        out
    }

    /// Every identifier occurring in the formula, free or bound.
    pub fn names(&self) -> HashSet<String> {
        let mut out = HashSet::new();
        self.visit_names(&mut |n| {
            out.insert(n.to_string());
        });
        out
    }

    fn visit_names(&self, f: &mut impl FnMut(&str)) {
        match self {
            Formula::Less(a, b) | Formula::Equal(a, b) | Formula::Member(a, b) => {
                f(a);
                f(b);
            }
            Formula::Not(g) => g.visit_names(f),
            Formula::And(g, h) => {
                g.visit_names(f);
                h.visit_names(f);
            }
            Formula::Exists(v, _, g) => {
                f(v);
                g.visit_names(f);
            }
        }
    }

    /// Rename free occurrences of `from` to `to`. The caller guarantees `to`
    /// is not captured by a binder.
    pub fn rename_free(&self, from: &str, to: &str) -> Formula {
        let swap = |n: &String| if n == from { to.to_string() } else { n.clone() };
        match self {
            Formula::Less(a, b) => Formula::Less(swap(a), swap(b)),
            Formula::Equal(a, b) => Formula::Equal(swap(a), swap(b)),
            Formula::Member(a, b) => Formula::Member(swap(a), swap(b)),
            Formula::Not(g) => g.rename_free(from, to).not(),
            Formula::And(g, h) => g.rename_free(from, to).and(h.rename_free(from, to)),
            Formula::Exists(v, s, g) => {
                if v == from {
                    self.clone()
                } else {
                    Formula::exists(v.clone(), *s, g.rename_free(from, to))
                }
            }
        }
    }

    /// Number of nodes.
    pub fn size(&self) -> usize {
        match self {
            Formula::Less(..) | Formula::Equal(..) | Formula::Member(..) => 1,
            Formula::Not(g) | Formula::Exists(_, _, g) => 1 + g.size(),
            Formula::And(g, h) => 1 + g.size() + h.size(),
        }
    }

    /// Whether some binder re-binds a name already bound above it.
    pub fn has_shadowing(&self) -> bool {
        fn go(f: &Formula, bound: &mut Vec<String>) -> bool {
            match f {
                Formula::Less(..) | Formula::Equal(..) | Formula::Member(..) => false,
                Formula::Not(g) => go(g, bound),
                Formula::And(g, h) => go(g, bound) || go(h, bound),
                Formula::Exists(v, _, g) => {
                    if bound.contains(v) {
                        return true;
                    }
                    bound.push(v.clone());
                    let r = go(g, bound);
                    bound.pop();
                    r
                }
            }
        }
        go(self, &mut Vec::new())
    }
}

/// Replace the free set variable `param` by the fresh set variable `fresh`.
pub fn substitute_param(f: &Formula, param: &str, fresh: &str) -> Result<Formula> {
    if f.names().contains(fresh) {
        return Err(Error::NameClash(fresh.to_string()));
    }
    Ok(f.rename_free(param, fresh))
}

impl std::fmt::Display for Formula {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&print(self))
    }
}
