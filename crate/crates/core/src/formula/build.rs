use std::collections::HashSet;

use super::{Formula, Sort};

/// Fresh-name supply for building formulas without captures or shadowing.
#[derive(Clone, Debug, Default)]
pub struct Names {
    used: HashSet<String>,
}

impl Names {
    pub fn new() -> Self {
        Self::default()
    }

    /// A supply that avoids every name occurring in `f`.
    pub fn avoiding(f: &Formula) -> Self {
        Names { used: f.names() }
    }

    pub fn reserve(&mut self, name: &str) {
        self.used.insert(name.to_string());
    }

    pub fn reserve_all<'a>(&mut self, names: impl IntoIterator<Item = &'a str>) {
        for n in names {
            self.reserve(n);
        }
    }

    pub fn is_used(&self, name: &str) -> bool {
        self.used.contains(name)
    }

    pub fn fresh(&mut self, base: &str) -> String {
        let mut name = base.to_string();
        let mut k = 1;
        while self.used.contains(&name) {
            name = format!("{base}{k}");
            k += 1;
        }
        self.used.insert(name.clone());
        name
    }

    /// `t2` is the immediate successor of `t`.
    pub fn succ(&mut self, t: &str, t2: &str) -> Formula {
        let s = self.fresh("s");
        Formula::less(t, t2).and(
            Formula::exists(
                s.clone(),
                Sort::First,
                Formula::less(t, s.clone()).and(Formula::less(s, t2)),
            )
            .not(),
        )
    }

    /// `t` is position 0.
    pub fn first(&mut self, t: &str) -> Formula {
        let s = self.fresh("s");
        Formula::exists(s.clone(), Sort::First, Formula::less(s, t)).not()
    }

    /// `body(x)` where `x` names position `n`.
    pub fn at_position(
        &mut self,
        n: usize,
        body: impl FnOnce(&mut Names, &str) -> Formula,
    ) -> Formula {
        let vars: Vec<String> = (0..=n).map(|_| self.fresh("p")).collect();
        let mut f = body(self, &vars[n]);
        for i in (0..=n).rev() {
            let link = if i == 0 {
                self.first(&vars[0])
            } else {
                self.succ(&vars[i - 1], &vars[i])
            };
            f = Formula::exists(vars[i].clone(), Sort::First, link.and(f));
        }
        f
    }

    /// `body(x)` where `x` names the successor of `t` (`t+1`).
    pub fn at_next(&mut self, t: &str, body: impl FnOnce(&mut Names, &str) -> Formula) -> Formula {
        let x = self.fresh("s");
        let link = self.succ(t, &x);
        let inner = body(self, &x);
        Formula::exists(x, Sort::First, link.and(inner))
    }

    pub fn truth(&mut self) -> Formula {
        self.falsity().not()
    }

    pub fn falsity(&mut self) -> Formula {
        let t = self.fresh("t");
        Formula::exists(t.clone(), Sort::First, Formula::less(t.clone(), t))
    }

    pub fn conj(&mut self, parts: impl IntoIterator<Item = Formula>) -> Formula {
        let mut it = parts.into_iter();
        match it.next() {
            None => self.truth(),
            Some(first) => it.fold(first, Formula::and),
        }
    }

    pub fn disj(&mut self, parts: impl IntoIterator<Item = Formula>) -> Formula {
        let mut it = parts.into_iter();
        match it.next() {
            None => self.falsity(),
            Some(first) => it.fold(first, Formula::or),
        }
    }

    pub fn forall_first(
        &mut self,
        base: &str,
        body: impl FnOnce(&mut Names, &str) -> Formula,
    ) -> Formula {
        let t = self.fresh(base);
        let b = body(self, &t);
        Formula::forall(t, Sort::First, b)
    }

    pub fn exists_first(
        &mut self,
        base: &str,
        body: impl FnOnce(&mut Names, &str) -> Formula,
    ) -> Formula {
        let t = self.fresh(base);
        let b = body(self, &t);
        Formula::exists(t, Sort::First, b)
    }
}
