//! Ultimately periodic predicates on the naturals.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::formula::{Formula, Names};
use crate::omega::Lasso;
use crate::strategy::{run_on_lasso, CMachine};

/// The set `{n : bit n of prefix·period^ω is 1}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct UpPredicate {
    prefix: Vec<bool>,
    period: Vec<bool>,
}

impl UpPredicate {
    pub fn new(prefix: Vec<bool>, period: Vec<bool>) -> Result<Self> {
        if period.is_empty() {
            return Err(Error::malformed("predicate", "period must not be empty"));
        }
        Ok(UpPredicate { prefix, period })
    }

    pub fn prefix(&self) -> &[bool] {
        &self.prefix
    }

    pub fn period(&self) -> &[bool] {
        &self.period
    }

    pub fn bit_at(&self, n: usize) -> bool {
        if n < self.prefix.len() {
            self.prefix[n]
        } else {
            self.period[(n - self.prefix.len()) % self.period.len()]
        }
    }

    /// Shortest period, then shortest prefix.
    pub fn canonicalize(&self) -> UpPredicate {
        let v = &self.period;
        let k = (1..=v.len())
            .find(|&k| v.len().is_multiple_of(k) && (0..v.len()).all(|i| v[i] == v[i % k]))
            .unwrap();
        let mut period = v[..k].to_vec();
        let mut prefix = self.prefix.clone();
        // Rotate trailing prefix bits into the period while they match.
        while let Some(&last) = prefix.last() {
            if last != period[k - 1] {
                break;
            }
            prefix.pop();
            period.rotate_right(1);
        }
        UpPredicate { prefix, period }
    }

    pub fn to_lasso(&self) -> Lasso {
        Lasso::from_bits(&self.prefix, &self.period).expect("nonempty period")
    }

    pub fn from_lasso(w: &Lasso) -> Result<Self> {
        if w.width != 1 {
            return Err(Error::WidthMismatch {
                expected: 1,
                found: w.width,
            });
        }
        UpPredicate::new(
            w.prefix.iter().map(|&l| l == 1).collect(),
            w.cycle.iter().map(|&l| l == 1).collect(),
        )
    }

    /// Whether both denote the same set.
    pub fn same_set(&self, other: &UpPredicate) -> bool {
        self.canonicalize() == other.canonicalize()
    }
}

fn bits(s: &str) -> Option<Vec<bool>> {
    if s == "ε" {
        return Some(Vec::new());
    }
    s.chars()
        .map(|c| match c {
            '0' => Some(false),
            '1' => Some(true),
            _ => None,
        })
        .collect()
}

impl FromStr for UpPredicate {
    type Err = Error;

    /// `prefix;period` in bits, e.g. `01;10` or `;1`.
    fn from_str(s: &str) -> Result<Self> {
        let bad = || {
            Error::malformed(
                "predicate literal",
                format!("`{s}` is not of the form prefix;period"),
            )
        };
        let (u, v) = s.trim().split_once(';').ok_or_else(bad)?;
        UpPredicate::new(
            bits(u.trim()).ok_or_else(bad)?,
            bits(v.trim()).ok_or_else(bad)?,
        )
    }
}

impl fmt::Display for UpPredicate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &b in &self.prefix {
            f.write_str(if b { "1" } else { "0" })?;
        }
        f.write_str(";")?;
        for &b in &self.period {
            f.write_str(if b { "1" } else { "0" })?;
        }
        Ok(())
    }
}

/// Formula with the single free set variable `var` that holds exactly when
/// `var` denotes the set of `p`.
pub fn up_to_formula(p: &UpPredicate, var: &str) -> Formula {
    let p = p.canonicalize();
    let mut names = Names::new();
    names.reserve(var);
    let (d, k) = (p.prefix.len(), p.period.len());
    let literal = |b: bool, t: &str| {
        let m = Formula::member(t, var);
        if b {
            m
        } else {
            m.not()
        }
    };
    let mut parts = Vec::new();
    for n in 0..d + k {
        let b = p.bit_at(n);
        parts.push(names.at_position(n, |_, x| literal(b, x)));
    }
    // Beyond the prefix, membership repeats with the period.
    let periodic = names.forall_first("t", |names, t| {
        let step = shifted(names, t, k, &|_, x| Formula::member(x, var));
        let body = Formula::member(t, var).iff(step);
        if d == 0 {
            body
        } else {
            let late = names.at_position(d, |_, x| Formula::less(t, x).not());
            late.implies(body)
        }
    });
    parts.push(periodic);
    names.conj(parts)
}

/// `body(t + k)`.
fn shifted(
    names: &mut Names,
    t: &str,
    k: usize,
    body: &dyn Fn(&mut Names, &str) -> Formula,
) -> Formula {
    if k == 0 {
        return body(names, t);
    }
    names.at_next(t, |names, x| shifted(names, x, k - 1, body))
}

/// Read a parameter from a machine that is claimed to compute the shifted
/// parameter `X(t) ↔ P(t+1)` from `P`. The self-driven run feeds each output
/// back as the next input, starting from the first bit of `claimed`; a
/// repeated (state, bit) pair fixes the period. Returns the canonical
/// predicate, which must agree with `claimed`.
pub fn extract_period_from_machine(m: &CMachine, claimed: &UpPredicate) -> Result<UpPredicate> {
    let out = run_on_lasso(m, &claimed.to_lasso())?;
    let bound = out.span().max(claimed.prefix.len() + claimed.period.len())
        + out.cycle.len() * claimed.period.len()
        + 1;
    if let Some(position) = (0..bound).find(|&t| out.bit_at(0, t) != claimed.bit_at(t + 1)) {
        return Err(Error::Inconsistent { position });
    }
    let extracted = self_driven(m, claimed.bit_at(0));
    if !extracted.same_set(claimed) {
        return Err(Error::Inconsistent { position: 0 });
    }
    Ok(extracted)
}

/// The predicate traced by feeding the machine its own outputs, starting
/// with `first`.
pub fn self_driven(m: &CMachine, first: bool) -> UpPredicate {
    use crate::strategy::Operator;
    let mut seen = vec![[None; 2]; m.num_states()];
    let mut q = m.start();
    let mut a = first;
    let mut word = Vec::new();
    while seen[q][a as usize].is_none() {
        seen[q][a as usize] = Some(word.len());
        word.push(a);
        let (o, t) = m.step(q, a);
        q = t;
        a = o;
    }
    let i = seen[q][a as usize].unwrap();
    let period = word.split_off(i);
    // Only 2n (state, bit) pairs exist, so the repeat comes within 2n steps.
    debug_assert!(word.len() + period.len() <= 2 * m.num_states());
    UpPredicate {
        prefix: word,
        period,
    }
    .canonicalize()
}
