//! Synthesis specification files.
//!
//! ```text
//! # comment
//! define B = ex t. in(P, t)
//! formula: (B -> Y = {0}) & (~B -> X = {})
//! input: X
//! output: Y
//! param P = 1;0
//! cap: 200000
//! seed: 7
//! ```
//!
//! Lines indented with whitespace continue the previous `formula:` or
//! `define` line.

use std::collections::BTreeSet;

use crate::error::{Error, Pos, Result};
use crate::formula::{parse_with_macros, Formula, Macros};
use crate::mso::Compiler;
use crate::omega::Dpa;
use crate::predicate::UpPredicate;

#[derive(Clone, Debug)]
pub struct SpecFile {
    pub formula: Formula,
    pub input: String,
    pub output: String,
    pub param: Option<(String, UpPredicate)>,
    pub state_cap: Option<usize>,
    pub seed: Option<u64>,
}

/// Name used for the parameter track when the file declares none.
const NO_PARAM: &str = "_P";

struct Entry {
    key: String,
    value: String,
    pos: Pos,
}

fn entries(text: &str) -> Result<Vec<Entry>> {
    let mut out: Vec<Entry> = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap();
        if line.trim().is_empty() {
            continue;
        }
        let ln = i + 1;
        if line.starts_with(char::is_whitespace) {
            match out.last_mut() {
                Some(e) if e.key == "formula" || e.key.starts_with("define ") => {
                    e.value.push('\n');
                    e.value.push_str(line);
                    continue;
                }
                _ => {
                    return Err(Error::Syntax {
                        pos: Pos { line: ln, col: 1 },
                        msg: "continuation line without a formula".into(),
                    })
                }
            }
        }
        let (key, value, col) = if let Some(rest) = line.strip_prefix("define ") {
            let (name, body) = rest.split_once('=').ok_or_else(|| Error::Syntax {
                pos: Pos { line: ln, col: 1 },
                msg: "expected `define NAME = formula`".into(),
            })?;
            let col = line.len() - body.len() + 1;
            (format!("define {}", name.trim()), body.to_string(), col)
        } else if let Some(rest) = line.strip_prefix("param ") {
            ("param".to_string(), rest.to_string(), 7)
        } else {
            let (k, v) = line.split_once(':').ok_or_else(|| Error::Syntax {
                pos: Pos { line: ln, col: 1 },
                msg: format!("unrecognized line `{}`", line.trim()),
            })?;
            (k.trim().to_string(), v.to_string(), k.len() + 2)
        };
        out.push(Entry {
            key,
            value,
            pos: Pos { line: ln, col },
        });
    }
    Ok(out)
}

impl SpecFile {
    pub fn parse(text: &str) -> Result<SpecFile> {
        let mut macros = Macros::new();
        let mut formula = None;
        let mut input = None;
        let mut output = None;
        let mut param: Option<(String, UpPredicate)> = None;
        let mut state_cap = None;
        let mut seed = None;
        let syntax = |pos: Pos, msg: String| Error::Syntax { pos, msg };
        for e in entries(text)? {
            let value = e.value.trim();
            match e.key.as_str() {
                k if k.starts_with("define ") => {
                    macros.define(&k["define ".len()..], &e.value, e.pos)?;
                }
                "formula" => {
                    if formula.is_some() {
                        return Err(syntax(e.pos, "more than one formula".into()));
                    }
                    formula = Some((e.value.clone(), e.pos));
                }
                "input" | "output" => {
                    let slot = if e.key == "input" {
                        &mut input
                    } else {
                        &mut output
                    };
                    if slot.is_some() {
                        return Err(Error::RoleConflict {
                            name: value.to_string(),
                            msg: format!("more than one {} declared", e.key),
                        });
                    }
                    *slot = Some(value.to_string());
                }
                "param" => {
                    let (name, lit) = value.split_once('=').ok_or_else(|| {
                        syntax(e.pos, "expected `param NAME = prefix;period`".into())
                    })?;
                    if param.is_some() {
                        return Err(Error::RoleConflict {
                            name: name.trim().to_string(),
                            msg: "only one parameter is supported".into(),
                        });
                    }
                    param = Some((name.trim().to_string(), lit.parse()?));
                }
                "cap" => {
                    state_cap = Some(
                        value
                            .parse()
                            .map_err(|_| syntax(e.pos, format!("bad cap `{value}`")))?,
                    )
                }
                "seed" => {
                    seed = Some(
                        value
                            .parse()
                            .map_err(|_| syntax(e.pos, format!("bad seed `{value}`")))?,
                    )
                }
                other => return Err(syntax(e.pos, format!("unknown key `{other}`"))),
            }
        }
        let (text, start) = formula
            .ok_or_else(|| syntax(Pos { line: 1, col: 1 }, "missing `formula:` line".into()))?;
        let input = input.ok_or_else(|| Error::RoleConflict {
            name: String::new(),
            msg: "no input declared".into(),
        })?;
        let output = output.ok_or_else(|| Error::RoleConflict {
            name: String::new(),
            msg: "no output declared".into(),
        })?;
        let mut roles = vec![input.as_str(), output.as_str()];
        if let Some((p, _)) = &param {
            roles.push(p);
        }
        let distinct: BTreeSet<&str> = roles.iter().copied().collect();
        if distinct.len() != roles.len() {
            return Err(Error::RoleConflict {
                name: roles[roles.len() - 1].to_string(),
                msg: "input, output and parameter must be distinct".into(),
            });
        }
        let (formula, positions) = parse_with_macros(&text, start, &macros, &roles)?;
        let fv = formula.free_vars();
        if let Some(name) = fv.first.iter().find(|n| roles.contains(&n.as_str())) {
            return Err(Error::RoleConflict {
                name: name.clone(),
                msg: "declared as a set but used as a position".into(),
            });
        }
        if let Some(name) = fv
            .first
            .iter()
            .chain(fv.second.iter())
            .find(|n| !roles.contains(&n.as_str()))
        {
            return Err(Error::Unbound {
                name: name.clone(),
                pos: positions.get(name).copied().unwrap_or(start),
            });
        }
        Ok(SpecFile {
            formula,
            input,
            output,
            param,
            state_cap,
            seed,
        })
    }

    pub fn param_name(&self) -> &str {
        self.param.as_ref().map_or(NO_PARAM, |(n, _)| n)
    }

    /// The parameter value; the empty set when none is declared.
    pub fn parameter(&self) -> UpPredicate {
        self.param
            .as_ref()
            .map_or_else(|| ";0".parse().unwrap(), |(_, p)| p.clone())
    }

    /// Track order X, Y, P.
    pub fn order(&self) -> [&str; 3] {
        [&self.input, &self.output, self.param_name()]
    }

    pub fn compiler(&self) -> Compiler {
        let mut c = Compiler::default();
        if let Some(cap) = self.state_cap {
            c.state_cap = cap;
        }
        c
    }

    pub fn compile(&self) -> Result<Dpa> {
        self.compiler().compile(&self.formula, &self.order())
    }
}
