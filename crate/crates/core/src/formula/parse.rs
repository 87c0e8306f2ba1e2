//! Surface syntax: lexer, parser, sort inference and desugaring into the core.
//!
//! ```text
//! expr   := imp ('<->' imp)*
//! imp    := or ('->' imp)?
//! or     := and ('|' and)*
//! and    := unary ('&' unary)*
//! unary  := '~' unary | quant | atom | '(' expr ')' | macro-name
//! quant  := ('all'|'ex'|'forall'|'exists'|'one'|'lone'|'allset'|'exset') name '.' expr
//! atom   := 'in' '(' set ',' term ')' | term rel term | set 'sub' set
//!         | set '=' '{' [num (',' num)*] '}'
//! rel    := '<' | '>' | '<=' | '>=' | '='
//! term   := (name | num) ('+' num)*
//! ```
//!
//! Quantifier bodies extend as far to the right as possible.

use std::collections::HashMap;

use super::{Formula, Names, Sort};
use crate::error::{Error, Pos, Result};

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Ident(String),
    Num(u64),
    LParen,
    RParen,
    LBrace,
    RBrace,
    Comma,
    Dot,
    Tilde,
    Amp,
    Bar,
    Arrow,
    DArrow,
    Lt,
    Gt,
    Le,
    Ge,
    Eq,
    Plus,
    Eof,
}

#[derive(Clone, Debug)]
struct Token {
    tok: Tok,
    pos: Pos,
}

fn syntax(pos: Pos, msg: impl Into<String>) -> Error {
    Error::Syntax {
        pos,
        msg: msg.into(),
    }
}

fn lex(text: &str, start: Pos) -> Result<Vec<Token>> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let (mut line, mut col) = (start.line, start.col);
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let pos = Pos { line, col };
        if c == '\n' {
            line += 1;
            col = 1;
            i += 1;
            continue;
        }
        if c.is_whitespace() {
            col += 1;
            i += 1;
            continue;
        }
        if c == '#' {
            while i < chars.len() && chars[i] != '\n' {
                i += 1;
                col += 1;
            }
            continue;
        }
        let two: String = chars[i..(i + 2).min(chars.len())].iter().collect();
        let three: String = chars[i..(i + 3).min(chars.len())].iter().collect();
        let (tok, len) = if c.is_ascii_alphabetic() || c == '_' {
            let mut j = i + 1;
            while j < chars.len()
                && (chars[j].is_ascii_alphanumeric() || chars[j] == '_' || chars[j] == '\'')
            {
                j += 1;
            }
            (Tok::Ident(chars[i..j].iter().collect()), j - i)
        } else if c.is_ascii_digit() {
            let mut j = i;
            while j < chars.len() && chars[j].is_ascii_digit() {
                j += 1;
            }
            let s: String = chars[i..j].iter().collect();
            let n = s
                .parse()
                .map_err(|_| syntax(pos, format!("number `{s}` is too large")))?;
            (Tok::Num(n), j - i)
        } else if three == "<->" {
            (Tok::DArrow, 3)
        } else if two == "->" {
            (Tok::Arrow, 2)
        } else if two == "<=" {
            (Tok::Le, 2)
        } else if two == ">=" {
            (Tok::Ge, 2)
        } else {
            let t = match c {
                '(' => Tok::LParen,
                ')' => Tok::RParen,
                '{' => Tok::LBrace,
                '}' => Tok::RBrace,
                ',' => Tok::Comma,
                '.' => Tok::Dot,
                '~' => Tok::Tilde,
                '&' => Tok::Amp,
                '|' => Tok::Bar,
                '<' => Tok::Lt,
                '>' => Tok::Gt,
                '=' => Tok::Eq,
                '+' => Tok::Plus,
                _ => return Err(syntax(pos, format!("unexpected character `{c}`"))),
            };
            (t, 1)
        };
        out.push(Token { tok, pos });
        i += len;
        col += len;
    }
    out.push(Token {
        tok: Tok::Eof,
        pos: Pos { line, col },
    });
    Ok(out)
}

#[derive(Clone, Debug)]
enum Base {
    Var(String),
    Num(u64),
}

#[derive(Clone, Debug)]
struct Term {
    base: Base,
    plus: u64,
    pos: Pos,
}

#[derive(Clone, Copy, Debug, PartialEq)]
enum Rel {
    Lt,
    Gt,
    Le,
    Ge,
    Eq,
}

#[derive(Clone, Copy, Debug, PartialEq)]
enum Op {
    And,
    Or,
    Imp,
    Iff,
}

#[derive(Clone, Copy, Debug, PartialEq)]
enum Quant {
    All,
    Ex,
    One,
    Lone,
    AllSet,
    ExSet,
}

impl Quant {
    fn sort(self) -> Sort {
        match self {
            Quant::AllSet | Quant::ExSet => Sort::Second,
            _ => Sort::First,
        }
    }
}

#[derive(Clone, Debug)]
enum Surf {
    Rel(Rel, Term, Term),
    In(String, Pos, Term),
    Sub(String, Pos, String, Pos),
    SetLit(String, Pos, Vec<u64>),
    Not(Box<Surf>),
    Bin(Op, Box<Surf>, Box<Surf>),
    Quant(Quant, String, Box<Surf>),
    Macro(String, Pos),
}

const KEYWORDS: &[&str] = &[
    "in", "sub", "all", "ex", "forall", "exists", "one", "lone", "allset", "exset",
];

struct Parser {
    toks: Vec<Token>,
    i: usize,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.i].tok
    }

    fn peek_at(&self, k: usize) -> &Tok {
        &self.toks[(self.i + k).min(self.toks.len() - 1)].tok
    }

    fn pos(&self) -> Pos {
        self.toks[self.i].pos
    }

    fn bump(&mut self) -> Token {
        let t = self.toks[self.i].clone();
        if self.i + 1 < self.toks.len() {
            self.i += 1;
        }
        t
    }

    fn expect(&mut self, tok: Tok, what: &str) -> Result<Pos> {
        if *self.peek() == tok {
            Ok(self.bump().pos)
        } else {
            Err(syntax(
                self.pos(),
                format!("expected {what}, found {}", describe(self.peek())),
            ))
        }
    }

    fn ident(&mut self, what: &str) -> Result<(String, Pos)> {
        match self.peek().clone() {
            Tok::Ident(s) if !KEYWORDS.contains(&s.as_str()) => {
                let p = self.bump().pos;
                Ok((s, p))
            }
            t => Err(syntax(
                self.pos(),
                format!("expected {what}, found {}", describe(&t)),
            )),
        }
    }

    fn expr(&mut self) -> Result<Surf> {
        let mut lhs = self.imp()?;
        while *self.peek() == Tok::DArrow {
            self.bump();
            let rhs = self.imp()?;
            lhs = Surf::Bin(Op::Iff, Box::new(lhs), Box::new(rhs));
        }
        Ok(lhs)
    }

    fn imp(&mut self) -> Result<Surf> {
        let lhs = self.or()?;
        if *self.peek() == Tok::Arrow {
            self.bump();
            let rhs = self.imp()?;
            return Ok(Surf::Bin(Op::Imp, Box::new(lhs), Box::new(rhs)));
        }
        Ok(lhs)
    }

    fn or(&mut self) -> Result<Surf> {
        let mut lhs = self.and()?;
        while *self.peek() == Tok::Bar {
            self.bump();
            let rhs = self.and()?;
            lhs = Surf::Bin(Op::Or, Box::new(lhs), Box::new(rhs));
        }
        Ok(lhs)
    }

    fn and(&mut self) -> Result<Surf> {
        let mut lhs = self.unary()?;
        while *self.peek() == Tok::Amp {
            self.bump();
            let rhs = self.unary()?;
            lhs = Surf::Bin(Op::And, Box::new(lhs), Box::new(rhs));
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<Surf> {
        match self.peek().clone() {
            Tok::Tilde => {
                self.bump();
                Ok(Surf::Not(Box::new(self.unary()?)))
            }
            Tok::LParen => {
                self.bump();
                let e = self.expr()?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(e)
            }
            Tok::Ident(k)
                if quantifier(&k).is_some() && matches!(self.peek_at(1), Tok::Ident(_)) =>
            {
                let q = quantifier(&k).unwrap();
                self.bump();
                let (name, _) = self.ident("a variable name")?;
                self.expect(Tok::Dot, "`.` after the quantified variable")?;
                let body = self.expr()?;
                Ok(Surf::Quant(q, name, Box::new(body)))
            }
            Tok::Ident(k) if k == "in" && *self.peek_at(1) == Tok::LParen => {
                self.bump();
                self.bump();
                let (set, spos) = self.ident("a set name")?;
                self.expect(Tok::Comma, "`,`")?;
                let t = self.term()?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(Surf::In(set, spos, t))
            }
            Tok::Ident(_) | Tok::Num(_) => self.atom(),
            t => Err(syntax(
                self.pos(),
                format!("expected a formula, found {}", describe(&t)),
            )),
        }
    }

    fn atom(&mut self) -> Result<Surf> {
        if let (Tok::Ident(name), next) = (self.peek().clone(), self.peek_at(1).clone()) {
            let is_rel = matches!(
                next,
                Tok::Lt | Tok::Gt | Tok::Le | Tok::Ge | Tok::Eq | Tok::Plus
            );
            if next == Tok::Ident("sub".into()) {
                let (a, apos) = self.ident("a set name")?;
                self.bump();
                let (b, bpos) = self.ident("a set name")?;
                return Ok(Surf::Sub(a, apos, b, bpos));
            }
            if next == Tok::Eq && *self.peek_at(2) == Tok::LBrace {
                let (a, apos) = self.ident("a set name")?;
                self.bump();
                self.bump();
                let mut elems = Vec::new();
                if *self.peek() != Tok::RBrace {
                    loop {
                        match self.peek().clone() {
                            Tok::Num(n) => {
                                self.bump();
                                elems.push(n);
                            }
                            t => {
                                return Err(syntax(
                                    self.pos(),
                                    format!("expected a number, found {}", describe(&t)),
                                ))
                            }
                        }
                        if *self.peek() == Tok::Comma {
                            self.bump();
                        } else {
                            break;
                        }
                    }
                }
                self.expect(Tok::RBrace, "`}`")?;
                return Ok(Surf::SetLit(a, apos, elems));
            }
            if !is_rel {
                if KEYWORDS.contains(&name.as_str()) {
                    return Err(syntax(self.pos(), format!("unexpected keyword `{name}`")));
                }
                let p = self.bump().pos;
                return Ok(Surf::Macro(name, p));
            }
        }
        let lhs = self.term()?;
        let rel = match self.peek() {
            Tok::Lt => Rel::Lt,
            Tok::Gt => Rel::Gt,
            Tok::Le => Rel::Le,
            Tok::Ge => Rel::Ge,
            Tok::Eq => Rel::Eq,
            t => {
                return Err(syntax(
                    self.pos(),
                    format!("expected a comparison, found {}", describe(t)),
                ))
            }
        };
        self.bump();
        let rhs = self.term()?;
        Ok(Surf::Rel(rel, lhs, rhs))
    }

    fn term(&mut self) -> Result<Term> {
        let pos = self.pos();
        let base = match self.peek().clone() {
            Tok::Num(n) => {
                self.bump();
                Base::Num(n)
            }
            Tok::Ident(_) => Base::Var(self.ident("a position variable")?.0),
            t => {
                return Err(syntax(
                    pos,
                    format!("expected a term, found {}", describe(&t)),
                ))
            }
        };
        let mut plus = 0u64;
        while *self.peek() == Tok::Plus {
            self.bump();
            match self.peek().clone() {
                Tok::Num(n) => {
                    self.bump();
                    plus += n;
                }
                t => {
                    return Err(syntax(
                        self.pos(),
                        format!("expected a number after `+`, found {}", describe(&t)),
                    ))
                }
            }
        }
        Ok(Term { base, plus, pos })
    }
}

fn quantifier(k: &str) -> Option<Quant> {
    Some(match k {
        "all" | "forall" => Quant::All,
        "ex" | "exists" => Quant::Ex,
        "one" => Quant::One,
        "lone" => Quant::Lone,
        "allset" => Quant::AllSet,
        "exset" => Quant::ExSet,
        _ => return None,
    })
}

fn describe(t: &Tok) -> String {
    match t {
        Tok::Ident(s) => format!("`{s}`"),
        Tok::Num(n) => format!("`{n}`"),
        Tok::Eof => "end of input".into(),
        other => format!("{other:?}").to_lowercase(),
    }
}

fn parse_surface(text: &str, start: Pos) -> Result<Surf> {
    let mut p = Parser {
        toks: lex(text, start)?,
        i: 0,
    };
    let e = p.expr()?;
    if *p.peek() != Tok::Eof {
        return Err(syntax(
            p.pos(),
            format!("unexpected {}", describe(p.peek())),
        ));
    }
    Ok(e)
}

/// Named formula abbreviations. Macro bodies are hygienic: their free names
/// always refer to free variables of the whole formula.
#[derive(Clone, Debug, Default)]
pub struct Macros {
    defs: HashMap<String, Surf>,
}

impl Macros {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn define(&mut self, name: &str, text: &str, pos: Pos) -> Result<()> {
        if KEYWORDS.contains(&name) {
            return Err(syntax(pos, format!("`{name}` is a keyword")));
        }
        let body = parse_surface(text, pos)?;
        self.defs.insert(name.to_string(), body);
        Ok(())
    }

    pub fn contains(&self, name: &str) -> bool {
        self.defs.contains_key(name)
    }
}

/// Parse and desugar a formula; free variables are allowed.
pub fn parse(text: &str) -> Result<Formula> {
    parse_with_macros(text, Pos { line: 1, col: 1 }, &Macros::new(), &[]).map(|(f, _)| f)
}

/// Parse with macro definitions; `sets` lists free names known to denote sets.
/// Also returns the first position of every free name.
pub fn parse_with_macros(
    text: &str,
    start: Pos,
    macros: &Macros,
    sets: &[&str],
) -> Result<(Formula, HashMap<String, Pos>)> {
    let surf = parse_surface(text, start)?;
    let mut names = Names::new();
    collect_names(&surf, macros, &mut names, &mut Vec::new());
    names.reserve_all(sets.iter().copied());

    let mut inf = Inference {
        macros,
        free: HashMap::new(),
        first_pos: HashMap::new(),
        links: Vec::new(),
        expanding: Vec::new(),
    };
    for s in sets {
        inf.free.insert(s.to_string(), Some(Sort::Second));
    }
    inf.walk(&surf, &mut Vec::new())?;
    inf.settle()?;
    let free_sorts: HashMap<String, Sort> = inf
        .free
        .iter()
        .filter(|(n, _)| inf.first_pos.contains_key(*n))
        .map(|(n, s)| (n.clone(), s.unwrap_or(Sort::First)))
        .collect();

    let mut low = Lower {
        macros,
        names,
        free: &free_sorts,
        path: Vec::new(),
    };
    let f = low.lower(&surf, &mut Vec::new())?;
    Ok((f, inf.first_pos))
}

fn collect_names(s: &Surf, macros: &Macros, names: &mut Names, seen: &mut Vec<String>) {
    let term = |t: &Term, names: &mut Names| {
        if let Base::Var(v) = &t.base {
            names.reserve(v);
        }
    };
    match s {
        Surf::Rel(_, a, b) => {
            term(a, names);
            term(b, names);
        }
        Surf::In(v, _, t) => {
            names.reserve(v);
            term(t, names);
        }
        Surf::Sub(a, _, b, _) => {
            names.reserve(a);
            names.reserve(b);
        }
        Surf::SetLit(a, _, _) => names.reserve(a),
        Surf::Not(g) => collect_names(g, macros, names, seen),
        Surf::Bin(_, g, h) => {
            collect_names(g, macros, names, seen);
            collect_names(h, macros, names, seen);
        }
        Surf::Quant(_, v, g) => {
            names.reserve(v);
            collect_names(g, macros, names, seen);
        }
        Surf::Macro(m, _) => {
            if !seen.contains(m) {
                if let Some(body) = macros.defs.get(m) {
                    seen.push(m.clone());
                    collect_names(body, macros, names, seen);
                    seen.pop();
                }
            }
        }
    }
}

/// What a name in scope refers to during inference.
#[derive(Clone, Debug)]
enum Ref {
    Bound(Sort),
    Free(String),
}

struct Inference<'a> {
    macros: &'a Macros,
    free: HashMap<String, Option<Sort>>,
    first_pos: HashMap<String, Pos>,
    /// Pairs of names compared with `=`; they must share a sort.
    links: Vec<(Ref, Ref, Pos)>,
    expanding: Vec<String>,
}

fn sort_name(s: Sort) -> &'static str {
    match s {
        Sort::First => "a position",
        Sort::Second => "a set",
    }
}

impl Inference<'_> {
    fn resolve(&mut self, name: &str, pos: Pos, env: &[(String, Sort)]) -> Ref {
        if let Some((_, s)) = env.iter().rev().find(|(n, _)| n == name) {
            return Ref::Bound(*s);
        }
        self.free.entry(name.to_string()).or_insert(None);
        self.first_pos.entry(name.to_string()).or_insert(pos);
        Ref::Free(name.to_string())
    }

    fn require(&mut self, r: &Ref, want: Sort, name: &str, pos: Pos) -> Result<()> {
        let have = match r {
            Ref::Bound(s) => Some(*s),
            Ref::Free(n) => {
                let slot = self.free.get_mut(n).unwrap();
                if slot.is_none() {
                    *slot = Some(want);
                }
                *slot
            }
        };
        if have != Some(want) {
            return Err(syntax(
                pos,
                format!(
                    "`{name}` is used as {} here but is {}",
                    sort_name(want),
                    sort_name(have.unwrap())
                ),
            ));
        }
        Ok(())
    }

    fn term(&mut self, t: &Term, env: &[(String, Sort)]) -> Result<Option<(Ref, String)>> {
        match &t.base {
            Base::Num(_) => Ok(None),
            Base::Var(v) => {
                let r = self.resolve(v, t.pos, env);
                if t.plus > 0 {
                    self.require(&r, Sort::First, v, t.pos)?;
                    Ok(None)
                } else {
                    Ok(Some((r, v.clone())))
                }
            }
        }
    }

    fn walk(&mut self, s: &Surf, env: &mut Vec<(String, Sort)>) -> Result<()> {
        match s {
            Surf::Rel(rel, a, b) => {
                let ra = self.term(a, env)?;
                let rb = self.term(b, env)?;
                let is_eq = *rel == Rel::Eq;
                match (ra, rb) {
                    (Some((x, _)), Some((y, _))) if is_eq => self.links.push((x, y, a.pos)),
                    (x, y) => {
                        for (r, t) in [(x, a), (y, b)] {
                            if let Some((r, n)) = r {
                                self.require(&r, Sort::First, &n, t.pos)?;
                            }
                        }
                    }
                }
            }
            Surf::In(v, pos, t) => {
                let r = self.resolve(v, *pos, env);
                self.require(&r, Sort::Second, v, *pos)?;
                if let Some((r, n)) = self.term(t, env)? {
                    self.require(&r, Sort::First, &n, t.pos)?;
                }
            }
            Surf::Sub(a, ap, b, bp) => {
                let r = self.resolve(a, *ap, env);
                self.require(&r, Sort::Second, a, *ap)?;
                let r = self.resolve(b, *bp, env);
                self.require(&r, Sort::Second, b, *bp)?;
            }
            Surf::SetLit(a, ap, _) => {
                let r = self.resolve(a, *ap, env);
                self.require(&r, Sort::Second, a, *ap)?;
            }
            Surf::Not(g) => self.walk(g, env)?,
            Surf::Bin(_, g, h) => {
                self.walk(g, env)?;
                self.walk(h, env)?;
            }
            Surf::Quant(q, v, g) => {
                env.push((v.clone(), q.sort()));
                self.walk(g, env)?;
                env.pop();
            }
            Surf::Macro(m, pos) => {
                let Some(body) = self.macros.defs.get(m) else {
                    return Err(Error::Unbound {
                        name: m.clone(),
                        pos: *pos,
                    });
                };
                if self.expanding.contains(m) {
                    return Err(syntax(*pos, format!("macro `{m}` refers to itself")));
                }
                self.expanding.push(m.clone());
                self.walk(body, &mut Vec::new())?;
                self.expanding.pop();
            }
        }
        Ok(())
    }

    /// Propagate sorts across `=` until nothing changes.
    fn settle(&mut self) -> Result<()> {
        loop {
            let mut changed = false;
            for (a, b, pos) in self.links.clone() {
                let sa = self.sort_of(&a);
                let sb = self.sort_of(&b);
                match (sa, sb) {
                    (Some(x), Some(y)) if x != y => {
                        return Err(syntax(pos, "`=` compares a position with a set"));
                    }
                    (Some(x), None) => changed |= self.assign(&b, x),
                    (None, Some(y)) => changed |= self.assign(&a, y),
                    _ => {}
                }
            }
            if !changed {
                return Ok(());
            }
        }
    }

    fn sort_of(&self, r: &Ref) -> Option<Sort> {
        match r {
            Ref::Bound(s) => Some(*s),
            Ref::Free(n) => self.free[n],
        }
    }

    fn assign(&mut self, r: &Ref, s: Sort) -> bool {
        if let Ref::Free(n) = r {
            let slot = self.free.get_mut(n).unwrap();
            if slot.is_none() {
                *slot = Some(s);
                return true;
            }
        }
        false
    }
}

struct Lower<'a> {
    macros: &'a Macros,
    names: Names,
    free: &'a HashMap<String, Sort>,
    /// Core binder names on the current path.
    path: Vec<String>,
}

type Env = Vec<(String, String, Sort)>;

impl Lower<'_> {
    fn lookup(&self, name: &str, env: &Env) -> (String, Sort) {
        if let Some((_, core, s)) = env.iter().rev().find(|(n, _, _)| n == name) {
            return (core.clone(), *s);
        }
        (name.to_string(), self.free[name])
    }

    /// Lower a term to a variable name plus the binders defining it.
    fn term(&mut self, t: &Term, env: &Env) -> (String, Vec<(String, Formula)>) {
        let mut binders = Vec::new();
        let mut cur = match &t.base {
            Base::Var(v) => self.lookup(v, env).0,
            Base::Num(n) => {
                let mut prev: Option<String> = None;
                for _ in 0..=*n {
                    let x = self.names.fresh("p");
                    let link = match &prev {
                        None => self.names.first(&x),
                        Some(p) => self.names.succ(p, &x),
                    };
                    binders.push((x.clone(), link));
                    prev = Some(x);
                }
                prev.unwrap()
            }
        };
        for _ in 0..t.plus {
            let x = self.names.fresh("s");
            let link = self.names.succ(&cur, &x);
            binders.push((x.clone(), link));
            cur = x;
        }
        (cur, binders)
    }

    fn wrap(mut f: Formula, binders: Vec<(String, Formula)>) -> Formula {
        for (x, link) in binders.into_iter().rev() {
            f = Formula::exists(x, Sort::First, link.and(f));
        }
        f
    }

    fn is_set(&self, t: &Term, env: &Env) -> bool {
        match &t.base {
            Base::Var(v) if t.plus == 0 => self.lookup(v, env).1 == Sort::Second,
            _ => false,
        }
    }

    fn set_name(&self, v: &str, env: &Env) -> String {
        self.lookup(v, env).0
    }

    fn lower(&mut self, s: &Surf, env: &mut Env) -> Result<Formula> {
        Ok(match s {
            Surf::Rel(Rel::Eq, a, b) if self.is_set(a, env) => {
                let (x, y) = match (&a.base, &b.base) {
                    (Base::Var(x), Base::Var(y)) => (self.set_name(x, env), self.set_name(y, env)),
                    _ => unreachable!("sort inference admits only set names here"),
                };
                self.names.forall_first("t", |_, t| {
                    Formula::member(t, x.clone()).iff(Formula::member(t, y.clone()))
                })
            }
            Surf::Rel(rel, a, b) => {
                let (x, mut bx) = self.term(a, env);
                let (y, by) = self.term(b, env);
                bx.extend(by);
                let atom = match rel {
                    Rel::Lt => Formula::less(x, y),
                    Rel::Gt => Formula::less(y, x),
                    Rel::Eq => Formula::equal(x, y),
                    Rel::Le => Formula::less(x.clone(), y.clone()).or(Formula::equal(x, y)),
                    Rel::Ge => Formula::less(y.clone(), x.clone()).or(Formula::equal(x, y)),
                };
                Self::wrap(atom, bx)
            }
            Surf::In(v, _, t) => {
                let set = self.set_name(v, env);
                let (x, bx) = self.term(t, env);
                Self::wrap(Formula::member(x, set), bx)
            }
            Surf::Sub(a, _, b, _) => {
                let (x, y) = (self.set_name(a, env), self.set_name(b, env));
                self.names.forall_first("t", |_, t| {
                    Formula::member(t, x.clone()).implies(Formula::member(t, y.clone()))
                })
            }
            Surf::SetLit(a, _, elems) => {
                let set = self.set_name(a, env);
                let elems = elems.clone();
                self.names.forall_first("t", |names, t| {
                    let cases: Vec<Formula> = elems
                        .iter()
                        .map(|&n| names.at_position(n as usize, |_, p| Formula::equal(t, p)))
                        .collect();
                    let inside = Formula::member(t, set.clone());
                    if cases.is_empty() {
                        inside.not()
                    } else {
                        let any = names.disj(cases);
                        inside.iff(any)
                    }
                })
            }
            Surf::Not(g) => self.lower(g, env)?.not(),
            Surf::Bin(op, g, h) => {
                let a = self.lower(g, env)?;
                let b = self.lower(h, env)?;
                match op {
                    Op::And => a.and(b),
                    Op::Or => a.or(b),
                    Op::Imp => a.implies(b),
                    Op::Iff => a.iff(b),
                }
            }
            Surf::Quant(q, v, g) => {
                let core = self.binder_name(v);
                let sort = q.sort();
                env.push((v.clone(), core.clone(), sort));
                self.path.push(core.clone());
                let body = self.lower(g, env);
                self.path.pop();
                env.pop();
                let body = body?;
                match q {
                    Quant::Ex | Quant::ExSet => Formula::exists(core, sort, body),
                    Quant::All | Quant::AllSet => Formula::forall(core, sort, body),
                    Quant::Lone => self.at_most_one(&core, &body),
                    Quant::One => {
                        let some = Formula::exists(core.clone(), sort, body.clone());
                        some.and(self.at_most_one(&core, &body))
                    }
                }
            }
            Surf::Macro(m, _) => {
                let body = self.macros.defs[m].clone();
                self.lower(&body, &mut Vec::new())?
            }
        })
    }

    /// Core name for a binder: the surface name unless that would shadow an
    /// enclosing binder or capture a free variable.
    fn binder_name(&mut self, v: &str) -> String {
        if self.path.iter().any(|p| p == v) || self.free.contains_key(v) {
            self.names.fresh(v)
        } else {
            v.to_string()
        }
    }

    /// `¬∃x∃x'(φ(x) ∧ φ(x') ∧ x < x')`.
    fn at_most_one(&mut self, x: &str, body: &Formula) -> Formula {
        let y = self.names.fresh(x);
        let twin = body.rename_free(x, &y);
        Formula::exists(
            x.to_string(),
            Sort::First,
            Formula::exists(
                y.clone(),
                Sort::First,
                body.clone().and(twin).and(Formula::less(x.to_string(), y)),
            ),
        )
        .not()
    }
}
