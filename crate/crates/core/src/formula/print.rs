use super::{Formula, Sort};

/// Printed form plus its binding strength: 0 for quantifiers (their bodies
/// extend rightwards), then `<->`, `->`, `|`, `&`, `~`, atoms.
type Doc = (String, u8);

const QUANT: u8 = 0;
const IFF: u8 = 1;
const IMP: u8 = 2;
const OR: u8 = 3;
const AND: u8 = 4;
const NOT: u8 = 5;
const ATOM: u8 = 6;

/// Print using `all`, `|`, `->` and `<->` where the core shape allows it.
/// Parsing the output yields the same core formula.
pub fn print(f: &Formula) -> String {
    Printer { sugar: true }.doc(f).0
}

/// Print the core connectives only.
pub fn print_core(f: &Formula) -> String {
    Printer { sugar: false }.doc(f).0
}

struct Printer {
    sugar: bool,
}

fn wrap(d: Doc, min: u8) -> String {
    if d.1 < min {
        format!("({})", d.0)
    } else {
        d.0
    }
}

fn negated(f: &Formula) -> Option<&Formula> {
    match f {
        Formula::Not(g) => Some(g),
        _ => None,
    }
}

/// `Not(And(a, Not(b)))` as `(a, b)`.
fn as_implication(f: &Formula) -> Option<(&Formula, &Formula)> {
    match negated(f)? {
        Formula::And(a, b) => Some((a, negated(b)?)),
        _ => None,
    }
}

impl Printer {
    fn binary(&self, a: &Formula, b: &Formula, op: &str, prec: u8, left: u8, right: u8) -> Doc {
        (
            format!(
                "{} {op} {}",
                wrap(self.doc(a), left),
                wrap(self.doc(b), right)
            ),
            prec,
        )
    }

    fn doc(&self, f: &Formula) -> Doc {
        if self.sugar {
            if let Some(d) = self.sugared(f) {
                return d;
            }
        }
        match f {
            Formula::Less(a, b) => (format!("{a} < {b}"), ATOM),
            Formula::Equal(a, b) => (format!("{a} = {b}"), ATOM),
            Formula::Member(t, s) => (format!("in({s}, {t})"), ATOM),
            Formula::Not(g) => (format!("~{}", wrap(self.doc(g), NOT)), NOT),
            Formula::And(a, b) => self.binary(a, b, "&", AND, AND, NOT),
            Formula::Exists(v, s, g) => {
                let kw = match s {
                    Sort::First => "ex",
                    Sort::Second => "exset",
                };
                (format!("{kw} {v}. {}", self.doc(g).0), QUANT)
            }
        }
    }

    fn sugared(&self, f: &Formula) -> Option<Doc> {
        if let Formula::And(l, r) = f {
            if let (Some((a, b)), Some((b2, a2))) = (as_implication(l), as_implication(r)) {
                if a == a2 && b == b2 {
                    return Some(self.binary(a, b, "<->", IFF, IFF, IMP));
                }
            }
        }
        let inner = negated(f)?;
        match inner {
            Formula::Exists(v, s, g) => {
                let body = negated(g)?;
                let kw = match s {
                    Sort::First => "all",
                    Sort::Second => "allset",
                };
                Some((format!("{kw} {v}. {}", self.doc(body).0), QUANT))
            }
            Formula::And(a, b) => {
                let b = negated(b)?;
                match negated(a) {
                    Some(a) => Some(self.binary(a, b, "|", OR, OR, AND)),
                    None => Some(self.binary(a, b, "->", IMP, OR, IMP)),
                }
            }
            _ => None,
        }
    }
}
