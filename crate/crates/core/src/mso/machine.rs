use crate::formula::{Formula, Names, Sort};
use crate::strategy::Operator;

fn literal(f: Formula, positive: bool) -> Formula {
    if positive {
        f
    } else {
        f.not()
    }
}

/// Formula over the free sets `input` and `output` that holds exactly when
/// `output` is the machine's response to `input`. One existential set per
/// state holds the positions where the run visits it.
pub fn machine_to_formula(m: &impl Operator, input: &str, output: &str) -> Formula {
    let mut names = Names::new();
    names.reserve_all([input, output]);
    let run: Vec<String> = (0..m.num_states()).map(|_| names.fresh("S")).collect();
    let mut parts = vec![names.at_position(0, |_, t| Formula::member(t, run[m.start()].clone()))];
    for (q, sq) in run.iter().enumerate() {
        let local = names.forall_first("t", |names, t| {
            let mut cases = Vec::new();
            for a in [false, true] {
                let (o, next) = m.step(q, a);
                let follow = names.at_next(t, |_, s| Formula::member(s, run[next].clone()));
                let effect = literal(Formula::member(t, output), o).and(follow);
                cases.push(literal(Formula::member(t, input), a).implies(effect));
            }
            let body = names.conj(cases);
            Formula::member(t, sq.clone()).implies(body)
        });
        parts.push(local);
    }
    let body = names.conj(parts);
    run.iter()
        .rev()
        .fold(body, |f, s| Formula::exists(s.clone(), Sort::Second, f))
}
