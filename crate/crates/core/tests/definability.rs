use std::time::Instant;

use church_core::definability::{
    emit_op_formula, emit_strategy_formula, emit_win_sentence, emit_winst, encode_strategy,
    spec_automaton, strategy_vars, Roles,
};
use church_core::mso::{model_check, Compiler};
use church_core::omega::{Dpa, Lasso};
use church_core::predicate::UpPredicate;
use church_core::solver::Player;
use church_core::spec::SpecFile;
use church_core::strategy::{run_on_lasso, Machine, Operator, SCMachine};
use church_core::synthesis::synthesize;
use church_core::{corpus, gen};

#[test]
fn win_sentence_matches_solver() {
    let c = Compiler::default();
    for e in corpus::entries() {
        let spec = e.spec().unwrap();
        let roles = Roles::new(&spec.input, &spec.output, spec.param_name());
        let t = Instant::now();
        let win = emit_win_sentence(&spec.formula, &roles, &c).unwrap();
        let p = spec.parameter().to_lasso();
        let verdict = c.model_check(&win, &[(spec.param_name(), &p)]).unwrap();
        eprintln!(
            "{}: size {} verdict {} in {:?}",
            e.label(),
            win.size(),
            verdict,
            t.elapsed()
        );
        assert_eq!(verdict, e.winner == Player::II, "{}", e.label());
    }
}

#[test]
fn strategy_formula_defines_the_synthesized_operator() {
    let c = Compiler::default();
    for e in corpus::entries() {
        let spec = e.spec().unwrap();
        let roles = Roles::new(&spec.input, &spec.output, spec.param_name());
        let p = spec.parameter();
        let t = Instant::now();
        let (winner, st) = emit_strategy_formula(&spec.formula, &roles, &p, &c).unwrap();
        let machine = synthesize(&spec.compile().unwrap(), &p).unwrap().machine;
        assert_eq!(winner, e.winner);
        let param = p.to_lasso();
        for (i, opp) in gen::lasso_samples(1, 20, 11).iter().enumerate() {
            let own = run_on_lasso(&machine, opp).unwrap();
            let (x, y) = match winner {
                Player::II => (opp.clone(), own.clone()),
                Player::I => (own.clone(), opp.clone()),
            };
            let holds = |x: &Lasso, y: &Lasso| {
                c.model_check(
                    &st,
                    &[
                        (&spec.input, x),
                        (&spec.output, y),
                        (spec.param_name(), &param),
                    ],
                )
                .unwrap()
            };
            assert!(holds(&x, &y), "{} sample {i}", e.label());
            let n = i % 5;
            let wrong = own.with_flipped_bit(0, n);
            let rejected = match winner {
                Player::II => !holds(&x, &wrong),
                Player::I => !holds(&wrong, &y),
            };
            assert!(rejected, "{} sample {i} flipped at {n}", e.label());
        }
        eprintln!(
            "{}: strategy formula size {} checked in {:?}",
            e.label(),
            st.size(),
            t.elapsed()
        );
    }
}

fn up(s: &str) -> UpPredicate {
    s.parse().unwrap()
}

fn roles() -> Roles {
    Roles::new("X", "Y", "P")
}

fn automaton(text: &str) -> Dpa {
    let spec = SpecFile::parse(text).unwrap();
    spec_automaton(&spec.formula, &roles(), &Compiler::default()).unwrap()
}

fn bind<'a>(names: &'a [String], words: &'a [Lasso]) -> Vec<(&'a str, &'a Lasso)> {
    names.iter().map(String::as_str).zip(words).collect()
}

#[test]
fn winst_accepts_solver_strategies_only() {
    let a = automaton(corpus::COPY);
    let winst = emit_winst(&a, Player::II, "P").unwrap();
    let z = strategy_vars(&a, Player::II, &["P"]);
    for p in [";0", ";1", "1;0"] {
        let p = up(p);
        let (winner, sets) = encode_strategy(&a, &p).unwrap();
        assert_eq!(winner, Player::II);
        let mut words: Vec<Lasso> = sets.iter().map(UpPredicate::to_lasso).collect();
        let param = p.to_lasso();
        let check = |words: &[Lasso]| {
            let mut env = bind(&z, words);
            env.push(("P", &param));
            model_check(&winst, &env).unwrap()
        };
        assert!(check(&words));
        // Answer 1 to X = 0 at the very first position.
        let i = 2 * a.init();
        words[i] = words[i].with_flipped_bit(0, 0);
        assert!(!check(&words));
    }
}

#[test]
fn no_small_encoding_wins_copy_for_player_one() {
    let a = automaton(corpus::COPY);
    let winst = emit_winst(&a, Player::I, "P").unwrap();
    let z = strategy_vars(&a, Player::I, &["P"]);
    let small: Vec<Lasso> = [";0", ";1", "1;0", "0;1", ";10", ";01"]
        .iter()
        .map(|s| up(s).to_lasso())
        .collect();
    let param = up(";0").to_lasso();
    let mut choice = vec![0usize; z.len()];
    loop {
        let words: Vec<Lasso> = choice.iter().map(|&i| small[i].clone()).collect();
        let mut env = bind(&z, &words);
        env.push(("P", &param));
        assert!(!model_check(&winst, &env).unwrap(), "{choice:?}");
        let Some(k) = choice.iter().position(|&i| i + 1 < small.len()) else {
            break;
        };
        choice[k] += 1;
        choice[..k].iter_mut().for_each(|i| *i = 0);
    }
}

#[test]
fn op_formula_is_the_operator_graph() {
    let a = automaton(corpus::COPY);
    let op = emit_op_formula(&a, Player::II, &roles()).unwrap();
    let z = strategy_vars(&a, Player::II, &["X", "Y", "P"]);
    let p = up(";0");
    let (_, sets) = encode_strategy(&a, &p).unwrap();
    let words: Vec<Lasso> = sets.iter().map(UpPredicate::to_lasso).collect();
    let param = p.to_lasso();
    let holds = |x: &Lasso, y: &Lasso| {
        let mut env = bind(&z, &words);
        env.extend([("X", x), ("Y", y), ("P", &param)]);
        model_check(&op, &env).unwrap()
    };
    assert!(holds(&up(";10").to_lasso(), &up(";10").to_lasso()));
    assert!(!holds(&up(";10").to_lasso(), &up(";01").to_lasso()));

    // The only winning answer here is the constant empty set.
    let empty = automaton("formula: all t. ~in(Y,t)\ninput: X\noutput: Y\n");
    let op = emit_op_formula(&empty, Player::II, &roles()).unwrap();
    let z = strategy_vars(&empty, Player::II, &["X", "Y", "P"]);
    let (_, sets) = encode_strategy(&empty, &p).unwrap();
    let words: Vec<Lasso> = sets.iter().map(UpPredicate::to_lasso).collect();
    for x in gen::lasso_samples(1, 8, 2) {
        for y in gen::lasso_samples(1, 8, 2) {
            let mut env = bind(&z, &words);
            env.extend([("X", &x), ("Y", &y), ("P", &param)]);
            assert_eq!(
                model_check(&op, &env).unwrap(),
                y.same_word(&up(";0").to_lasso()),
                "{x} {y}"
            );
        }
    }
}

#[test]
fn prediction_strategy_formula_negates_the_previous_bit() {
    let c = Compiler::default();
    let spec = SpecFile::parse(corpus::PREDICT).unwrap();
    let p = up(";0");
    let (winner, st) = emit_strategy_formula(&spec.formula, &roles(), &p, &c).unwrap();
    assert_eq!(winner, Player::I);
    let param = p.to_lasso();
    let Machine::Sc(m) = synthesize(&spec.compile().unwrap(), &p).unwrap().machine else {
        panic!()
    };
    // Once X(1) differs from Y(0) the game is decided, so only the first
    // two positions are pinned down.
    let negate = SCMachine::negate_previous(m.out(m.start()));
    for y in gen::lasso_samples(1, 12, 6) {
        let x = run_on_lasso(&m, &y).unwrap();
        let reference = run_on_lasso(&negate, &y).unwrap();
        assert_eq!(
            (x.bit_at(0, 0), x.bit_at(0, 1)),
            (reference.bit_at(0, 0), !y.bit_at(0, 0))
        );
        let holds = |x: &Lasso| {
            c.model_check(&st, &[("X", x), ("Y", &y), ("P", &param)])
                .unwrap()
        };
        assert!(holds(&x), "{y}");
        assert!(!holds(&x.with_flipped_bit(0, 1)), "{y}");
    }
}

#[test]
fn strategy_formula_graph_is_functional() {
    let c = Compiler::default();
    let mut candidates: Vec<Lasso> = Vec::new();
    for w in gen::lasso_samples(1, 16, 23) {
        if !candidates.iter().any(|v| v.same_word(&w)) {
            candidates.push(w);
        }
    }
    for (text, param) in [(corpus::COPY, ";0"), (corpus::PSI_BETA, "1;0")] {
        let spec = SpecFile::parse(text).unwrap();
        let p = up(param);
        let (winner, st) = emit_strategy_formula(&spec.formula, &roles(), &p, &c).unwrap();
        assert_eq!(winner, Player::II);
        let machine = synthesize(&spec.compile().unwrap(), &p).unwrap().machine;
        let param = p.to_lasso();
        for x in gen::lasso_samples(1, 6, 29) {
            let image = run_on_lasso(&machine, &x).unwrap();
            let mut ys = candidates.clone();
            if !ys.iter().any(|y| y.same_word(&image)) {
                ys.push(image.clone());
            }
            let accepted: Vec<&Lasso> = ys
                .iter()
                .filter(|y| {
                    c.model_check(&st, &[("X", &x), ("Y", *y), ("P", &param)])
                        .unwrap()
                })
                .collect();
            assert_eq!(accepted.len(), 1, "{x}");
            assert!(accepted[0].same_word(&image));
        }
    }
}
