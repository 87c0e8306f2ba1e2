use std::collections::BTreeSet;

use church_core::error::{Error, Pos};
use church_core::formula::{
    parse, parse_with_macros, print, print_core, substitute_param, Formula, Macros, Sort,
};
use church_core::mso::model_check;
use church_core::omega::Lasso;
use church_core::predicate::UpPredicate;
use church_core::spec::SpecFile;
use church_core::{corpus, gen};
use proptest::prelude::*;
use rand::Rng;

fn set(names: &[&str]) -> BTreeSet<String> {
    names.iter().map(|s| s.to_string()).collect()
}

fn up(s: &str) -> Lasso {
    s.parse::<UpPredicate>().unwrap().to_lasso()
}

#[test]
fn parses_copy_specification() {
    let f = parse("all t. (in(Y,t) <-> in(X,t))").unwrap();
    let expected = Formula::forall(
        "t",
        Sort::First,
        Formula::member("t", "Y").iff(Formula::member("t", "X")),
    );
    assert_eq!(f, expected);
}

#[test]
fn parses_unsatisfiable_but_well_formed() {
    let f = parse("exists t. t < t").unwrap();
    assert_eq!(
        f,
        Formula::exists("t", Sort::First, Formula::less("t", "t"))
    );
    assert!(!model_check(&f, &[]).unwrap());
}

#[test]
fn psi_beta_with_macros() {
    let spec = SpecFile::parse(corpus::PSI_BETA).unwrap();
    let fv = spec.formula.free_vars();
    assert!(fv.first.is_empty());
    assert_eq!(fv.second, set(&["P", "X", "Y"]));
    let holds = |x: &str, y: &str, p: &str| {
        model_check(
            &spec.formula,
            &[("X", &up(x)), ("Y", &up(y)), ("P", &up(p))],
        )
        .unwrap()
    };
    // P nonempty: Y must be exactly {0}, X is free.
    assert!(holds("01;1", "1;0", "1;0"));
    assert!(!holds(";0", ";0", "1;0"));
    assert!(!holds(";0", "11;0", "01;0"));
    // P empty: X must be empty, Y is free.
    assert!(holds(";0", "1;01", ";0"));
    assert!(!holds("001;0", ";0", ";0"));
}

#[test]
fn free_variable_examples() {
    let copy = parse("all t. in(Y,t) <-> in(X,t)").unwrap();
    assert_eq!(copy.free_vars().second, set(&["X", "Y"]));
    assert!(copy.free_vars().first.is_empty());

    let hidden = parse("exset X. all t. in(Y,t) <-> in(X,t)").unwrap();
    assert_eq!(hidden.free_vars().second, set(&["Y"]));

    let select = parse("all t. in(X,t) <-> in(P,t+1)").unwrap();
    assert_eq!(select.free_vars().second, set(&["P", "X"]));
    assert!(select.free_vars().first.is_empty());

    let open = parse("t < s & in(X, t)").unwrap();
    assert_eq!(open.free_vars().first, set(&["s", "t"]));
}

#[test]
fn substitute_param_examples() {
    let psi = SpecFile::parse(corpus::PSI_BETA).unwrap().formula;
    let renamed = substitute_param(&psi, "P", "Z").unwrap();
    assert_eq!(renamed.free_vars().second, set(&["X", "Y", "Z"]));

    let copy = parse("all t. in(Y,t) <-> in(X,t)").unwrap();
    assert_eq!(substitute_param(&copy, "P", "Z").unwrap(), copy);

    let nested = parse("exset X. X sub P").unwrap();
    let expected = parse("exset X. X sub Z").unwrap();
    assert_eq!(substitute_param(&nested, "P", "Z").unwrap(), expected);

    let clash = parse("exset Z. Z sub P").unwrap();
    assert!(matches!(substitute_param(&clash, "P", "Z"), Err(Error::NameClash(n)) if n == "Z"));
}

#[test]
fn syntax_errors_carry_positions() {
    match parse("all t. in(X,t) &") {
        Err(Error::Syntax { pos, .. }) => assert_eq!(pos.line, 1),
        other => panic!("expected a syntax error, got {other:?}"),
    }
    let text = "formula: all t. in(Y,t) <-> in(W,t)\ninput: X\noutput: Y\n";
    assert!(matches!(SpecFile::parse(text), Err(Error::Unbound { name, .. }) if name == "W"));
    let dup = "formula: all t. in(Y,t)\ninput: X\noutput: X\n";
    assert!(matches!(
        SpecFile::parse(dup),
        Err(Error::RoleConflict { .. })
    ));
}

/// Random core formula without shadowing: first-order names `t*`, set names
/// `S*` plus the free sets X, Y, P.
fn random_formula(seed: u64, depth: usize) -> Formula {
    fn go<R: Rng>(
        r: &mut R,
        depth: usize,
        fo: &mut Vec<String>,
        so: &mut Vec<String>,
        fresh: &mut usize,
    ) -> Formula {
        let pick = |r: &mut R, v: &[String]| v[r.gen_range(0..v.len())].clone();
        if depth == 0 || r.gen_bool(0.25) {
            return match r.gen_range(0..3) {
                0 => Formula::less(pick(r, fo), pick(r, fo)),
                1 => Formula::equal(pick(r, fo), pick(r, fo)),
                _ => Formula::member(pick(r, fo), pick(r, so)),
            };
        }
        match r.gen_range(0..4) {
            0 => go(r, depth - 1, fo, so, fresh).not(),
            1 => {
                let a = go(r, depth - 1, fo, so, fresh);
                let b = go(r, depth - 1, fo, so, fresh);
                a.and(b)
            }
            k => {
                *fresh += 1;
                let (sort, name, pool) = if k == 2 {
                    (Sort::First, format!("t{fresh}"), &mut *fo)
                } else {
                    (Sort::Second, format!("S{fresh}"), &mut *so)
                };
                pool.push(name.clone());
                let body = go(r, depth - 1, fo, so, fresh);
                match sort {
                    Sort::First => fo.pop(),
                    Sort::Second => so.pop(),
                };
                Formula::exists(name, sort, body)
            }
        }
    }
    let mut r = gen::rng(seed);
    let mut fo = vec!["t0".to_string()];
    let mut so = vec!["X".to_string(), "Y".to_string(), "P".to_string()];
    let mut fresh = 0;
    go(&mut r, depth, &mut fo, &mut so, &mut fresh)
}

proptest! {
    #[test]
    fn printing_round_trips(seed in any::<u64>(), depth in 1usize..7) {
        let f = random_formula(seed, depth);
        prop_assert!(!f.has_shadowing());
        prop_assert_eq!(parse(&print(&f)).unwrap(), f.clone());
        prop_assert_eq!(parse(&print_core(&f)).unwrap(), f);
    }

    #[test]
    fn substitution_moves_the_parameter(seed in any::<u64>(), depth in 1usize..7) {
        let f = random_formula(seed, depth);
        let before = f.free_vars();
        let g = substitute_param(&f, "P", "Z").unwrap();
        let after = g.free_vars();
        let mut expected = before.second.clone();
        if expected.remove("P") {
            expected.insert("Z".to_string());
        }
        prop_assert_eq!(after.second, expected);
        prop_assert_eq!(after.first, before.first);
    }
}

/// Positions of ones up to `horizon`, or `None` if the word has infinitely many.
fn ones(w: &Lasso, horizon: usize) -> Option<Vec<usize>> {
    if w.cycle.iter().any(|&l| l & 1 == 1) {
        return None;
    }
    Some((0..horizon).filter(|&n| w.bit_at(0, n)).collect())
}

/// Parse with X and Y declared as sets, so `X = Y` is set equality.
fn parse_sets(text: &str) -> Formula {
    parse_with_macros(text, Pos { line: 1, col: 1 }, &Macros::new(), &["X", "Y"])
        .unwrap()
        .0
}

#[test]
fn derived_forms_keep_their_meaning() {
    let words = gen::lasso_samples(1, 12, 5);
    let subset = parse_sets("X sub Y");
    let equal = parse_sets("X = Y");
    let exactly_one = parse_sets("one t. in(X,t)");
    let at_most_one = parse_sets("lone t. in(X,t)");
    let constant = parse_sets("X = {0, 2}");
    let successor = parse_sets("all t. in(X,t) -> in(Y,t+1)");
    let order = parse_sets("all t. all s. (in(X,t) & in(Y,s)) -> t <= s");
    for x in &words {
        for y in &words {
            let span = x.prefix.len().max(y.prefix.len()) + 2 * x.cycle.len() * y.cycle.len();
            let check = |f: &Formula| model_check(f, &[("X", x), ("Y", y)]).unwrap();
            let xs = |n| x.bit_at(0, n);
            let ys = |n| y.bit_at(0, n);
            assert_eq!(
                check(&subset),
                (0..span).all(|n| !xs(n) || ys(n)),
                "{x} {y}"
            );
            assert_eq!(check(&equal), (0..span).all(|n| xs(n) == ys(n)), "{x} {y}");
            assert_eq!(
                check(&successor),
                (0..span).all(|n| !xs(n) || ys(n + 1)),
                "{x} {y}"
            );
            let last_x = match ones(x, span) {
                Some(o) => o.last().copied(),
                None => Some(usize::MAX),
            };
            let first_y = (0..span).find(|&n| ys(n));
            let ordered = match (last_x, first_y) {
                (Some(l), Some(f)) => l <= f,
                _ => true,
            };
            assert_eq!(check(&order), ordered, "{x} {y}");
        }
        let check = |f: &Formula| model_check(f, &[("X", x)]).unwrap();
        let xo = ones(x, x.prefix.len() + 1);
        assert_eq!(
            check(&exactly_one),
            xo.as_ref().is_some_and(|o| o.len() == 1),
            "{x}"
        );
        assert_eq!(
            check(&at_most_one),
            xo.as_ref().is_some_and(|o| o.len() <= 1),
            "{x}"
        );
        assert_eq!(check(&constant), xo.as_deref() == Some(&[0, 2][..]), "{x}");
    }
}
