use church_core::error::Error;
use church_core::formula::parse;
use church_core::gen;
use church_core::mso::{compile, model_check};
use church_core::predicate::{
    extract_period_from_machine, self_driven, up_to_formula, UpPredicate,
};
use church_core::strategy::{run_on_lasso, CMachine, Operator};
use proptest::prelude::*;

fn up(s: &str) -> UpPredicate {
    s.parse().unwrap()
}

fn bits(len: usize, mask: u32) -> Vec<bool> {
    (0..len).map(|i| mask >> i & 1 == 1).collect()
}

/// Every representation with `|u| <= max_prefix` and `1 <= |v| <= max_period`.
fn all_small(max_prefix: usize, max_period: usize) -> Vec<UpPredicate> {
    let mut out = Vec::new();
    for d in 0..=max_prefix {
        for k in 1..=max_period {
            for u in 0..1u32 << d {
                for v in 0..1u32 << k {
                    out.push(UpPredicate::new(bits(d, u), bits(k, v)).unwrap());
                }
            }
        }
    }
    out
}

#[test]
fn bit_at_examples() {
    assert!(up("1;0").bit_at(0));
    assert!(!up("1;0").bit_at(5));
    assert!(up(";10").bit_at(4));
    assert!(!up(";10").bit_at(3));
    assert!(up("01;1").bit_at(7));
    assert!(!up("01;1").bit_at(0));
}

#[test]
fn canonicalize_examples() {
    let p = up("0;1010");
    let c = p.canonicalize();
    // 0·(1010)^ω = (01)^ω, so even the prefix disappears.
    assert_eq!(c, up(";01"));
    assert!((0..20).all(|n| c.bit_at(n) == p.bit_at(n) && c.bit_at(n) == up("0;10").bit_at(n)));
    assert_eq!(up("10;00").canonicalize(), up("1;0"));
    assert_eq!(up("1;0").canonicalize(), up("1;0"));
}

proptest! {
    #[test]
    fn canonicalize_keeps_the_set(d in 0usize..6, k in 1usize..7, u in any::<u32>(), v in any::<u32>()) {
        let p = UpPredicate::new(bits(d, u), bits(k, v)).unwrap();
        let c = p.canonicalize();
        for n in 0..d + 2 * k {
            prop_assert_eq!(p.bit_at(n), c.bit_at(n));
        }
        prop_assert_eq!(c.canonicalize(), c.clone());
        prop_assert!(c.period().len() <= k && c.prefix().len() <= d);
        prop_assert!(UpPredicate::from_lasso(&p.to_lasso()).unwrap() == p);
        prop_assert_eq!(p.to_string().parse::<UpPredicate>().unwrap(), p);
    }
}

#[test]
fn canonical_forms_are_minimal() {
    let reps = all_small(3, 4);
    for p in &reps {
        let c = p.canonicalize();
        for q in reps.iter().filter(|q| q.same_set(p)) {
            let (qk, ck) = (q.period().len(), c.period().len());
            assert!(
                qk > ck || (qk == ck && q.prefix().len() >= c.prefix().len()),
                "{q} beats {c}"
            );
        }
    }
}

#[test]
fn up_formula_examples() {
    let holds = |p: &str, v: &str| {
        let f = up_to_formula(&up(p), "V");
        model_check(&f, &[("V", &up(v).to_lasso())]).unwrap()
    };
    assert!(holds(";1", ";1"));
    assert!(!holds(";1", "0;1"));
    assert!(holds("1;0", "1;0"));
    assert!(!holds("1;0", "11;0"));
    assert!(!holds("1;0", ";0"));
    // Flipping any single position of the even numbers breaks the formula.
    let even = up(";10");
    let f = up_to_formula(&even, "V");
    assert!(model_check(&f, &[("V", &even.to_lasso())]).unwrap());
    for n in 0..12 {
        let w = even.to_lasso().with_flipped_bit(0, n);
        assert_eq!(
            UpPredicate::from_lasso(&w).unwrap().bit_at(n),
            !even.bit_at(n)
        );
        assert!(!model_check(&f, &[("V", &w)]).unwrap(), "position {n}");
    }
}

#[test]
fn up_formula_singles_out_its_set() {
    let reps = all_small(4, 4);
    let mut canon: Vec<UpPredicate> = reps.iter().map(|p| p.canonicalize()).collect();
    canon.sort_by_key(|p| p.to_string());
    canon.dedup();
    let words: Vec<_> = reps.iter().map(|q| (q, q.to_lasso())).collect();
    for p in &canon {
        let a = compile(&up_to_formula(p, "V"), &["V"]).unwrap();
        for (q, w) in &words {
            assert_eq!(
                a.accepts(w).unwrap(),
                q.same_set(p),
                "formula of {p} on {q}"
            );
        }
    }
}

fn constant_one() -> CMachine {
    CMachine::constant(true)
}

fn alternator() -> CMachine {
    // Ignores its input: 1, 0, 1, 0, …
    CMachine::new(vec![1, 1, 0, 0], vec![true, true, false, false], 0).unwrap()
}

#[test]
fn extraction_examples() {
    let p = extract_period_from_machine(&constant_one(), &up(";1")).unwrap();
    assert_eq!(p, up(";1"));
    assert!(p.period().len() < 2);

    let q = extract_period_from_machine(&alternator(), &up(";01")).unwrap();
    assert_eq!(q, up(";01"));
    assert!(q.period().len() < 4);

    assert!(matches!(
        extract_period_from_machine(&CMachine::copy(), &up(";01")),
        Err(Error::Inconsistent { .. })
    ));
    // The constant machine is consistent with 0;1 but not with ;10.
    assert!(extract_period_from_machine(&constant_one(), &up("0;1")).is_ok());
    assert!(extract_period_from_machine(&constant_one(), &up(";10")).is_err());
}

#[test]
fn self_driven_runs_satisfy_the_selection_formula() {
    let alpha = parse("all t. in(X,t) <-> in(P,t+1)").unwrap();
    let mut r = gen::rng(8);
    for i in 0..30 {
        let m = gen::cmachine(&mut r, 1 + i % 5);
        let first = i % 2 == 0;
        let p = self_driven(&m, first);
        assert!(p.prefix().len() + p.period().len() <= 2 * m.num_states());
        let x = run_on_lasso(&m, &p.to_lasso()).unwrap();
        assert!(model_check(&alpha, &[("X", &x), ("P", &p.to_lasso())]).unwrap());
        assert_eq!(extract_period_from_machine(&m, &p).unwrap(), p);
    }
}
