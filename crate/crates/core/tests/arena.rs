use std::collections::HashMap;

use church_core::arena::{build_arena, simulate_unfolded, Phases, Vertex};
use church_core::error::Error;
use church_core::gen;
use church_core::omega::Dpa;
use church_core::predicate::UpPredicate;
use church_core::solver::Player;
use proptest::prelude::*;
use rand::Rng;

fn up(s: &str) -> UpPredicate {
    s.parse().unwrap()
}

fn counts(g: &church_core::arena::ParityGame) -> (usize, usize) {
    let v1 = g.owner.iter().filter(|&&o| o == Player::I).count();
    (v1, g.len() - v1)
}

#[test]
fn size_examples() {
    let one = build_arena(&Dpa::universal(3), &up(";0")).unwrap();
    let (v1, v2) = counts(&one);
    assert!(v1 <= 1 && v2 <= 2);

    // Two states: remember whether X was ever 1.
    let mut delta = Vec::new();
    for q in 0..2u32 {
        for l in 0..8u32 {
            delta.push(if l & 1 == 1 { 1 } else { q });
        }
    }
    let a = Dpa::new(3, delta, vec![0, 1], 0).unwrap();
    let g = build_arena(&a, &up("1;0")).unwrap();
    let (v1, v2) = counts(&g);
    assert!(v1 <= 4 && v2 <= 8, "{v1} {v2}");
}

#[test]
fn rejects_wrong_width() {
    assert!(matches!(
        build_arena(&Dpa::universal(2), &up(";0")),
        Err(Error::WidthMismatch {
            expected: 3,
            found: 2
        })
    ));
}

#[test]
fn dot_export_marks_owners_and_colors() {
    let g = build_arena(&Dpa::universal(3), &up(";0")).unwrap();
    let dot = g.to_dot();
    assert!(dot.starts_with("digraph"));
    assert!(dot.contains("shape=box") && dot.contains("shape=ellipse"));
    assert!(dot.contains("color 0"));
    assert!(dot.contains("label=\"1\""));
}

fn random_instance(seed: u64) -> (Dpa, UpPredicate) {
    let mut r = gen::rng(seed);
    let states = r.gen_range(1..=3);
    let a = gen::dpa(&mut r, 3, states, 4);
    let len = r.gen_range(1..=3);
    let d = r.gen_range(0..len);
    let bits: Vec<bool> = (0..len).map(|_| r.gen_bool(0.5)).collect();
    (
        a,
        UpPredicate::new(bits[..d].to_vec(), bits[d..].to_vec()).unwrap(),
    )
}

proptest! {
    #[test]
    fn arena_structure(seed in any::<u64>()) {
        let (a, p) = random_instance(seed);
        let g = build_arena(&a, &p).unwrap();
        let phases = Phases::new(&p.canonicalize());
        prop_assert_eq!(g.vertex[g.init], Vertex::Choose { q: a.init(), phase: 0 });
        for v in 0..g.len() {
            match g.vertex[v] {
                Vertex::Choose { q, phase } => {
                    prop_assert_eq!(g.owner[v], Player::I);
                    prop_assert_eq!(g.color[v], a.color(q));
                    for b in 0..2 {
                        prop_assert_eq!(g.vertex[g.succ[v][b]], Vertex::Respond { q, x: b == 1, phase });
                    }
                }
                Vertex::Respond { q, x, phase } => {
                    prop_assert_eq!(g.owner[v], Player::II);
                    prop_assert_eq!(g.color[v], a.color(q));
                    for b in 0..2 {
                        let l = church_core::arena::letter(x, b == 1, phases.bit(phase));
                        let expected = Vertex::Choose { q: a.next(q, l), phase: phases.next(phase) };
                        prop_assert_eq!(g.vertex[g.succ[v][b]], expected);
                    }
                }
                Vertex::Plain => prop_assert!(false, "arena vertex without structure"),
            }
        }
        let (v1, v2) = counts(&g);
        prop_assert!(v1 <= a.num_states() * phases.span());
        prop_assert!(v2 <= 2 * v1);
    }

    #[test]
    fn quotient_plays_match_the_unfolded_arena(seed in any::<u64>()) {
        let (a, p) = random_instance(seed);
        let g = build_arena(&a, &p).unwrap();
        let phases = Phases::new(&p.canonicalize());
        let index: HashMap<Vertex, usize> = g.vertex.iter().enumerate().map(|(i, v)| (*v, i)).collect();
        let steps = 2 * 3 * (p.prefix().len() + p.period().len()) * a.num_states();
        let mut r = gen::rng(seed ^ 0x5eed);
        for _ in 0..10 {
            let choice: Vec<bool> = (0..g.len()).map(|_| r.gen_bool(0.5)).collect();
            let quotient = g.play_colors(|v| choice[v], steps);
            let direct = simulate_unfolded(
                &a,
                &p,
                |q, n, x| {
                    let phase = phases.of(n);
                    let v = match x {
                        None => Vertex::Choose { q, phase },
                        Some(x) => Vertex::Respond { q, x, phase },
                    };
                    choice[index[&v]]
                },
                steps,
            );
            prop_assert_eq!(quotient, direct);
        }
    }
}
