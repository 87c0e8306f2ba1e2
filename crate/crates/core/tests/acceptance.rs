//! Acceptance criteria, one PASS/FAIL line each.
//!
//! Runs without the test harness so the report is always printed. The run
//! fails only when a criterion outside `EXPECTED_FAILURES` fails; those two
//! are checked as stated and are known not to hold (see the README).

use std::collections::HashMap;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use church_core::arena::{simulate_unfolded, Phases, Vertex};
use church_core::definability::{emit_strategy_formula, emit_win_sentence, Roles};
use church_core::error::Pos;
use church_core::formula::{parse, parse_with_macros, Formula, Macros, Sort};
use church_core::mso::{compile, model_check, Compiler};
use church_core::omega::{determinize, Dpa, Lasso};
use church_core::predicate::{extract_period_from_machine, self_driven, UpPredicate};
use church_core::solver::{brute_force_solve, verify_solution, Player, BRUTE_FORCE_LIMIT};
use church_core::strategy::{cross_play, run_on_lasso, CMachine, Machine, Operator, SCMachine};
use church_core::synthesis::{synthesize, Synthesis};
use church_core::{corpus, gen};
use rand::Rng;

mod common;

/// Criteria allowed to fail; each is analyzed in the README.
const EXPECTED_FAILURES: [u32; 2] = [6, 8];

const RANDOM_INSTANCES: usize = 100;
const RANDOM_GAMES: usize = 100;
const LASSO_SAMPLES: usize = 20;
const MACHINES_FOR_PUMPING: usize = 50;
const MAX_PUMPING_STATES: usize = 6;
const STRATEGY_PAIRS: usize = 10;

struct Instance {
    label: String,
    /// Specification text, shared by corpus entries that differ only in P.
    text: &'static str,
    dpa: Dpa,
    p: UpPredicate,
    syn: Synthesis,
}

fn corpus_instances() -> Vec<Instance> {
    corpus::entries()
        .into_iter()
        .map(|e| {
            let s = e.spec().unwrap();
            let dpa = s.compile().unwrap();
            let p = s.parameter();
            let syn = synthesize(&dpa, &p).unwrap();
            Instance {
                label: e.label(),
                text: e.text,
                dpa,
                p,
                syn,
            }
        })
        .collect()
}

fn random_instances(seed: u64) -> Vec<Instance> {
    let mut r = gen::rng(seed);
    (0..RANDOM_INSTANCES)
        .map(|i| {
            let (dpa, p) = common::instance(&mut r, 3);
            let syn = synthesize(&dpa, &p).unwrap();
            Instance {
                label: format!("random #{i}"),
                text: "",
                dpa,
                p,
                syn,
            }
        })
        .collect()
}

/// Claimed opponents of the winner: fixed machines plus random ones.
fn refutes_loser(inst: &Instance, r: &mut impl Rng) -> bool {
    let (a, p) = (&inst.dpa, &inst.p);
    match &inst.syn.machine {
        Machine::C(f) => {
            let mut gs = vec![
                SCMachine::constant(false),
                SCMachine::constant(true),
                SCMachine::negate_previous(false),
            ];
            gs.extend((0..5).map(|_| {
                let n = r.gen_range(1..=4);
                gen::scmachine(r, n)
            }));
            gs.iter()
                .all(|g| cross_play(f, g, a, p).unwrap().refuted == Player::I)
        }
        Machine::Sc(g) => {
            let mut fs = vec![
                CMachine::constant(false),
                CMachine::constant(true),
                CMachine::copy(),
            ];
            fs.extend((0..5).map(|_| {
                let n = r.gen_range(1..=4);
                gen::cmachine(r, n)
            }));
            fs.iter()
                .all(|f| cross_play(f, g, a, p).unwrap().refuted == Player::II)
        }
    }
}

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: String) -> Outcome {
    Outcome { pass, detail }
}

fn determinacy(corpus: &[Instance], random: &[Instance]) -> Outcome {
    let mut r = gen::rng(101);
    let mut bad = Vec::new();
    for inst in corpus.iter().chain(random) {
        let g = &inst.syn.game;
        let s = &inst.syn.solution;
        // One winner at the start; the winner's region is really won.
        let single = s.winner[g.init] == inst.syn.winner && verify_solution(g, s);
        if !single || !refutes_loser(inst, &mut r) {
            bad.push(inst.label.clone());
        }
    }
    outcome(
        bad.is_empty() && corpus.len() >= 12,
        format!(
            "{} corpus + {} random instances, failures: {:?}",
            corpus.len(),
            random.len(),
            bad
        ),
    )
}

fn solver_oracle(corpus: &[Instance]) -> Outcome {
    let mut r = gen::rng(202);
    let mut checked = 0;
    let mut bad = 0;
    for inst in corpus
        .iter()
        .filter(|i| i.syn.game.len() <= BRUTE_FORCE_LIMIT)
    {
        checked += 1;
        bad += (brute_force_solve(&inst.syn.game).unwrap().winner != inst.syn.solution.winner)
            as usize;
    }
    for _ in 0..RANDOM_GAMES {
        let n = r.gen_range(1..=BRUTE_FORCE_LIMIT);
        let g = gen::game(&mut r, n, 4);
        checked += 1;
        let s = church_core::solver::solve(&g);
        bad += (brute_force_solve(&g).unwrap().winner != s.winner || !verify_solution(&g, &s))
            as usize;
    }
    outcome(
        bad == 0,
        format!("{checked} arenas compared, {bad} disagreements"),
    )
}

fn mutants(m: &Machine) -> Vec<Machine> {
    (0..m.num_states())
        .flat_map(|q| match m {
            Machine::C(c) => vec![
                Machine::C(c.with_flipped_output(q, false)),
                Machine::C(c.with_flipped_output(q, true)),
            ],
            Machine::Sc(s) => vec![Machine::Sc(s.with_flipped_output(q))],
        })
        .collect()
}

fn strategy_soundness(corpus: &[Instance], random: &[Instance]) -> Outcome {
    let unverified: Vec<&str> = corpus
        .iter()
        .chain(random)
        .filter(|i| !i.syn.verify(&i.dpa, &i.p).unwrap())
        .map(|i| i.label.as_str())
        .collect();
    // A mutant is rejected when it fails verification on its own instance
    // or on another corpus instance of the same specification.
    let (mut own, mut caught, mut total) = (0, 0, 0);
    let mut uncaught_instances = Vec::new();
    for inst in corpus {
        let mut any = false;
        for m in mutants(&inst.syn.machine) {
            total += 1;
            let fails_on = |other: &Instance| {
                !church_core::strategy::verify_machine_against_dpa(
                    &m,
                    &other.dpa,
                    &other.p,
                    inst.syn.winner,
                )
                .unwrap()
            };
            own += fails_on(inst) as usize;
            if corpus.iter().filter(|o| o.text == inst.text).any(fails_on) {
                caught += 1;
                any = true;
            }
        }
        if !any {
            uncaught_instances.push(inst.label.clone());
        }
    }
    outcome(
        unverified.is_empty() && uncaught_instances.is_empty(),
        format!(
            "unverified machines: {unverified:?}; corpus mutants rejected: {caught}/{total} ({own} on their own instance); \
             machines with no rejected mutant: {uncaught_instances:?}"
        ),
    )
}

fn parse_sets(text: &str, sets: &[&str]) -> Formula {
    parse_with_macros(text, Pos { line: 1, col: 1 }, &Macros::new(), sets)
        .unwrap()
        .0
}

fn compiler_coherence() -> Outcome {
    let mut words = gen::lasso_samples(2, 28, 3);
    words.push(Lasso::new(2, vec![1, 2], vec![3, 0]).unwrap());
    let golden = common::golden();
    let mut bad = Vec::new();
    for (text, reading) in &golden {
        let f = parse_sets(text, &["X", "Y"]);
        let a = compile(&f, &["X", "Y"]).unwrap();
        let c = a.complement();
        for w in &words {
            let inside = a.accepts(w).unwrap();
            if inside != reading(&common::Pair { w }) || inside == c.accepts(w).unwrap() {
                bad.push(format!("{text} on {w}"));
            }
        }
    }
    let bodies = [
        "all t. in(Z,t) <-> (in(X,t) & ~in(Y,t))",
        "Z sub X & all t. ex s. t < s & in(Z,s)",
        "in(Z,0) & all t. in(Z,t) -> in(Y,t+1) & in(Z,t+1)",
    ];
    for text in bodies {
        let f = parse_sets(text, &["X", "Y", "Z"]);
        let inner = compile(&f, &["X", "Y", "Z"]).unwrap();
        let projected = determinize(&inner.to_nba().project(&[2]).unwrap()).unwrap();
        let direct = compile(&Formula::exists("Z", Sort::Second, f), &["X", "Y"]).unwrap();
        for w in &words {
            if direct.accepts(w).unwrap() != projected.accepts(w).unwrap() {
                bad.push(format!("projection of {text} on {w}"));
            }
        }
    }
    outcome(
        bad.is_empty() && golden.len() >= 15 && words.len() >= 20,
        format!(
            "{} golden languages on {} lassos, {} mismatches {:?}",
            golden.len(),
            words.len(),
            bad.len(),
            bad.iter().take(3).collect::<Vec<_>>()
        ),
    )
}

fn main_theorem() -> Outcome {
    let c = Compiler::default();
    let mut bad = Vec::new();
    let mut pairs = 0;
    for e in corpus::entries() {
        pairs += 1;
        let spec = e.spec().unwrap();
        let roles = Roles::new(&spec.input, &spec.output, spec.param_name());
        let p = spec.parameter();
        let param = p.to_lasso();
        let win = emit_win_sentence(&spec.formula, &roles, &c).unwrap();
        let syn = synthesize(&spec.compile().unwrap(), &p).unwrap();
        if c.model_check(&win, &[(spec.param_name(), &param)]).unwrap()
            != (syn.winner == Player::II)
        {
            bad.push(format!("{}: WIN verdict", e.label()));
        }
        let (winner, st) = emit_strategy_formula(&spec.formula, &roles, &p, &c).unwrap();
        if winner != syn.winner {
            bad.push(format!("{}: strategy winner", e.label()));
            continue;
        }
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
        for (i, opp) in gen::lasso_samples(1, LASSO_SAMPLES, 11).iter().enumerate() {
            let own = run_on_lasso(&syn.machine, opp).unwrap();
            let wrong = own.with_flipped_bit(0, i % 5);
            let agrees = match winner {
                Player::II => holds(opp, &own) && !holds(opp, &wrong),
                Player::I => holds(&own, opp) && !holds(&wrong, opp),
            };
            if !agrees {
                bad.push(format!("{}: sample {opp}", e.label()));
            }
        }
    }
    outcome(
        bad.is_empty(),
        format!("{pairs} corpus pairs, {LASSO_SAMPLES} lassos each, mismatches {bad:?}"),
    )
}

fn pumping_bound() -> Outcome {
    let alpha = parse("all t. in(X,t) <-> in(P,t+1)").unwrap();
    let mut r = gen::rng(606);
    let mut over = Vec::new();
    let mut alpha_bad = 0;
    for i in 0..MACHINES_FOR_PUMPING {
        let n = r.gen_range(1..=MAX_PUMPING_STATES);
        let m = gen::cmachine(&mut r, n);
        let first = r.gen_bool(0.5);
        let claimed = self_driven(&m, first);
        let p = extract_period_from_machine(&m, &claimed).unwrap();
        if p.period().len() >= 2 * m.num_states() {
            over.push(format!(
                "#{i}: n={} period {}",
                m.num_states(),
                p.period().len()
            ));
        }
        let x = run_on_lasso(&m, &p.to_lasso()).unwrap();
        if !model_check(&alpha, &[("X", &x), ("P", &p.to_lasso())]).unwrap() {
            alpha_bad += 1;
        }
    }
    outcome(
        over.is_empty() && alpha_bad == 0,
        format!(
            "{MACHINES_FOR_PUMPING} machines, period >= 2n in {} ({}), selection formula violated in {alpha_bad}",
            over.len(),
            over.join(", ")
        ),
    )
}

fn quotient_faithfulness(corpus: &[Instance]) -> Outcome {
    let mut r = gen::rng(707);
    let mut bad = Vec::new();
    for inst in corpus {
        let g = &inst.syn.game;
        let phases = Phases::new(&inst.p.canonicalize());
        let index: HashMap<Vertex, usize> =
            g.vertex.iter().enumerate().map(|(i, v)| (*v, i)).collect();
        let rounds = 3 * (inst.p.prefix().len() + inst.p.period().len()) * inst.dpa.num_states();
        for _ in 0..STRATEGY_PAIRS {
            let choice: Vec<bool> = (0..g.len()).map(|_| r.gen_bool(0.5)).collect();
            let quotient = g.play_colors(|v| choice[v], 2 * rounds);
            let direct = simulate_unfolded(
                &inst.dpa,
                &inst.p,
                |q, n, x| {
                    let phase = phases.of(n);
                    let v = match x {
                        None => Vertex::Choose { q, phase },
                        Some(x) => Vertex::Respond { q, x, phase },
                    };
                    choice[index[&v]]
                },
                2 * rounds,
            );
            if quotient != direct {
                bad.push(inst.label.clone());
            }
        }
    }
    outcome(
        bad.is_empty(),
        format!(
            "{} arenas x {STRATEGY_PAIRS} strategy pairs, mismatches {bad:?}",
            corpus.len()
        ),
    )
}

fn psi_beta_litmus() -> Outcome {
    let spec = church_core::spec::SpecFile::parse(corpus::PSI_BETA).unwrap();
    let a = spec.compile().unwrap();
    let up = |s: &str| s.parse::<UpPredicate>().unwrap();
    let mut notes = Vec::new();

    let nonempty = synthesize(&a, &up("1;0")).unwrap();
    let y0 = up("1;0").to_lasso();
    let first = nonempty.winner == Player::II
        && gen::lasso_samples(1, LASSO_SAMPLES, 8)
            .iter()
            .all(|x| run_on_lasso(&nonempty.machine, x).unwrap().same_word(&y0));
    notes.push(format!(
        "P=1;0: winner {}, Y={{0}}: {first}",
        nonempty.winner
    ));

    // The arena is past the brute-force limit, so the oracles are the exact
    // check of the winner's machine and the WIN sentence.
    let p = up(";0");
    let empty = synthesize(&a, &p).unwrap();
    let machine_wins = empty.verify(&a, &p).unwrap();
    let roles = Roles::new(&spec.input, &spec.output, spec.param_name());
    let c = Compiler::default();
    let win = emit_win_sentence(&spec.formula, &roles, &c).unwrap();
    let ii_by_sentence = c
        .model_check(&win, &[(spec.param_name(), &p.to_lasso())])
        .unwrap();
    let second = empty.winner == Player::II;
    notes.push(format!(
        "P=;0: solver winner {} (machine verified: {machine_wins}), WIN sentence says II wins: {ii_by_sentence}, required II",
        empty.winner
    ));
    let consistent = machine_wins && ii_by_sentence == (empty.winner == Player::II);
    outcome(first && second && consistent, notes.join("; "))
}

fn main() -> ExitCode {
    let setup = Instant::now();
    let corpus = corpus_instances();
    let random = random_instances(42);
    let setup = setup.elapsed();

    type Check<'a> = Box<dyn Fn() -> Outcome + 'a>;
    let criteria: Vec<(u32, &str, Duration, Check)> = vec![
        (
            1,
            "determinacy and exclusivity",
            Duration::from_secs(60),
            Box::new(|| determinacy(&corpus, &random)),
        ),
        (
            2,
            "solver matches brute force",
            Duration::from_secs(60),
            Box::new(|| solver_oracle(&corpus)),
        ),
        (
            3,
            "strategy soundness",
            Duration::from_secs(60),
            Box::new(|| strategy_soundness(&corpus, &random)),
        ),
        (
            4,
            "compiler coherence",
            Duration::from_secs(120),
            Box::new(compiler_coherence),
        ),
        (
            5,
            "WIN sentence and strategy formulas",
            Duration::from_secs(300),
            Box::new(main_theorem),
        ),
        (
            6,
            "pumping bound period < 2n",
            Duration::from_secs(30),
            Box::new(pumping_bound),
        ),
        (
            7,
            "quotient faithfulness",
            Duration::from_secs(30),
            Box::new(|| quotient_faithfulness(&corpus)),
        ),
        (
            8,
            "psi-beta litmus",
            Duration::from_secs(10),
            Box::new(psi_beta_litmus),
        ),
    ];

    println!("setup: corpus and random instances synthesized in {setup:.2?}");
    let mut unexpected = Vec::new();
    for (n, name, limit, check) in criteria {
        let t = Instant::now();
        let o = check();
        let elapsed = t.elapsed() + if n <= 3 { setup } else { Duration::ZERO };
        let pass = o.pass && elapsed < limit;
        println!(
            "{} criterion {n} ({name}): {} [{elapsed:.2?}, limit {limit:?}]",
            if pass { "PASS" } else { "FAIL" },
            o.detail
        );
        if !pass && !EXPECTED_FAILURES.contains(&n) {
            unexpected.push(n);
        }
    }
    if unexpected.is_empty() {
        ExitCode::SUCCESS
    } else {
        println!("unexpected failures: {unexpected:?}");
        ExitCode::FAILURE
    }
}
