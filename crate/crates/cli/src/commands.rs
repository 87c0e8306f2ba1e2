use std::fmt::Write as _;
use std::fs;
use std::io::Read as _;
use std::path::Path;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use church_core::definability::{emit_strategy_formula, emit_win_sentence, Roles};
use church_core::formula::{parse, Formula};
use church_core::omega::{Dpa, Lasso};
use church_core::predicate::UpPredicate;
use church_core::solver::{brute_force_solve, Player, BRUTE_FORCE_LIMIT};
use church_core::spec::SpecFile;
use church_core::strategy::{
    cross_play, run_on_lasso, trace, CMachine, Machine, Operator, SCMachine,
};
use church_core::synthesis::synthesize;
use church_core::{corpus, gen};
use rand::Rng;

use crate::{FormulaKind, Side};

const DEFAULT_SEED: u64 = 7;

fn player(side: Side) -> Player {
    match side {
        Side::I => Player::I,
        Side::II => Player::II,
    }
}

fn read_spec(path: &Path, param: Option<&str>) -> Result<SpecFile> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let mut spec = SpecFile::parse(&text).with_context(|| format!("in {}", path.display()))?;
    if let Some(literal) = param {
        let p: UpPredicate = literal.parse()?;
        let name = spec.param_name().to_string();
        spec.param = Some((name, p));
    }
    Ok(spec)
}

/// Lasso in canonical `u;v` form.
fn show(w: &Lasso) -> Result<String> {
    Ok(UpPredicate::from_lasso(w)?.canonicalize().to_string())
}

/// Opponents for the cross-play self-check: a few fixed machines, then
/// random ones from `seed`.
fn opponents_i(seed: u64, count: usize) -> Vec<SCMachine> {
    let mut r = gen::rng(seed);
    let mut v = vec![
        SCMachine::constant(false),
        SCMachine::constant(true),
        SCMachine::delay(false),
        SCMachine::negate_previous(false),
    ];
    v.extend((0..count).map(|_| {
        let n = r.gen_range(1..=4);
        gen::scmachine(&mut r, n)
    }));
    v
}

fn opponents_ii(seed: u64, count: usize) -> Vec<CMachine> {
    let mut r = gen::rng(seed);
    let mut v = vec![
        CMachine::constant(false),
        CMachine::constant(true),
        CMachine::copy(),
    ];
    v.extend((0..count).map(|_| {
        let n = r.gen_range(1..=4);
        gen::cmachine(&mut r, n)
    }));
    v
}

/// Cross-play the winner's machine against each opponent; returns how many
/// plays refuted the opponent, which should be all of them.
fn cross_check(
    m: &Machine,
    a: &Dpa,
    p: &UpPredicate,
    seed: u64,
    count: usize,
) -> Result<(usize, usize)> {
    let mut total = 0;
    let mut refuted = 0;
    match m {
        Machine::C(f) => {
            for g in opponents_i(seed, count) {
                total += 1;
                refuted += (cross_play(f, &g, a, p)?.refuted == Player::I) as usize;
            }
        }
        Machine::Sc(g) => {
            for f in opponents_ii(seed, count) {
                total += 1;
                refuted += (cross_play(&f, g, a, p)?.refuted == Player::II) as usize;
            }
        }
    }
    Ok((refuted, total))
}

pub fn synth(
    path: &Path,
    param: Option<&str>,
    out_dir: &Path,
    expect: Option<Side>,
    seed: Option<u64>,
    opponents: usize,
) -> Result<ExitCode> {
    let spec = read_spec(path, param)?;
    let seed = seed.or(spec.seed).unwrap_or(DEFAULT_SEED);
    let a = spec.compile()?;
    let p = spec.parameter();
    let s = synthesize(&a, &p)?;
    if !s.verify(&a, &p)? {
        bail!("extracted machine failed exact verification");
    }
    let (refuted, total) = cross_check(&s.machine, &a, &p, seed, opponents)?;
    if refuted != total {
        bail!(
            "cross-play refuted the winner in {} of {total} plays",
            total - refuted
        );
    }

    let stem = path.file_stem().and_then(|s| s.to_str()).unwrap_or("spec");
    fs::create_dir_all(out_dir).with_context(|| format!("creating {}", out_dir.display()))?;
    let table = out_dir.join(format!("{stem}.machine"));
    let dot = out_dir.join(format!("{stem}.dot"));
    fs::write(&table, s.machine.to_table())
        .with_context(|| format!("writing {}", table.display()))?;
    fs::write(&dot, s.machine.to_dot()).with_context(|| format!("writing {}", dot.display()))?;

    let v1 = s.game.owner.iter().filter(|&&o| o == Player::I).count();
    let mut report = String::new();
    writeln!(report, "spec: {}", path.display())?;
    writeln!(report, "formula: {}", spec.formula)?;
    writeln!(report, "parameter: {} = {}", spec.param_name(), p)?;
    writeln!(report, "automaton: {} states", a.num_states())?;
    writeln!(
        report,
        "arena: {} vertices ({} for I, {} for II)",
        s.game.len(),
        v1,
        s.game.len() - v1
    )?;
    writeln!(report, "winner: {}", s.winner)?;
    writeln!(
        report,
        "machine: {}, {} states",
        s.machine.kind(),
        s.machine.num_states()
    )?;
    writeln!(report, "verified: exact")?;
    writeln!(
        report,
        "cross-play: {refuted}/{total} opponents refuted (seed {seed})"
    )?;
    writeln!(report, "table: {}", table.display())?;
    writeln!(report, "dot: {}", dot.display())?;
    print!("{report}");

    if let Some(side) = expect {
        if player(side) != s.winner {
            eprintln!("expected winner {}, got {}", player(side), s.winner);
            return Ok(ExitCode::from(2));
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn read_formula(file: Option<&Path>, expr: Option<&str>) -> Result<Formula> {
    let text = match (file, expr) {
        (_, Some(e)) => e.to_string(),
        (Some(f), None) if f != Path::new("-") => {
            fs::read_to_string(f).with_context(|| format!("reading {}", f.display()))?
        }
        _ => {
            let mut s = String::new();
            std::io::stdin().read_to_string(&mut s)?;
            s
        }
    };
    Ok(parse(&text)?)
}

pub fn check(file: Option<&Path>, expr: Option<&str>, params: &[String]) -> Result<ExitCode> {
    let f = read_formula(file, expr)?;
    let mut bound = Vec::new();
    for b in params {
        let (name, literal) = b
            .split_once('=')
            .with_context(|| format!("binding `{b}` is not NAME=u;v"))?;
        let p: UpPredicate = literal.parse()?;
        bound.push((name.trim().to_string(), p.to_lasso()));
    }
    let env: Vec<(&str, &Lasso)> = bound.iter().map(|(n, w)| (n.as_str(), w)).collect();
    let verdict = church_core::mso::model_check(&f, &env)?;
    println!("{verdict}");
    Ok(ExitCode::SUCCESS)
}

pub fn simulate(path: &Path, input: &str, steps: usize) -> Result<ExitCode> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let m = Machine::from_table(&text)?;
    let w = input.parse::<UpPredicate>()?.to_lasso();
    let bits = |it: &mut dyn Iterator<Item = bool>| {
        it.map(|b| if b { '1' } else { '0' }).collect::<String>()
    };
    let t = trace(&m, &w, steps);
    println!("input:  {}", bits(&mut t.iter().map(|&(a, _)| a)));
    println!("output: {}", bits(&mut t.iter().map(|&(_, o)| o)));
    println!("output lasso: {}", show(&run_on_lasso(&m, &w)?)?);
    Ok(ExitCode::SUCCESS)
}

pub fn emit_formula(path: &Path, kind: FormulaKind, param: Option<&str>) -> Result<ExitCode> {
    let spec = read_spec(path, param)?;
    let roles = Roles::new(&spec.input, &spec.output, spec.param_name());
    let c = spec.compiler();
    match kind {
        FormulaKind::Win => {
            let f = emit_win_sentence(&spec.formula, &roles, &c)?;
            println!("# holds iff player II wins; free: {}", spec.param_name());
            println!("{f}");
        }
        FormulaKind::Strategy => {
            let p = spec.parameter();
            let (winner, f) = emit_strategy_formula(&spec.formula, &roles, &p, &c)?;
            println!(
                "# operator of player {winner} for {} = {p}",
                spec.param_name()
            );
            println!("{f}");
        }
    }
    Ok(ExitCode::SUCCESS)
}

pub fn selftest(seed: u64, count: usize) -> Result<ExitCode> {
    let mut failures = 0;
    let entries = corpus::entries();
    let mut ok = 0;
    for e in &entries {
        let spec = e.spec()?;
        let a = spec.compile()?;
        let p = spec.parameter();
        let s = synthesize(&a, &p)?;
        let good = s.winner == e.winner && s.verify(&a, &p)? && {
            let (r, t) = cross_check(&s.machine, &a, &p, seed, 4)?;
            r == t
        };
        if good {
            ok += 1;
        } else {
            failures += 1;
            println!("FAIL {}", e.label());
        }
    }
    println!("corpus: {ok}/{} ok", entries.len());

    let mut r = gen::rng(seed);
    let mut ok = 0;
    for _ in 0..count {
        let states = r.gen_range(1..=3);
        let a = gen::dpa(&mut r, 3, states, 4);
        let len = r.gen_range(1..=2);
        let d = r.gen_range(0..len);
        let bits: Vec<bool> = (0..len).map(|_| r.gen_bool(0.5)).collect();
        let p = UpPredicate::new(bits[..d].to_vec(), bits[d..].to_vec())?;
        let s = synthesize(&a, &p)?;
        let mut good = s.verify(&a, &p)?;
        if s.game.len() <= BRUTE_FORCE_LIMIT {
            good &= brute_force_solve(&s.game)?.winner == s.solution.winner;
        }
        let (rf, t) = cross_check(&s.machine, &a, &p, seed, 2)?;
        good &= rf == t;
        if good {
            ok += 1;
        } else {
            failures += 1;
        }
    }
    println!("random: {ok}/{count} ok (seed {seed})");
    if failures > 0 {
        bail!("{failures} self-test case(s) failed");
    }
    Ok(ExitCode::SUCCESS)
}
