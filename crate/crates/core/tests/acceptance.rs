// SPDX-License-Identifier: Apache-2.0

//! Acceptance run. Prints one PASS/FAIL line per criterion and exits
//! non-zero when any criterion fails.

mod common;

use std::process::ExitCode;
use std::sync::Arc;
use std::time::{Duration, Instant};

use proptest::prelude::any;
use proptest::test_runner::{Config, RngAlgorithm, TestCaseError, TestRng, TestRunner};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use eampcf::eam::{add, add_aux, identity, interconvertible, reaches, run, succ1, succ2};
use eampcf::eam_typing::{fix_scheme, MachineTyper};
use eampcf::harness::{decompose, difftest, Verdict};
use eampcf::lang_typing::{infer_epcf, TypeEnv};
use eampcf::{
    compile_program, eval_epcf, eval_pcf, parse_program, parse_type, translate, Address, AddressTable, Closure, Fuel,
    Outcome, Subst, Term, VarFrame,
};

type Verdicts = Result<String, String>;
type Criterion = (&'static str, fn() -> Verdicts);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within(limit: Duration, started: Instant, what: &str) -> Result<(), String> {
    let took = started.elapsed();
    ensure(took < limit, || format!("{what} took {took:?}, limit {limit:?}"))
}

fn program(src: &str) -> Arc<Term> {
    parse_program(src).expect("program parses")
}

fn eam_numeral(p: &Arc<Term>, fuel: u64) -> Option<u64> {
    let mut t = AddressTable::new();
    let a = compile_program(&mut t, p).ok()?;
    let m = t.lookup(a);
    run(&mut t, &m, fuel).numeral()
}

const ADD: &str = "fix (\\f x y. ifz y x (f (succ x) (pred y)))";

/// Worked examples in all three semantics, plus the named machines.
fn criterion_1() -> Verdicts {
    let cases = [
        ("(\\x. succ x) 0".to_string(), 1),
        ("(\\x. x) 4".to_string(), 4),
        ("(\\x. succ (succ x)) 1".to_string(), 3),
        (format!("{ADD} 5 1"), 6),
    ];
    for (src, want) in &cases {
        let started = Instant::now();
        let p = program(src);
        let pcf = eval_pcf(&p, &mut Fuel::new(100_000)).as_numeral();
        let epcf = eval_epcf(&Subst::empty(), &p, &mut Fuel::new(100_000)).as_numeral();
        let eam = eam_numeral(&p, 5_000_000);
        ensure([pcf, epcf, eam] == [Some(*want); 3], || {
            format!("{src}: pcf={pcf:?} epcf={epcf:?} eam={eam:?}, want {want}")
        })?;
        within(Duration::from_secs(1), started, src)?;
    }
    let mut t = AddressTable::new();
    let s2 = succ2(&mut t);
    let ad = add(&mut t);
    let machines = [
        ("Succ1·[0]", succ1().append_tape(&[Address::Num(0)]), 1),
        ("I·[4]", identity().append_tape(&[Address::Num(4)]), 4),
        ("Succ2·[1]", s2.append_tape(&[Address::Num(1)]), 3),
        ("Add·[5,1]", ad.append_tape(&[Address::Num(5), Address::Num(1)]), 6),
        ("Add·[1,3]", ad.append_tape(&[Address::Num(1), Address::Num(3)]), 4),
    ];
    for (name, m, want) in machines {
        let got = run(&mut t, &m, 100_000).numeral();
        ensure(got == Some(want), || format!("{name} gave {got:?}, want {want}"))?;
    }
    Ok(format!("{} terms x 3 semantics, {} machines", cases.len(), 5))
}

/// The looping term times out everywhere at fuel 10⁶.
fn criterion_2() -> Verdicts {
    const FUEL: u64 = 1_000_000;
    let started = Instant::now();
    let omega = program("fix (\\x. x)");
    let pcf = eval_pcf(&omega, &mut Fuel::new(FUEL));
    let epcf = eval_epcf(&Subst::empty(), &omega, &mut Fuel::new(FUEL));
    ensure(matches!(pcf, Outcome::Timeout), || format!("pcf gave {pcf}"))?;
    ensure(matches!(epcf, Outcome::Timeout), || format!("epcf gave {epcf}"))?;
    let mut t = AddressTable::new();
    let a = compile_program(&mut t, &omega).map_err(|e| e.to_string())?;
    let m = t.lookup(a);
    let r = run(&mut t, &m, FUEL);
    ensure(r.is_timeout() && r.steps == FUEL, || {
        format!("machine gave {:?} after {}", r.outcome, r.steps)
    })?;
    within(Duration::from_secs(5), started, "divergence")?;
    Ok(format!("timeout in {:?}", started.elapsed()))
}

/// `(α₁ → … → αₙ → β → β) → α₁ → … → αₙ → β` with variables named in order.
fn fix_schema_text(n: usize) -> String {
    let names: Vec<String> = (0..=n).map(|k| format!("?{}", (b'a' + k as u8) as char)).collect();
    let args = &names[..n];
    let b = &names[n];
    let mut functional: Vec<&str> = args.iter().map(String::as_str).collect();
    functional.extend([b.as_str(), b.as_str()]);
    let mut whole = vec![format!("({})", functional.join(" -> "))];
    whole.extend(args.iter().cloned());
    whole.push(b.clone());
    whole.join(" -> ")
}

/// Typing goldens for named machines, the EPCF addition and the base rules.
fn criterion_3() -> Verdicts {
    let mut t = AddressTable::new();
    let s1 = t.intern(succ1());
    let d = MachineTyper::new().derivation(&t, s1).map_err(|e| e.to_string())?;
    let got: Vec<(&str, &str)> = d.steps.iter().map(|s| (s.rule, s.conclusion.as_str())).collect();
    let want = vec![
        ("R_∅", "int -> int"),
        ("R_()", "int -> int"),
        ("load_∅", "int -> int"),
        ("succ", "int"),
        ("call", "int"),
    ];
    ensure(got == want, || format!("Succ1 derivation {got:?}"))?;

    let ty = |s: &str| parse_type(s).expect("type parses");
    let s2 = succ2(&mut t);
    let s2 = t.intern(s2);
    let ad = add(&mut t);
    let ad = t.intern(ad);
    let mut typer = MachineTyper::new();
    ensure(typer.check(&t, s2, &ty("int -> int")) == Ok(true), || {
        "Succ2 is not int -> int".into()
    })?;
    let add_ty = typer.infer(&t, ad).to_string();
    ensure(add_ty == "int -> int -> int", || format!("Add : {add_ty}"))?;
    let aux = t.intern(add_aux());
    let fix_aux = t.apply(Address::FixN(0), aux);
    ensure(fix_aux == ad, || "Add is not Y₀·[#Add_aux]".into())?;

    let epcf = infer_epcf(&TypeEnv::new(), &program(ADD)).map_err(|e| e.to_string())?;
    ensure(epcf.to_string() == "int -> int -> int", || {
        format!("fix(add_aux) : {epcf}")
    })?;

    for n in 0..=3u32 {
        let num = typer.infer(&t, Address::Num(u64::from(n) * 7)).to_string();
        ensure(num == "int", || format!("Num({n}) : {num}"))?;
        let fix = typer.infer(&t, Address::FixN(n)).to_string();
        let want = fix_schema_text(n as usize);
        ensure(fix == want && fix_scheme(n).to_string() == want, || {
            format!("FixN({n}) : {fix}, want {want}")
        })?;
    }
    Ok("Succ1 derivation, Succ2, Add, EPCF addition, Num/FixN for n <= 3".into())
}

/// `Yₙ·[#M, d⃗] ↠ M·[d⃗, #(Yₙ·[#M, d⃗])]` at the level of addresses.
fn criterion_4() -> Verdicts {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    for case in 0..30 {
        let n = case % 3;
        let (mut t, pool) = common::seeded_table();
        let m = common::random_machine(&mut rng, &pool);
        let m = t.intern(m);
        let d: Vec<Address> = (0..n).map(|_| pool[rng.random_range(0..pool.len())]).collect();
        let mut args = vec![m];
        args.extend(&d);
        let start = t.apply_all(Address::FixN(n as u32), &args);
        let mut unfolded = d.clone();
        unfolded.push(start);
        let goal = t.apply_all(m, &unfolded);
        let s = t.lookup(start);
        ensure(reaches(&mut t, &s, goal, 1_000).is_some(), || {
            format!("case {case}: Y{n}·[{m}, {d:?}] never reaches {goal}")
        })?;
    }
    Ok("30 cases, n in {0,1,2}".into())
}

/// Properties (a) to (h), 300 cases each.
fn criterion_5() -> Verdicts {
    const CASES: u32 = 300;
    let started = Instant::now();
    let mut lines = Vec::new();
    for (name, prop) in common::PROPERTIES {
        let config = Config {
            cases: CASES,
            failure_persistence: None,
            ..Config::default()
        };
        let mut runner = TestRunner::new_with_rng(config, TestRng::deterministic_rng(RngAlgorithm::ChaCha));
        runner
            .run(&any::<u64>(), |seed| prop(seed).map_err(TestCaseError::fail))
            .map_err(|e| format!("{name}: {e}"))?;
        lines.push(name);
    }
    within(Duration::from_secs(60), started, "property suite")?;
    Ok(format!(
        "{} properties x {CASES} cases in {:?}",
        lines.len(),
        started.elapsed()
    ))
}

/// Differential run of 500 generated programs.
fn criterion_6() -> Verdicts {
    let started = Instant::now();
    let cfg = eampcf::harness::GenConfig {
        seed: 2024,
        ..Default::default()
    };
    let report = difftest(&cfg, 500, 100_000);
    let took = started.elapsed();
    for c in report
        .cases
        .iter()
        .filter(|c| matches!(c.verdict, Verdict::Disagree | Verdict::Fault))
    {
        println!("    {c}");
    }
    ensure(report.is_clean(), || report.summary())?;
    let agree = report.count(Verdict::Agree);
    ensure(agree * 10 >= report.cases.len() * 7, || {
        format!("only {agree} of {} fully terminating", report.cases.len())
    })?;
    within(Duration::from_secs(120), started, "difftest")?;
    Ok(format!("{} in {took:?}", report.summary()))
}

/// `#⟦(σ,M)⟧` and `#⟦V⟧` are interconvertible for terminating programs.
fn criterion_7() -> Verdicts {
    let mut done = 0;
    let mut nontrivial = 0;
    let mut seed = 7_000u64;
    while done < 100 {
        seed += 1;
        let p = common::program(seed, common::int(), 30);
        let c = decompose(&p, seed);
        let v = match eval_epcf(&c.subst, &c.term, &mut Fuel::new(100_000)) {
            Outcome::Value(v) => v,
            _ => continue,
        };
        if !c.subst.is_empty() {
            nontrivial += 1;
        }
        let mut t = AddressTable::new();
        let frame = VarFrame::empty();
        let a = translate(&mut t, &c, &frame).map_err(|e| e.to_string())?;
        let b = translate(&mut t, &Closure::bare(v.to_term()), &frame).map_err(|e| e.to_string())?;
        let r = interconvertible(&mut t, a, b, 5_000_000);
        ensure(r.convertible, || {
            format!(
                "seed {seed}: {p} with value {v} not interconvertible (fuel exhausted: {})",
                r.fuel_exhausted
            )
        })?;
        done += 1;
    }
    Ok(format!("{done} programs, {nontrivial} with a non-empty substitution"))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 7] = [
        ("worked examples", criterion_1),
        ("divergence", criterion_2),
        ("typing goldens", criterion_3),
        ("fixpoint unfolding", criterion_4),
        ("property suite", criterion_5),
        ("differential testing", criterion_6),
        ("interconvertibility", criterion_7),
    ];
    let mut failed = 0;
    for (k, (name, check)) in criteria.iter().enumerate() {
        let verdict = std::panic::catch_unwind(check).unwrap_or_else(|_| Err("panicked".into()));
        match verdict {
            Ok(detail) => println!("criterion {} {name}: PASS ({detail})", k + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {} {name}: FAIL ({why})", k + 1);
            }
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
