// SPDX-License-Identifier: Apache-2.0

//! Properties shared by the proptest suite and the acceptance run. Each
//! takes a seed and returns a description of the first violation.

#![allow(dead_code)]

use std::ops::ControlFlow;
use std::sync::Arc;

use rand::seq::IndexedRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use eampcf::eam::{add, identity, run, step, succ1, walk, Instruction, RunOutcome, StepResult};
use eampcf::eam_typing::MachineTyper;
use eampcf::frontend::{parse_term, print_term};
use eampcf::harness::{gen_closure, gen_typed_program, GenConfig};
use eampcf::syntax::{alpha_eq, alpha_eq_closure, flatten, substitute};
use eampcf::{
    compile_program, translate, Address, AddressTable, Closure, Machine, Program, SimpleType, Term, Var, VarFrame,
};

pub type Check = Result<(), String>;

pub fn int() -> SimpleType {
    SimpleType::Int
}

pub fn int_to_int() -> SimpleType {
    SimpleType::arrow(SimpleType::Int, SimpleType::Int)
}

/// Step budget for machine runs inside properties.
pub const STEPS: u64 = 20_000;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Check {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

pub fn program(seed: u64, target: SimpleType, max_size: usize) -> Arc<Term> {
    gen_typed_program(&GenConfig {
        seed,
        max_size,
        target,
        ..GenConfig::default()
    })
}

/// A table seeded with a few named machines, and their addresses.
pub fn seeded_table() -> (AddressTable, Vec<Address>) {
    let mut t = AddressTable::new();
    let mut pool = vec![
        Address::Num(0),
        Address::Num(1),
        Address::Num(3),
        Address::FixN(0),
        Address::FixN(1),
    ];
    pool.push(t.intern(identity()));
    pool.push(t.intern(succ1()));
    let a = add(&mut t);
    pool.push(t.intern(a));
    (t, pool)
}

/// A random valid machine over addresses from `pool`.
pub fn random_machine(rng: &mut ChaCha8Rng, pool: &[Address]) -> Machine {
    use Instruction::*;
    loop {
        let r = rng.random_range(1..=4u32);
        let regs: Vec<Option<Address>> = (0..r)
            .map(|_| rng.random_bool(0.5).then(|| *pool.choose(rng).unwrap()))
            .collect();
        let mut prog: Vec<Instruction> = (0..r)
            .filter(|&i| regs[i as usize].is_none() || rng.random_bool(0.2))
            .map(Load)
            .collect();
        let reg = |rng: &mut ChaCha8Rng| rng.random_range(0..r);
        for _ in 0..rng.random_range(0..4) {
            prog.push(match rng.random_range(0..4) {
                0 => App(reg(rng), reg(rng), reg(rng)),
                1 => Pred(reg(rng), reg(rng)),
                2 => Succ(reg(rng), reg(rng)),
                _ => Test(reg(rng), reg(rng), reg(rng), reg(rng)),
            });
        }
        prog.push(Call(reg(rng)));
        let tape: Vec<Address> = (0..rng.random_range(0..4))
            .map(|_| *pool.choose(rng).unwrap())
            .collect();
        if let Ok(m) = Machine::new(regs, Program::new(&prog), tape) {
            return m;
        }
    }
}

/// (a) `step` is a function and its three outcomes match the state shape.
pub fn step_determinism(seed: u64) -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (mut t, pool) = seeded_table();
    let mut m = random_machine(&mut rng, &pool);
    for _ in 0..50 {
        let first = step(&mut t, &m);
        let second = step(&mut t, &m);
        ensure(first == second, || format!("two steps of {m} differ"))?;
        match first {
            StepResult::Final => return ensure(m.is_final(), || format!("{m} reported final")),
            StepResult::Err => return ensure(!m.is_final(), || format!("final {m} reported error")),
            StepResult::Next(n) => {
                ensure(!m.is_final(), || format!("final {m} stepped"))?;
                m = n;
            }
        }
    }
    Ok(())
}

/// (b) `M → N` implies `M·T → N·T`.
pub fn tape_extension(seed: u64) -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (mut t, pool) = seeded_table();
    let mut m = random_machine(&mut rng, &pool);
    let extra: Vec<Address> = (0..rng.random_range(1..4))
        .map(|_| *pool.choose(&mut rng).unwrap())
        .collect();
    for _ in 0..30 {
        let StepResult::Next(n) = step(&mut t, &m) else {
            return Ok(());
        };
        let ext = step(&mut t, &m.append_tape(&extra));
        ensure(ext == StepResult::Next(n.append_tape(&extra)), || {
            format!("extending the tape of {m} changed its step")
        })?;
        m = n;
    }
    // Cells of the seeded table do not exist in the compiled program's table.
    let extra: Vec<Address> = extra
        .into_iter()
        .filter(|a| !matches!(a, Address::Cell(_)))
        .chain([Address::Num(2)])
        .collect();
    compiled_states(seed, 200, |t, s| match step(t, s) {
        StepResult::Next(n) => ensure(
            step(t, &s.append_tape(&extra)) == StepResult::Next(n.append_tape(&extra)),
            || format!("extending the tape of {s} changed its step"),
        ),
        _ => Ok(()),
    })
    .map(|_| ())
}

/// Compiles a generated `int` program and runs `visit` on every state.
fn compiled_states(
    seed: u64,
    limit: u64,
    mut visit: impl FnMut(&mut AddressTable, &Machine) -> Check,
) -> Result<RunOutcome, String> {
    let p = program(seed, int(), 20);
    let mut t = AddressTable::new();
    let a = compile_program(&mut t, &p).map_err(|e| e.to_string())?;
    let m = t.lookup(a);
    let mut failure = Ok(());
    let r = walk(&mut t, &m, limit, |t, _, s| match visit(t, s) {
        Ok(()) => ControlFlow::Continue(()),
        Err(e) => {
            failure = Err(format!("{e} (program {})", print_term(&p)));
            ControlFlow::Break(())
        }
    });
    failure.map(|()| r.outcome)
}

/// (c) Every state reached from a compiled `int` program has type `int`.
pub fn subject_reduction(seed: u64) -> Check {
    let mut typer = MachineTyper::new();
    compiled_states(seed, 300, |t, s| {
        let a = t.intern(s.clone());
        match typer.check(t, a, &int()) {
            Ok(true) => Ok(()),
            other => Err(format!("state {s} lost type int: {other:?}")),
        }
    })
    .map(|_| ())
}

/// (d) A typed machine never raises an error.
pub fn typed_never_errs(seed: u64) -> Check {
    let p = program(seed, int(), 20);
    let mut t = AddressTable::new();
    let a = compile_program(&mut t, &p).map_err(|e| e.to_string())?;
    let m = t.lookup(a);
    ensure(!run(&mut t, &m, STEPS).is_err(), || {
        format!("{} raised an error", print_term(&p))
    })
}

/// (e) A machine of type `int` that reaches a final state is a numeral.
pub fn final_int_is_numeral(seed: u64) -> Check {
    let p = program(seed, int(), 20);
    let mut t = AddressTable::new();
    let a = compile_program(&mut t, &p).map_err(|e| e.to_string())?;
    let m = t.lookup(a);
    match run(&mut t, &m, STEPS).outcome {
        RunOutcome::Final(f) => ensure(f.numeral_value().is_some(), || {
            format!("{} ended in {f}", print_term(&p))
        }),
        _ => Ok(()),
    }
}

/// (f) `(σ + [x ← (ρ,N)], M)* = (σ,M)*[x := (ρ,N)*]`
pub fn substitution_lemma(seed: u64) -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let x = Var::fresh("x");
    let z = Var::fresh("z");
    let m = gen_closure(rng.random(), &[x.clone(), z.clone()], rng.random_range(1..12));
    let n = gen_closure(rng.random(), &[z], rng.random_range(1..8));
    let lhs = flatten(&Closure::new(m.subst.extend(x.clone(), n.clone()), m.term.clone()));
    let rhs = substitute(&flatten(&m), &x, &flatten(&n));
    ensure(alpha_eq(&lhs, &rhs), || format!("{lhs} differs from {rhs}"))
}

/// (g) A compiled typed term checks at its type, with the frame variables
/// as leading arguments.
pub fn typability_transfer(seed: u64) -> Check {
    let (target, size) = match seed % 3 {
        0 => (int(), 20),
        1 => (int_to_int(), 16),
        _ => (SimpleType::arrows([int(), int()], int()), 16),
    };
    let p = program(seed, target.clone(), size);
    let mut t = AddressTable::new();
    let a = compile_program(&mut t, &p).map_err(|e| e.to_string())?;
    ensure(MachineTyper::new().check(&t, a, &target) == Ok(true), || {
        format!("{} does not check at {target}", print_term(&p))
    })?;
    if let (Term::Lam(x, s, body), SimpleType::Arrow(_, _)) = (&*p, &target) {
        let frame = VarFrame::new(vec![x.clone()]).map_err(|e| e.to_string())?;
        let b = translate(&mut t, &Closure::new(s.clone(), body.clone()), &frame).map_err(|e| e.to_string())?;
        ensure(MachineTyper::new().check(&t, b, &target) == Ok(true), || {
            format!("body of {} under [{x}] does not check at {target}", print_term(&p))
        })?;
    }
    Ok(())
}

/// (h) Printing then parsing gives back an α-equal term.
pub fn parse_print_roundtrip(seed: u64) -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let c = gen_closure(rng.random(), &[], rng.random_range(1..20));
    let t = Term::apps(
        Term::lam_with(&Var::fresh("w"), c.subst.clone(), c.term.clone()),
        [Term::zero()],
    );
    for t in [t, program(seed, int(), 20)] {
        let text = print_term(&t);
        let back = parse_term(&text).map_err(|e| format!("'{text}' does not parse: {e}"))?;
        ensure(alpha_eq(&t, &back), || {
            format!("'{text}' reparses as '{}'", print_term(&back))
        })?;
    }
    let c2 = Closure::new(c.subst.clone(), c.term.clone());
    ensure(alpha_eq_closure(&c, &c2), || "closure is not α-equal to itself".into())
}

pub type Property = (&'static str, fn(u64) -> Check);

pub const PROPERTIES: [Property; 8] = [
    ("(a) step determinism and outcome exclusivity", step_determinism),
    ("(b) tape extension", tape_extension),
    ("(c) subject reduction", subject_reduction),
    ("(d) typed machines never err", typed_never_errs),
    ("(e) final int machines are numerals", final_int_is_numeral),
    ("(f) substitution lemma", substitution_lemma),
    ("(g) typability transfer", typability_transfer),
    ("(h) parse/print round trip", parse_print_roundtrip),
];
