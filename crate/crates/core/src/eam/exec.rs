// SPDX-License-Identifier: Apache-2.0

//! Small-step execution.
//!
//! The forcing rules for `Pred`, `Succ` and `Test` step the machine stored
//! in the scrutinee register and write the reduct's address back. Doing
//! that literally would intern one machine per nesting level on every step.
//! The engine instead keeps the forcing chain as a stack of live machines,
//! `chain[k + 1]` being the machine currently stored (un-interned) in the
//! scrutinee register of `chain[k]`. One [`Engine::advance`] performs
//! exactly one step of the outermost machine; [`Engine::materialize`]
//! rebuilds that machine when it has to be observed.

use std::collections::HashSet;
use std::ops::ControlFlow;

use super::machine::{Address, Instruction, Machine};
use super::table::AddressTable;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum StepResult {
    Next(Machine),
    Final,
    Err,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RunOutcome {
    Final(Machine),
    Err,
    /// The state reached when fuel ran out.
    Timeout(Machine),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RunResult {
    pub outcome: RunOutcome,
    /// Steps performed.
    pub steps: u64,
}

impl RunResult {
    /// The numeral of a final numeral machine.
    pub fn numeral(&self) -> Option<u64> {
        match &self.outcome {
            RunOutcome::Final(m) => m.numeral_value(),
            _ => None,
        }
    }

    pub fn is_err(&self) -> bool {
        matches!(self.outcome, RunOutcome::Err)
    }

    pub fn is_timeout(&self) -> bool {
        matches!(self.outcome, RunOutcome::Timeout(_))
    }
}

enum Advance {
    Stepped,
    Final,
    Err,
}

struct Engine {
    chain: Vec<Machine>,
}

fn scrutinee(m: &Machine) -> u32 {
    match m.prog.head() {
        Some(Instruction::Pred(i, _) | Instruction::Succ(i, _) | Instruction::Test(i, ..)) => i,
        _ => unreachable!("only arithmetic and tests force their scrutinee"),
    }
}

/// Performs `Pred`/`Succ`/`Test` on a scrutinee whose machine is final.
fn finish_op(m: &mut Machine, value: Address) -> bool {
    let Address::Num(n) = value else {
        return false;
    };
    match m.prog.head() {
        Some(Instruction::Pred(_, j)) => m.write(j, Address::Num(n.saturating_sub(1))),
        Some(Instruction::Succ(_, j)) => match n.checked_add(1) {
            Some(s) => m.write(j, Address::Num(s)),
            None => return false,
        },
        Some(Instruction::Test(_, j, k, l)) => {
            let branch = if n == 0 { m.reg(j) } else { m.reg(k) };
            m.write(l, branch);
        }
        _ => unreachable!(),
    }
    m.prog = m.prog.tail();
    true
}

impl Engine {
    fn new(m: Machine) -> Engine {
        Engine { chain: vec![m] }
    }

    fn advance(&mut self, table: &mut AddressTable) -> Advance {
        loop {
            let d = self.chain.len() - 1;
            if self.chain[d].is_final() {
                if d == 0 {
                    return Advance::Final;
                }
                let inner = self.chain.pop().expect("non-empty chain");
                let a = table.intern(inner);
                let parent = self.chain.last_mut().expect("parent frame");
                let i = scrutinee(parent);
                parent.write(i, a);
                return if finish_op(parent, a) {
                    Advance::Stepped
                } else {
                    Advance::Err
                };
            }
            let top = &mut self.chain[d];
            match top.prog.head().expect("non-final machines have a program") {
                Instruction::Load(i) => {
                    let a = top.tape.remove(0);
                    top.write(i, a);
                    top.prog = top.prog.tail();
                }
                Instruction::App(i, j, k) => {
                    let a = table.apply(top.reg(i), top.reg(j));
                    top.write(k, a);
                    top.prog = top.prog.tail();
                }
                Instruction::Call(i) => {
                    let mut next = table.lookup(top.reg(i));
                    next.tape.append(&mut top.tape);
                    *top = next;
                }
                Instruction::Pred(i, _) | Instruction::Succ(i, _) | Instruction::Test(i, ..) => {
                    let a = top.reg(i);
                    if let Address::Num(_) = a {
                        finish_op(top, a);
                    } else {
                        let inner = table.lookup(a);
                        if inner.is_final() {
                            return Advance::Err;
                        }
                        // The step happens inside the scrutinee.
                        self.chain.push(inner);
                        continue;
                    }
                }
            }
            return Advance::Stepped;
        }
    }

    /// The outermost machine, with each forced register holding the address
    /// of the current state of its inner machine.
    fn materialize(&self, table: &mut AddressTable) -> Machine {
        let mut frames = self.chain.iter().rev();
        let mut m = frames.next().expect("non-empty chain").clone();
        for frame in frames {
            let a = table.intern(m);
            m = frame.clone();
            m.write(scrutinee(&m), a);
        }
        m
    }
}

/// One small step.
pub fn step(table: &mut AddressTable, m: &Machine) -> StepResult {
    let mut e = Engine::new(m.clone());
    match e.advance(table) {
        Advance::Stepped => StepResult::Next(e.materialize(table)),
        Advance::Final => StepResult::Final,
        Advance::Err => StepResult::Err,
    }
}

/// Runs for at most `fuel` steps.
pub fn run(table: &mut AddressTable, m: &Machine, fuel: u64) -> RunResult {
    let mut e = Engine::new(m.clone());
    let mut steps = 0;
    loop {
        if steps == fuel {
            let m = e.materialize(table);
            let outcome = if m.is_final() {
                RunOutcome::Final(m)
            } else {
                RunOutcome::Timeout(m)
            };
            return RunResult { outcome, steps };
        }
        match e.advance(table) {
            Advance::Stepped => steps += 1,
            Advance::Final => {
                let m = e.chain.pop().expect("single frame");
                return RunResult {
                    outcome: RunOutcome::Final(m),
                    steps,
                };
            }
            Advance::Err => {
                return RunResult {
                    outcome: RunOutcome::Err,
                    steps,
                }
            }
        }
    }
}

/// Runs like [`run`], showing every state (the initial one included) to
/// `visit` together with its index. `visit` may stop the run early, in
/// which case the outcome is a timeout at that state.
pub fn walk<F>(table: &mut AddressTable, m: &Machine, fuel: u64, mut visit: F) -> RunResult
where
    F: FnMut(&mut AddressTable, u64, &Machine) -> ControlFlow<()>,
{
    let mut e = Engine::new(m.clone());
    let mut current = m.clone();
    let mut steps = 0;
    loop {
        if visit(table, steps, &current).is_break() {
            return RunResult {
                outcome: RunOutcome::Timeout(current),
                steps,
            };
        }
        if steps == fuel {
            let outcome = if current.is_final() {
                RunOutcome::Final(current)
            } else {
                RunOutcome::Timeout(current)
            };
            return RunResult { outcome, steps };
        }
        match e.advance(table) {
            Advance::Stepped => {
                steps += 1;
                current = e.materialize(table);
            }
            Advance::Final => {
                return RunResult {
                    outcome: RunOutcome::Final(current),
                    steps,
                }
            }
            Advance::Err => {
                return RunResult {
                    outcome: RunOutcome::Err,
                    steps,
                }
            }
        }
    }
}

/// The step index at which the run of `m` reaches the machine at `target`.
pub fn reaches(table: &mut AddressTable, m: &Machine, target: Address, fuel: u64) -> Option<u64> {
    let goal = table.try_lookup(target)?;
    let mut hit = None;
    walk(table, m, fuel, |_, k, state| {
        if *state == goal {
            hit = Some(k);
            ControlFlow::Break(())
        } else {
            ControlFlow::Continue(())
        }
    });
    hit
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Interconvertibility {
    pub convertible: bool,
    /// Set when the answer is `false` only because fuel ran out.
    pub fuel_exhausted: bool,
}

/// `M ↔_c N` up to `fuel` steps on each side.
pub fn interconvertible(table: &mut AddressTable, a: Address, b: Address, fuel: u64) -> Interconvertibility {
    if a == b {
        return Interconvertibility {
            convertible: true,
            fuel_exhausted: false,
        };
    }
    let (ma, mb) = (table.lookup(a), table.lookup(b));
    let ra = run(table, &ma, fuel);
    let rb = run(table, &mb, fuel);
    // Reduction is deterministic, so two terminating runs meet iff their
    // final states coincide.
    if let (RunOutcome::Final(fa), RunOutcome::Final(fb)) = (&ra.outcome, &rb.outcome) {
        let convertible = table.intern(fa.clone()) == table.intern(fb.clone());
        return Interconvertibility {
            convertible,
            fuel_exhausted: false,
        };
    }
    let mut seen = HashSet::new();
    walk(table, &ma, fuel, |t, _, s| {
        seen.insert(t.intern(s.clone()));
        ControlFlow::Continue(())
    });
    let mut convertible = false;
    walk(table, &mb, fuel, |t, _, s| {
        if seen.contains(&t.intern(s.clone())) {
            convertible = true;
            ControlFlow::Break(())
        } else {
            ControlFlow::Continue(())
        }
    });
    Interconvertibility {
        convertible,
        fuel_exhausted: !convertible && (ra.is_timeout() || rb.is_timeout()),
    }
}
