// SPDX-License-Identifier: Apache-2.0

//! Numeral, fixpoint and auxiliary machines, and a few named examples.

use super::machine::{Address, Instruction, Machine, Program};
use super::table::AddressTable;
use Instruction::*;

fn loads(range: std::ops::Range<u32>) -> impl Iterator<Item = Instruction> {
    range.map(Load)
}

fn build(r: u32, regs0: Option<Address>, instrs: Vec<Instruction>) -> Machine {
    let mut regs = vec![None; r as usize];
    if let Some(a) = regs0 {
        regs[0] = Some(a);
    }
    Machine::new(regs, Program::new(&instrs), Vec::new()).expect("builder programs are valid")
}

/// `n̄ = ⟨R₀ = n, ε, []⟩`
pub fn numeral_machine(n: u64) -> Machine {
    Machine::numeral(n)
}

pub(crate) fn fix_program(n: u32) -> Program {
    let mut p: Vec<Instruction> = loads(1..n + 2).collect();
    p.extend((1..n + 2).map(|k| App(0, k, 0)));
    p.extend((2..n + 2).map(|k| App(1, k, 1)));
    p.extend([App(1, 0, 1), Call(1)]);
    Program::new(&p)
}

/// `Yₙ`, holding its own address `fix:n` in `R₀`.
pub fn fix_machine(n: u32) -> Machine {
    let mut regs = vec![None; n as usize + 2];
    regs[0] = Some(Address::FixN(n));
    Machine::new_unchecked(regs, fix_program(n), Vec::new())
}

/// `Projⁿᵢ · [d₁,…,dₙ] ↠ dᵢ`, for `1 ≤ i ≤ n`.
pub fn proj(n: u32, i: u32) -> Machine {
    assert!(1 <= i && i <= n, "projection index {i} out of 1..={n}");
    let mut p: Vec<Instruction> = loads(0..n).collect();
    p.push(Call(i - 1));
    build(n, None, p)
}

/// `Appⁿ · [a, b, d⃗] ↠ a · [d⃗, b·d⃗]`
pub fn app_n(n: u32) -> Machine {
    let mut p: Vec<Instruction> = loads(0..n + 2).collect();
    p.extend((2..n + 2).map(|k| App(1, k, 1)));
    p.extend((2..n + 2).map(|k| App(0, k, 0)));
    p.extend([App(0, 1, 0), Call(0)]);
    build(n + 2, None, p)
}

fn arith_n(n: u32, op: Instruction) -> Machine {
    let mut p: Vec<Instruction> = loads(0..n + 1).collect();
    p.extend((1..n + 1).map(|k| App(0, k, 0)));
    p.extend([op, Call(0)]);
    build(n + 1, None, p)
}

/// `Predⁿ · [a, d⃗] ↠ pred(a·d⃗)`
pub fn pred_n(n: u32) -> Machine {
    arith_n(n, Pred(0, 0))
}

/// `Succⁿ · [a, d⃗] ↠ succ(a·d⃗)`
pub fn succ_n(n: u32) -> Machine {
    arith_n(n, Succ(0, 0))
}

/// `Ifzⁿ · [a, b, c, d⃗]` tests `a·d⃗` and continues with `b·d⃗` or `c·d⃗`.
pub fn ifz_n(n: u32) -> Machine {
    let mut p: Vec<Instruction> = loads(0..n + 3).collect();
    for r in 0..3 {
        p.extend((3..n + 3).map(|k| App(r, k, r)));
    }
    p.extend([Test(0, 1, 2, 0), Call(0)]);
    build(n + 3, None, p)
}

/// `I = ⟨R₀ = ∅, Load 0; Call 0, []⟩`
pub fn identity() -> Machine {
    build(1, None, vec![Load(0), Call(0)])
}

/// Successor of its single argument.
pub fn succ1() -> Machine {
    build(1, None, vec![Load(0), Succ(0, 0), Call(0)])
}

/// Applies `Succ1` twice to its argument.
pub fn succ2(table: &mut AddressTable) -> Machine {
    let s1 = table.intern(succ1());
    build(2, None, vec![Load(0), Load(1), App(0, 1, 1), App(0, 1, 1), Call(1)]).append_tape(&[s1])
}

/// The functional of addition: `Add_aux · [f, x, y]` returns `y` when
/// `x = 0`, else `f · [x−1, y+1]`.
pub fn add_aux() -> Machine {
    build(
        5,
        None,
        vec![
            Load(0),
            Load(1),
            Load(2),
            Pred(1, 3),
            Succ(2, 4),
            App(0, 3, 0),
            App(0, 4, 0),
            Test(1, 2, 0, 0),
            Call(0),
        ],
    )
}

/// `Add = Y₀ · [#Add_aux]`
pub fn add(table: &mut AddressTable) -> Machine {
    let aux = table.intern(add_aux());
    fix_machine(0).append_tape(&[aux])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fix_zero_program() {
        assert_eq!(
            fix_machine(0).program().to_vec(),
            vec![Load(1), App(0, 1, 0), App(1, 0, 1), Call(1)]
        );
        assert_eq!(fix_machine(2).r(), 4);
        assert_eq!(
            fix_machine(1).program().to_vec(),
            vec![
                Load(1),
                Load(2),
                App(0, 1, 0),
                App(0, 2, 0),
                App(1, 2, 1),
                App(1, 0, 1),
                Call(1)
            ]
        );
    }

    #[test]
    fn auxiliary_shapes() {
        assert_eq!(proj(3, 2).program().to_string(), "LOAD 0;LOAD 1;LOAD 2;CALL 1");
        assert_eq!(proj(3, 2).r(), 3);
        assert_eq!(
            pred_n(2).program().to_string(),
            "LOAD 0;LOAD 1;LOAD 2;APP 0 1 0;APP 0 2 0;PRED 0 0;CALL 0"
        );
        assert_eq!(succ_n(0).program().to_string(), "LOAD 0;SUCC 0 0;CALL 0");
        assert_eq!(succ_n(0), succ1());
        assert_eq!(
            app_n(1).program().to_string(),
            "LOAD 0;LOAD 1;LOAD 2;APP 1 2 1;APP 0 2 0;APP 0 1 0;CALL 0"
        );
        assert_eq!(app_n(0).r(), 2);
        assert_eq!(
            ifz_n(0).program().to_string(),
            "LOAD 0;LOAD 1;LOAD 2;TEST 0 1 2 0;CALL 0"
        );
        assert_eq!(ifz_n(1).r(), 4);
    }

    #[test]
    #[should_panic]
    fn projection_index_zero_is_rejected() {
        let _ = proj(2, 0);
    }
}
