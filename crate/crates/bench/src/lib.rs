// SPDX-License-Identifier: Apache-2.0

//! Fixed workloads shared by the benchmarks.

use std::sync::Arc;

use eampcf::{compile_program, parse_program, Address, AddressTable, Term};

/// Addition by recursion on its second argument.
pub const ADD: &str = "fix (\\f x y. ifz y x (f (succ x) (pred y)))";

/// Multiplication by repeated addition. Call-by-name recomputes the
/// unshared arguments, so machine steps grow exponentially in the factors.
pub const MUL: &str = "(\\add. fix (\\m x y. ifz y 0 (add x (m x (pred y))))) \
                       (fix (\\f x y. ifz y x (f (succ x) (pred y))))";

/// `add a b` as a closed program.
pub fn add_program(a: u64, b: u64) -> Arc<Term> {
    parse_program(&format!("{ADD} {a} {b}")).expect("fixture parses")
}

/// `mul a b` as a closed program.
pub fn mul_program(a: u64, b: u64) -> Arc<Term> {
    parse_program(&format!("{MUL} {a} {b}")).expect("fixture parses")
}

/// Compiles `p` into a fresh table.
pub fn compiled(p: &Arc<Term>) -> (AddressTable, Address) {
    let mut t = AddressTable::new();
    let a = compile_program(&mut t, p).expect("fixture compiles");
    (t, a)
}
