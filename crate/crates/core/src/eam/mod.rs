// SPDX-License-Identifier: Apache-2.0

//! Extended addressing machines: addresses, programs, the address table and
//! small-step execution.

mod builders;
mod dump;
mod exec;
mod machine;
mod table;

pub use builders::{
    add, add_aux, app_n, fix_machine, identity, ifz_n, numeral_machine, pred_n, proj, succ1, succ2, succ_n,
};
pub use dump::{dump, load_dump, trace, trace_line, DumpError};
pub use exec::{interconvertible, reaches, run, step, walk, Interconvertibility, RunOutcome, RunResult, StepResult};
pub use machine::{valid_with, validity, Address, AddressSyntaxError, Instruction, Machine, MachineError, Program};
pub use table::AddressTable;

/// `M.P = Load i; P'` with an empty tape.
pub fn is_stuck(m: &Machine) -> bool {
    m.is_stuck()
}

/// `M · T′`
pub fn append_tape(m: &Machine, extra: &[Address]) -> Machine {
    m.append_tape(extra)
}
