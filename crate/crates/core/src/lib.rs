// SPDX-License-Identifier: Apache-2.0

//! PCF and EPCF over extended addressing machines.
//!
//! Terms are parsed by [`frontend`], typed by [`lang_typing`] and evaluated
//! by [`lang_eval`]. [`compile`] translates them into machines of [`eam`],
//! which [`eam_typing`] types independently. [`harness`] generates random
//! typed programs and compares the three semantics on them.

pub mod compile;
pub mod eam;
pub mod eam_typing;
pub mod frontend;
pub mod harness;
pub mod lang_eval;
pub mod lang_typing;
pub mod syntax;
pub mod types;

pub use compile::{compile_program, translate, CompileError, VarFrame};
pub use eam::{Address, AddressTable, Instruction, Machine, Program, RunOutcome, RunResult, StepResult};
pub use eam_typing::{check_machine, infer_machine, MachineTypeReport, Untypable};
pub use frontend::{parse_program, parse_term, parse_type, print_term, ParseError, SourceSpan};
pub use lang_eval::{eval_epcf, eval_pcf, Fuel, Outcome};
pub use lang_typing::{TypeEnv, TypeError};
pub use syntax::{Closure, EValue, SimpleType, Subst, Term, Var};
pub use types::{InferType, Scheme};

/// Runs `f` with enough stack for deep structural recursion.
pub(crate) fn deep<R>(f: impl FnOnce() -> R) -> R {
    stacker::maybe_grow(64 * 1024, 4 * 1024 * 1024, f)
}
