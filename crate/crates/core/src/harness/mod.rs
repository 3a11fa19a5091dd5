// SPDX-License-Identifier: Apache-2.0

//! Random program generation and differential testing.

mod difftest;
mod gen;

pub use difftest::{
    case_seeds, diff_case, difftest, difftest_with, DiffCase, DiffReport, Observed, Verdict, DEFAULT_MULTIPLIER,
    RETRY_FACTOR,
};
pub use gen::{decompose, gen_closure, gen_typed_program, GenConfig};
