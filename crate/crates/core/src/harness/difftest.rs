// SPDX-License-Identifier: Apache-2.0

//! Differential testing of the PCF, EPCF and machine semantics.

use std::fmt;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::gen::{gen_typed_program, GenConfig};
use crate::compile::compile_program;
use crate::eam::{run, AddressTable, RunOutcome};
use crate::frontend::print_term;
use crate::lang_eval::{eval_epcf, eval_pcf, Fuel, Outcome};
use crate::syntax::{Subst, Term};

/// Machine steps allowed per unit of big-step fuel.
pub const DEFAULT_MULTIPLIER: u64 = 50;
/// Factor applied on the single retry of a machine run that timed out
/// while both big-step semantics terminated.
pub const RETRY_FACTOR: u64 = 10;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Verdict {
    Agree,
    AgreeWithTimeouts,
    Disagree,
    Fault,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Agree => "agree",
            Verdict::AgreeWithTimeouts => "agree-with-timeouts",
            Verdict::Disagree => "DISAGREE",
            Verdict::Fault => "FAULT",
        })
    }
}

/// What one semantics produced.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Observed {
    Numeral(u64),
    /// A value that is not a numeral, rendered.
    Other(String),
    Timeout,
    Fault(String),
}

impl fmt::Display for Observed {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Observed::Numeral(n) => write!(f, "{n}"),
            Observed::Other(s) => write!(f, "value({s})"),
            Observed::Timeout => f.write_str("timeout"),
            Observed::Fault(s) => write!(f, "fault({s})"),
        }
    }
}

fn observe(o: &Outcome) -> Observed {
    match o {
        Outcome::Value(v) => match v.as_numeral() {
            Some(n) => Observed::Numeral(n),
            None => Observed::Other(v.to_string()),
        },
        Outcome::Timeout => Observed::Timeout,
        Outcome::RuntimeFault(m) => Observed::Fault(m.clone()),
    }
}

#[derive(Clone, Debug)]
pub struct DiffCase {
    pub index: usize,
    pub program: String,
    pub pcf: Observed,
    pub epcf: Observed,
    pub eam: Observed,
    pub verdict: Verdict,
}

impl fmt::Display for DiffCase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "case {} | {} | pcf={} | epcf={} | eam={} | {}",
            self.index, self.verdict, self.pcf, self.epcf, self.eam, self.program
        )
    }
}

#[derive(Clone, Debug, Default)]
pub struct DiffReport {
    pub cases: Vec<DiffCase>,
}

impl DiffReport {
    pub fn count(&self, v: Verdict) -> usize {
        self.cases.iter().filter(|c| c.verdict == v).count()
    }

    /// No disagreement and no fault.
    pub fn is_clean(&self) -> bool {
        self.count(Verdict::Disagree) == 0 && self.count(Verdict::Fault) == 0
    }

    /// `TOTAL ok=<n> timeout=<n> disagree=<n> fault=<n>`
    pub fn summary(&self) -> String {
        format!(
            "TOTAL ok={} timeout={} disagree={} fault={}",
            self.count(Verdict::Agree),
            self.count(Verdict::AgreeWithTimeouts),
            self.count(Verdict::Disagree),
            self.count(Verdict::Fault)
        )
    }
}

impl fmt::Display for DiffReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.cases {
            writeln!(f, "{c}")?;
        }
        writeln!(f, "{}", self.summary())
    }
}

fn run_machine(p: &Arc<Term>, steps: u64) -> Observed {
    let mut table = AddressTable::new();
    let a = match compile_program(&mut table, p) {
        Ok(a) => a,
        Err(e) => return Observed::Fault(e.to_string()),
    };
    let m = table.lookup(a);
    match run(&mut table, &m, steps).outcome {
        RunOutcome::Final(m) => match m.numeral_value() {
            Some(n) => Observed::Numeral(n),
            None => Observed::Other(m.to_string()),
        },
        RunOutcome::Err => Observed::Fault("machine error".into()),
        RunOutcome::Timeout(_) => Observed::Timeout,
    }
}

fn verdict(all: [&Observed; 3]) -> Verdict {
    if all.iter().any(|o| matches!(o, Observed::Fault(_))) {
        return Verdict::Fault;
    }
    let done: Vec<&&Observed> = all.iter().filter(|o| !matches!(o, Observed::Timeout)).collect();
    if done.iter().any(|o| !matches!(o, Observed::Numeral(_))) || done.windows(2).any(|w| w[0] != w[1]) {
        return Verdict::Disagree;
    }
    if done.len() == all.len() {
        Verdict::Agree
    } else {
        Verdict::AgreeWithTimeouts
    }
}

/// Runs one closed program of type `int` through all three semantics.
pub fn diff_case(index: usize, p: &Arc<Term>, fuel: u64, multiplier: u64) -> DiffCase {
    let pcf = observe(&eval_pcf(p, &mut Fuel::new(fuel)));
    let epcf = observe(&eval_epcf(&Subst::empty(), p, &mut Fuel::new(fuel)));
    let steps = fuel.saturating_mul(multiplier);
    let mut eam = run_machine(p, steps);
    let terminated = |o: &Observed| matches!(o, Observed::Numeral(_) | Observed::Other(_));
    if eam == Observed::Timeout && terminated(&pcf) && terminated(&epcf) {
        eam = run_machine(p, steps.saturating_mul(RETRY_FACTOR));
    }
    let verdict = verdict([&pcf, &epcf, &eam]);
    DiffCase {
        index,
        program: print_term(p),
        pcf,
        epcf,
        eam,
        verdict,
    }
}

/// The seeds of the generated cases, derived from `cfg.seed`.
pub fn case_seeds(seed: u64, count: usize) -> Vec<u64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count).map(|_| rng.random()).collect()
}

/// Generates `count` programs from `cfg` and compares the semantics on each.
pub fn difftest(cfg: &GenConfig, count: usize, fuel: u64) -> DiffReport {
    difftest_with(cfg, count, fuel, DEFAULT_MULTIPLIER)
}

pub fn difftest_with(cfg: &GenConfig, count: usize, fuel: u64, multiplier: u64) -> DiffReport {
    let cases = case_seeds(cfg.seed, count)
        .into_iter()
        .enumerate()
        .map(|(k, seed)| {
            let p = gen_typed_program(&GenConfig { seed, ..cfg.clone() });
            diff_case(k, &p, fuel, multiplier)
        })
        .collect();
    DiffReport { cases }
}
