// SPDX-License-Identifier: Apache-2.0

use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::Arc;

use rustc_hash::FxHasher;

/// The identity of a machine: a reserved numeral address, a reserved
/// fixpoint address, or a cell of an [`AddressTable`](super::AddressTable).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Address {
    Num(u64),
    FixN(u32),
    Cell(u32),
}

impl Address {
    pub fn as_num(self) -> Option<u64> {
        match self {
            Address::Num(n) => Some(n),
            _ => None,
        }
    }
}

impl fmt::Display for Address {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Address::Num(n) => write!(f, "num:{n}"),
            Address::FixN(n) => write!(f, "fix:{n}"),
            Address::Cell(n) => write!(f, "cell:{n}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
#[error("invalid address '{0}'")]
pub struct AddressSyntaxError(pub String);

impl std::str::FromStr for Address {
    type Err = AddressSyntaxError;

    fn from_str(s: &str) -> Result<Address, AddressSyntaxError> {
        let err = || AddressSyntaxError(s.to_string());
        let (tag, n) = s.trim().split_once(':').ok_or_else(err)?;
        match tag {
            "num" => n.parse().map(Address::Num).map_err(|_| err()),
            "fix" => n.parse().map(Address::FixN).map_err(|_| err()),
            "cell" => n.parse().map(Address::Cell).map_err(|_| err()),
            _ => Err(err()),
        }
    }
}

/// Register indices are plain naturals; `Test i j k l` writes `R_l`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Instruction {
    Load(u32),
    App(u32, u32, u32),
    Test(u32, u32, u32, u32),
    Pred(u32, u32),
    Succ(u32, u32),
    Call(u32),
}

impl fmt::Display for Instruction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Instruction::Load(i) => write!(f, "LOAD {i}"),
            Instruction::App(i, j, k) => write!(f, "APP {i} {j} {k}"),
            Instruction::Test(i, j, k, l) => write!(f, "TEST {i} {j} {k} {l}"),
            Instruction::Pred(i, j) => write!(f, "PRED {i} {j}"),
            Instruction::Succ(i, j) => write!(f, "SUCC {i} {j}"),
            Instruction::Call(i) => write!(f, "CALL {i}"),
        }
    }
}

struct Node {
    instr: Instruction,
    next: Program,
    len: usize,
    hash: u64,
}

/// An immutable instruction list. Suffixes are shared, so advancing past an
/// instruction is O(1); each node caches its length and structural hash.
#[derive(Clone, Default)]
pub struct Program(Option<Arc<Node>>);

impl Program {
    pub fn empty() -> Program {
        Program(None)
    }

    pub fn new(instrs: &[Instruction]) -> Program {
        instrs
            .iter()
            .rev()
            .fold(Program::empty(), |next, &instr| Program::cons(instr, next))
    }

    pub fn cons(instr: Instruction, next: Program) -> Program {
        let mut h = FxHasher::default();
        instr.hash(&mut h);
        next.hash_value().hash(&mut h);
        Program(Some(Arc::new(Node {
            instr,
            len: next.len() + 1,
            hash: h.finish(),
            next,
        })))
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_none()
    }

    pub fn len(&self) -> usize {
        self.0.as_ref().map_or(0, |n| n.len)
    }

    pub fn head(&self) -> Option<Instruction> {
        self.0.as_ref().map(|n| n.instr)
    }

    /// The program without its first instruction.
    pub fn tail(&self) -> Program {
        self.0.as_ref().map_or_else(Program::empty, |n| n.next.clone())
    }

    pub fn iter(&self) -> impl Iterator<Item = Instruction> + '_ {
        let mut cur = self.0.as_deref();
        std::iter::from_fn(move || {
            let node = cur?;
            cur = node.next.0.as_deref();
            Some(node.instr)
        })
    }

    pub fn to_vec(&self) -> Vec<Instruction> {
        self.iter().collect()
    }

    fn hash_value(&self) -> u64 {
        self.0.as_ref().map_or(0, |n| n.hash)
    }

    /// Checks the shape `Load* (App | Test | Pred | Succ)* Call?`.
    pub fn well_shaped(&self) -> bool {
        let mut phase = 0;
        let mut called = false;
        for instr in self.iter() {
            if called {
                return false;
            }
            match instr {
                Instruction::Load(_) if phase == 0 => {}
                Instruction::Load(_) => return false,
                Instruction::Call(_) => called = true,
                _ => phase = 1,
            }
        }
        true
    }
}

impl PartialEq for Program {
    fn eq(&self, other: &Program) -> bool {
        let (mut a, mut b) = (self.0.as_ref(), other.0.as_ref());
        loop {
            match (a, b) {
                (None, None) => return true,
                (Some(x), Some(y)) => {
                    if Arc::ptr_eq(x, y) {
                        return true;
                    }
                    if x.hash != y.hash || x.len != y.len || x.instr != y.instr {
                        return false;
                    }
                    a = x.next.0.as_ref();
                    b = y.next.0.as_ref();
                }
                _ => return false,
            }
        }
    }
}

impl Eq for Program {}

impl Hash for Program {
    fn hash<H: Hasher>(&self, state: &mut H) {
        state.write_u64(self.hash_value());
    }
}

impl fmt::Display for Program {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_empty() {
            return f.write_str("-");
        }
        for (k, instr) in self.iter().enumerate() {
            if k > 0 {
                f.write_str(";")?;
            }
            write!(f, "{instr}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for Program {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{self}]")
    }
}

/// `𝓘 ⊨ʳ P`: the program never reads a register outside `initialized`.
/// Also enforces the program shape.
pub fn validity(program: &Program, registers: &[Option<Address>]) -> bool {
    let r = registers.len();
    let mut init: Vec<bool> = registers.iter().map(Option::is_some).collect();
    valid_from(program, r, &mut init)
}

/// Validity for an explicit set of initialized indices.
pub fn valid_with(program: &Program, r: usize, initialized: &[usize]) -> bool {
    let mut init = vec![false; r];
    for &i in initialized {
        if i >= r {
            return false;
        }
        init[i] = true;
    }
    valid_from(program, r, &mut init)
}

fn valid_from(program: &Program, r: usize, init: &mut [bool]) -> bool {
    if !program.well_shaped() {
        return false;
    }
    let ok = |init: &[bool], i: u32| (i as usize) < r && init[i as usize];
    for instr in program.iter() {
        let target = match instr {
            Instruction::Load(i) => {
                // Loading into a missing register discards the value.
                ((i as usize) < r).then_some(i)
            }
            Instruction::Call(i) => {
                if !ok(init, i) {
                    return false;
                }
                None
            }
            Instruction::Pred(i, j) | Instruction::Succ(i, j) => {
                if !ok(init, i) {
                    return false;
                }
                Some(j)
            }
            Instruction::App(i, j, k) => {
                if !ok(init, i) || !ok(init, j) {
                    return false;
                }
                Some(k)
            }
            Instruction::Test(i, j, k, l) => {
                if !ok(init, i) || !ok(init, j) || !ok(init, k) {
                    return false;
                }
                Some(l)
            }
        };
        if let Some(t) = target {
            if t as usize >= r {
                return false;
            }
            init[t as usize] = true;
        }
    }
    true
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum MachineError {
    #[error("program {0} reads an uninitialized register or is malformed")]
    Invalid(String),
}

/// An extended addressing machine `⟨R₀…R_{r−1}, P, T⟩`. Values of this type
/// always carry a program that is valid for their registers.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Machine {
    pub(crate) regs: Box<[Option<Address>]>,
    pub(crate) prog: Program,
    pub(crate) tape: Vec<Address>,
}

impl Machine {
    pub fn new(regs: Vec<Option<Address>>, prog: Program, tape: Vec<Address>) -> Result<Machine, MachineError> {
        if !validity(&prog, &regs) {
            return Err(MachineError::Invalid(prog.to_string()));
        }
        Ok(Machine::new_unchecked(regs, prog, tape))
    }

    pub(crate) fn new_unchecked(regs: Vec<Option<Address>>, prog: Program, tape: Vec<Address>) -> Machine {
        Machine {
            regs: regs.into_boxed_slice(),
            prog,
            tape,
        }
    }

    /// `⟨R₀ = n, ε, []⟩`
    pub fn numeral(n: u64) -> Machine {
        Machine::new_unchecked(vec![Some(Address::Num(n))], Program::empty(), Vec::new())
    }

    pub fn registers(&self) -> &[Option<Address>] {
        &self.regs
    }

    pub fn r(&self) -> usize {
        self.regs.len()
    }

    pub fn program(&self) -> &Program {
        &self.prog
    }

    pub fn tape(&self) -> &[Address] {
        &self.tape
    }

    /// `M · T′`
    pub fn append_tape(&self, extra: &[Address]) -> Machine {
        let mut m = self.clone();
        m.tape.extend_from_slice(extra);
        m
    }

    /// A program of shape `Load i; P` facing an empty tape.
    pub fn is_stuck(&self) -> bool {
        matches!(self.prog.head(), Some(Instruction::Load(_))) && self.tape.is_empty()
    }

    /// Stuck, or out of instructions.
    pub fn is_final(&self) -> bool {
        self.prog.is_empty() || self.is_stuck()
    }

    /// `Some(n)` iff this is the canonical numeral machine `n̄`.
    pub fn numeral_value(&self) -> Option<u64> {
        match (&*self.regs, self.prog.is_empty(), self.tape.is_empty()) {
            ([Some(Address::Num(n))], true, true) => Some(*n),
            _ => None,
        }
    }

    pub(crate) fn reg(&self, i: u32) -> Address {
        self.regs[i as usize].expect("validity guarantees initialized reads")
    }

    pub(crate) fn write(&mut self, i: u32, a: Address) {
        if let Some(slot) = self.regs.get_mut(i as usize) {
            *slot = Some(a);
        }
    }
}

pub(crate) fn fmt_regs(regs: &[Option<Address>]) -> String {
    let items: Vec<String> = regs
        .iter()
        .map(|r| r.map_or_else(|| "_".to_string(), |a| a.to_string()))
        .collect();
    format!("[{}]", items.join(","))
}

pub(crate) fn fmt_tape(tape: &[Address]) -> String {
    let items: Vec<String> = tape.iter().map(Address::to_string).collect();
    format!("[{}]", items.join(","))
}

impl fmt::Display for Machine {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{{ regs={}; prog={}; tape={} }}",
            fmt_regs(&self.regs),
            self.prog,
            fmt_tape(&self.tape)
        )
    }
}

impl fmt::Debug for Machine {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}
