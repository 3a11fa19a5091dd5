// SPDX-License-Identifier: Apache-2.0

use std::sync::Arc;

use rustc_hash::FxHashMap;

use super::builders::{fix_machine, fix_program};
use super::machine::{Address, Machine, Program};

/// The address map `#`, realized by canonicalizing interning.
///
/// Numeral and fixpoint machines have reserved addresses and are never
/// stored; every other machine receives a dense cell id in first-intern
/// order. A table is single-threaded; give each worker its own.
#[derive(Default)]
pub struct AddressTable {
    cells: Vec<Arc<Machine>>,
    index: FxHashMap<Arc<Machine>, u32>,
    fix_programs: FxHashMap<u32, Program>,
}

impl AddressTable {
    pub fn new() -> AddressTable {
        AddressTable::default()
    }

    /// Number of allocated cells.
    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    fn reserved(&mut self, m: &Machine) -> Option<Address> {
        if let Some(n) = m.numeral_value() {
            return Some(Address::Num(n));
        }
        let Some(Some(Address::FixN(n))) = m.regs.first() else {
            return None;
        };
        let n = *n;
        if m.regs.len() != n as usize + 2 || !m.tape.is_empty() || m.regs[1..].iter().any(Option::is_some) {
            return None;
        }
        let prog = self.fix_programs.entry(n).or_insert_with(|| fix_program(n));
        (*prog == m.prog).then_some(Address::FixN(n))
    }

    /// `#m`. Structurally equal machines share one address.
    pub fn intern(&mut self, m: Machine) -> Address {
        debug_assert!(super::validity(&m.prog, &m.regs));
        if let Some(a) = self.reserved(&m) {
            return a;
        }
        if let Some(&id) = self.index.get(&m) {
            return Address::Cell(id);
        }
        let id = u32::try_from(self.cells.len()).expect("address table exhausted");
        let m = Arc::new(m);
        self.cells.push(m.clone());
        self.index.insert(m, id);
        Address::Cell(id)
    }

    pub fn contains(&self, a: Address) -> bool {
        match a {
            Address::Cell(id) => (id as usize) < self.cells.len(),
            _ => true,
        }
    }

    /// `⟨a⟩⁻¹`, or `None` for an unallocated cell.
    pub fn try_lookup(&self, a: Address) -> Option<Machine> {
        match a {
            Address::Num(n) => Some(Machine::numeral(n)),
            Address::FixN(n) => Some(fix_machine(n)),
            Address::Cell(id) => self.cells.get(id as usize).map(|m| (**m).clone()),
        }
    }

    /// `⟨a⟩⁻¹`
    ///
    /// # Panics
    ///
    /// On an unallocated cell id.
    pub fn lookup(&self, a: Address) -> Machine {
        self.try_lookup(a)
            .unwrap_or_else(|| panic!("address {a} is not allocated in this table"))
    }

    /// `a · b`: the address of `⟨a⟩⁻¹` with `b` appended to its tape.
    pub fn apply(&mut self, a: Address, b: Address) -> Address {
        let m = self.lookup(a).append_tape(&[b]);
        self.intern(m)
    }

    /// `a · [b₁, …, bₙ]`
    pub fn apply_all(&mut self, a: Address, bs: &[Address]) -> Address {
        if bs.is_empty() {
            return a;
        }
        let m = self.lookup(a).append_tape(bs);
        self.intern(m)
    }
}
