// SPDX-License-Identifier: Apache-2.0

//! Translation of EPCF closures into machines, `⟦σ, M⟧_x⃗`.

use std::collections::HashMap;
use std::sync::Arc;

use crate::eam::{self, Address, AddressTable};
use crate::syntax::{numeral_of, Closure, Subst, Term, Var};

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum CompileError {
    #[error("variable '{0}' is neither bound by the substitution nor in the frame")]
    Unbound(String),
    #[error("variable '{0}' occurs twice in the frame")]
    Duplicate(String),
}

/// The ordered variables `x₁, …, xₙ` a translation abstracts over.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct VarFrame(Vec<Var>);

impl VarFrame {
    pub fn empty() -> VarFrame {
        VarFrame(Vec::new())
    }

    pub fn new(vars: Vec<Var>) -> Result<VarFrame, CompileError> {
        for (k, v) in vars.iter().enumerate() {
            if vars[..k].contains(v) {
                return Err(CompileError::Duplicate(v.name().to_string()));
            }
        }
        Ok(VarFrame(vars))
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn vars(&self) -> &[Var] {
        &self.0
    }

    /// 1-based position of `x`; the last occurrence wins.
    pub fn position(&self, x: &Var) -> Option<u32> {
        self.0.iter().rposition(|v| v == x).map(|p| p as u32 + 1)
    }

    fn prepend(&self, y: &Var) -> VarFrame {
        let mut v = Vec::with_capacity(self.0.len() + 1);
        v.push(y.clone());
        v.extend(self.0.iter().cloned());
        VarFrame(v)
    }

    fn append(&self, y: &Var) -> VarFrame {
        let mut v = self.0.clone();
        v.push(y.clone());
        VarFrame(v)
    }
}

struct Translator<'t> {
    table: &'t mut AddressTable,
    /// Closures translated in the empty frame, keyed by identity.
    closed: HashMap<(usize, usize), Address>,
    aux: HashMap<(u8, u32), Address>,
}

impl Translator<'_> {
    fn aux(&mut self, kind: u8, n: u32) -> Address {
        if let Some(&a) = self.aux.get(&(kind, n)) {
            return a;
        }
        let m = match kind {
            0 => eam::app_n(n),
            1 => eam::pred_n(n),
            2 => eam::succ_n(n),
            _ => eam::ifz_n(n),
        };
        let a = self.table.intern(m);
        self.aux.insert((kind, n), a);
        a
    }

    fn closure(&mut self, s: &Subst, t: &Arc<Term>, frame: &VarFrame) -> Result<Address, CompileError> {
        crate::deep(|| {
            let Some((last, rest)) = s.bindings().split_last() else {
                return self.term(t, frame);
            };
            let rest = Subst::from_bindings(rest.to_vec());
            let head = self.closure(&rest, t, &frame.prepend(&last.var))?;
            let arg = self.closed_closure(&last.closure)?;
            Ok(self.table.apply(head, arg))
        })
    }

    fn closed_closure(&mut self, c: &Closure) -> Result<Address, CompileError> {
        let key = (c.subst.ptr_id(), Arc::as_ptr(&c.term) as usize);
        if let Some(&a) = self.closed.get(&key) {
            return Ok(a);
        }
        let a = self.closure(&c.subst, &c.term, &VarFrame::empty())?;
        self.closed.insert(key, a);
        Ok(a)
    }

    fn term(&mut self, t: &Arc<Term>, frame: &VarFrame) -> Result<Address, CompileError> {
        let n = frame.len() as u32;
        if let Some(k) = numeral_of(t) {
            let p = self.table.intern(eam::proj(n + 1, 1));
            return Ok(self.table.apply(p, Address::Num(k)));
        }
        let (kind, args) = match &**t {
            Term::Var(x) => {
                let i = frame
                    .position(x)
                    .ok_or_else(|| CompileError::Unbound(x.name().to_string()))?;
                return Ok(self.table.intern(eam::proj(n, i)));
            }
            Term::Lam(y, s, body) => return self.closure(s, body, &frame.append(y)),
            Term::Fix(m) => {
                let m = self.term(m, frame)?;
                return Ok(self.table.apply(Address::FixN(n), m));
            }
            Term::App(m, a) => (0, vec![m, a]),
            Term::Pred(m) => (1, vec![m]),
            Term::Succ(m) => (2, vec![m]),
            Term::Ifz(l, m, r) => (3, vec![l, m, r]),
            Term::Zero => unreachable!("zero is a numeral"),
        };
        let head = self.aux(kind, n);
        let tape = args
            .into_iter()
            .map(|a| self.term(a, frame))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(self.table.apply_all(head, &tape))
    }
}

/// `⟦σ, M⟧_x⃗`
pub fn translate(table: &mut AddressTable, c: &Closure, frame: &VarFrame) -> Result<Address, CompileError> {
    let mut tr = Translator {
        table,
        closed: HashMap::new(),
        aux: HashMap::new(),
    };
    tr.closure(&c.subst, &c.term, frame)
}

/// `⟦M⟧ = ⟦[], M⟧_∅` for a closed term.
pub fn compile_program(table: &mut AddressTable, p: &Arc<Term>) -> Result<Address, CompileError> {
    translate(table, &Closure::bare(p.clone()), &VarFrame::empty())
}
