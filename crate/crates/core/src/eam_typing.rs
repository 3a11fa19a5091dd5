// SPDX-License-Identifier: Apache-2.0

//! Type inference for machines.
//!
//! Registers and tape entries are typed by the principal scheme of the
//! machine they address, instantiated afresh at each use; the program is
//! then checked instruction by instruction against a register context.
//! Schemes are memoized per address.

use std::collections::{BTreeMap, HashMap, HashSet};
use std::fmt;

use crate::eam::{Address, AddressTable, Instruction, Machine};
use crate::syntax::SimpleType;
use crate::types::{schematic_name, InferType, Scheme, Unifier, UnifyError};

/// Default bound on nested address visits.
pub const DEFAULT_GUARD: usize = 10_000;

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum Untypable {
    #[error("type clash: {0}")]
    Clash(String),
    #[error("address {0} refers to itself")]
    Cycle(Address),
    #[error("no typing rule applies: {0}")]
    Shape(String),
    #[error("recursion guard exhausted")]
    GuardExhausted,
}

impl From<UnifyError> for Untypable {
    fn from(e: UnifyError) -> Untypable {
        Untypable::Clash(e.to_string())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum MachineTypeReport {
    Typed(Scheme),
    Untypable(Untypable),
}

impl MachineTypeReport {
    pub fn scheme(&self) -> Option<&Scheme> {
        match self {
            MachineTypeReport::Typed(s) => Some(s),
            MachineTypeReport::Untypable(_) => None,
        }
    }
}

impl fmt::Display for MachineTypeReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MachineTypeReport::Typed(s) => write!(f, "{s}"),
            MachineTypeReport::Untypable(u) => write!(f, "untypable ({u})"),
        }
    }
}

/// `Δ`: types of registers.
#[derive(Clone, Debug, Default)]
pub struct RegCtx(BTreeMap<u32, InferType>);

impl RegCtx {
    pub fn get(&self, i: u32) -> Option<&InferType> {
        self.0.get(&i)
    }

    /// `Δ[Rᵢ : t]`
    pub fn update(&mut self, i: u32, t: InferType) {
        self.0.insert(i, t);
    }

    pub fn iter(&self) -> impl Iterator<Item = (u32, &InferType)> {
        self.0.iter().map(|(i, t)| (*i, t))
    }
}

/// One rule application of the root machine's derivation, outermost first.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DerivationStep {
    pub rule: &'static str,
    /// The type in the rule's conclusion, with variables named jointly
    /// across the whole derivation.
    pub conclusion: String,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Derivation {
    pub steps: Vec<DerivationStep>,
}

impl fmt::Display for Derivation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, s) in self.steps.iter().enumerate() {
            writeln!(f, "{:>width$}({}) : {}", "", s.rule, s.conclusion, width = k)?;
        }
        Ok(())
    }
}

struct Recorder {
    steps: Vec<(&'static str, InferType)>,
}

/// Memoizing type inference over one address table.
pub struct MachineTyper {
    memo: HashMap<Address, Result<Scheme, Untypable>>,
    guard: usize,
}

impl Default for MachineTyper {
    fn default() -> MachineTyper {
        MachineTyper::new()
    }
}

/// `(δ₁ → … → δₙ → α → α) → δ₁ → … → δₙ → α`
pub fn fix_scheme(n: u32) -> Scheme {
    let mut u = Unifier::new();
    let ds: Vec<InferType> = (0..n).map(|_| u.fresh()).collect();
    let a = u.fresh();
    let body = InferType::arrows(ds.iter().cloned(), InferType::arrow(a.clone(), a.clone()));
    u.normalize(&InferType::arrow(body, InferType::arrows(ds, a)))
}

impl MachineTyper {
    pub fn new() -> MachineTyper {
        MachineTyper::with_guard(DEFAULT_GUARD)
    }

    pub fn with_guard(guard: usize) -> MachineTyper {
        MachineTyper {
            memo: HashMap::new(),
            guard,
        }
    }

    /// The principal type of the machine at `a`.
    pub fn infer(&mut self, table: &AddressTable, a: Address) -> MachineTypeReport {
        let mut visiting = HashSet::new();
        match crate::deep(|| self.infer_addr(table, a, &mut visiting, 0)) {
            Ok(s) => MachineTypeReport::Typed(s),
            Err(e) => MachineTypeReport::Untypable(e),
        }
    }

    /// True iff `ty` is an instance of the principal type of `a`.
    pub fn check(&mut self, table: &AddressTable, a: Address, ty: &SimpleType) -> Result<bool, Untypable> {
        match self.infer(table, a) {
            MachineTypeReport::Typed(s) => Ok(s.has_instance(ty)),
            MachineTypeReport::Untypable(e) => Err(e),
        }
    }

    /// The derivation of the principal type of `a`, premises about other
    /// addresses left unexpanded.
    pub fn derivation(&mut self, table: &AddressTable, a: Address) -> Result<Derivation, Untypable> {
        let mut rec = Recorder { steps: Vec::new() };
        let mut visiting = HashSet::new();
        let mut u = Unifier::new();
        let root = match a {
            Address::Num(_) => {
                rec.steps.push(("nat", InferType::Int));
                InferType::Int
            }
            Address::FixN(n) => {
                let t = u.instantiate(&fix_scheme(n));
                rec.steps.push(("fix", t.clone()));
                t
            }
            Address::Cell(_) => {
                let m = table
                    .try_lookup(a)
                    .ok_or_else(|| Untypable::Shape(format!("{a} is not allocated")))?;
                visiting.insert(a);
                crate::deep(|| self.infer_body(table, &m, &mut u, &mut visiting, 0, Some(&mut rec)))?
            }
        };
        let resolved: Vec<InferType> = rec.steps.iter().map(|(_, t)| u.resolve(t)).collect();
        let mut order = Vec::new();
        u.resolve(&root).vars_in_order(&mut order);
        for t in &resolved {
            t.vars_in_order(&mut order);
        }
        let name = |v: u32| schematic_name(order.iter().position(|w| *w == v).unwrap_or(0) as u32);
        let steps = rec
            .steps
            .iter()
            .zip(&resolved)
            .map(|((rule, _), t)| DerivationStep {
                rule,
                conclusion: t.render(&name),
            })
            .collect();
        Ok(Derivation { steps })
    }

    fn infer_addr(
        &mut self,
        table: &AddressTable,
        a: Address,
        visiting: &mut HashSet<Address>,
        depth: usize,
    ) -> Result<Scheme, Untypable> {
        match a {
            Address::Num(_) => return Ok(Scheme::ground(&SimpleType::Int)),
            Address::FixN(n) => return Ok(fix_scheme(n)),
            Address::Cell(_) => {}
        }
        if let Some(r) = self.memo.get(&a) {
            return r.clone();
        }
        if depth >= self.guard {
            return Err(Untypable::GuardExhausted);
        }
        if !visiting.insert(a) {
            return Err(Untypable::Cycle(a));
        }
        let m = table
            .try_lookup(a)
            .ok_or_else(|| Untypable::Shape(format!("{a} is not allocated")));
        let result = m.and_then(|m| {
            let mut u = Unifier::new();
            let t = self.infer_body(table, &m, &mut u, visiting, depth, None)?;
            Ok(u.normalize(&t))
        });
        visiting.remove(&a);
        if !matches!(result, Err(Untypable::GuardExhausted | Untypable::Cycle(_))) {
            self.memo.insert(a, result.clone());
        }
        result
    }

    fn instance_of(
        &mut self,
        table: &AddressTable,
        a: Address,
        u: &mut Unifier,
        visiting: &mut HashSet<Address>,
        depth: usize,
    ) -> Result<InferType, Untypable> {
        let s = self.infer_addr(table, a, visiting, depth + 1)?;
        Ok(u.instantiate(&s))
    }

    /// `⊢ M : α` for a machine without a reserved address.
    fn infer_body(
        &mut self,
        table: &AddressTable,
        m: &Machine,
        u: &mut Unifier,
        visiting: &mut HashSet<Address>,
        depth: usize,
        mut rec: Option<&mut Recorder>,
    ) -> Result<InferType, Untypable> {
        let alpha = u.fresh();
        let mut note = |rule: &'static str, t: &InferType| {
            if let Some(r) = rec.as_deref_mut() {
                r.steps.push((rule, t.clone()));
            }
        };
        let mut ctx = RegCtx::default();
        for (i, reg) in m.registers().iter().enumerate().rev() {
            match reg {
                None => note("R_∅", &alpha),
                Some(a) => {
                    note("R_T", &alpha);
                    let t = self.instance_of(table, *a, u, visiting, depth)?;
                    ctx.update(i as u32, t);
                }
            }
        }
        note("R_()", &alpha);

        let read = |ctx: &RegCtx, i: u32| {
            ctx.get(i)
                .cloned()
                .ok_or_else(|| Untypable::Shape(format!("register {i} has no type")))
        };
        let mut tape = m.tape().iter();
        let mut cur = alpha.clone();
        for instr in m.program().iter() {
            match instr {
                Instruction::Load(i) => match tape.next() {
                    Some(a) => {
                        note("load_T", &cur);
                        let t = self.instance_of(table, *a, u, visiting, depth)?;
                        ctx.update(i, t);
                    }
                    None => {
                        note("load_∅", &cur);
                        let (b, rest) = (u.fresh(), u.fresh());
                        u.unify(&cur, &InferType::arrow(b.clone(), rest.clone()))?;
                        ctx.update(i, b);
                        cur = rest;
                    }
                },
                Instruction::Pred(i, j) | Instruction::Succ(i, j) => {
                    note(
                        if matches!(instr, Instruction::Pred(..)) {
                            "pred"
                        } else {
                            "succ"
                        },
                        &cur,
                    );
                    u.unify(&read(&ctx, i)?, &InferType::Int)?;
                    ctx.update(j, InferType::Int);
                }
                Instruction::Test(i, j, k, l) => {
                    note("test", &cur);
                    u.unify(&read(&ctx, i)?, &InferType::Int)?;
                    let b = read(&ctx, j)?;
                    u.unify(&b, &read(&ctx, k)?)?;
                    ctx.update(l, b);
                }
                Instruction::App(i, j, k) => {
                    note("app", &cur);
                    let b = u.fresh();
                    u.unify(&read(&ctx, i)?, &InferType::arrow(read(&ctx, j)?, b.clone()))?;
                    ctx.update(k, b);
                }
                Instruction::Call(i) => {
                    note("call", &cur);
                    let mut args = Vec::new();
                    for a in tape.by_ref() {
                        args.push(self.instance_of(table, *a, u, visiting, depth)?);
                    }
                    u.unify(&read(&ctx, i)?, &InferType::arrows(args, cur.clone()))?;
                    return Ok(alpha);
                }
            }
        }
        Err(Untypable::Shape("program does not end with Call".into()))
    }
}

/// The principal type of the machine at `a`, with a fresh memo.
pub fn infer_machine(table: &AddressTable, a: Address) -> MachineTypeReport {
    MachineTyper::new().infer(table, a)
}

/// `⊢ ⟨a⟩⁻¹ : ty`
pub fn check_machine(table: &AddressTable, a: Address, ty: &SimpleType) -> Result<bool, Untypable> {
    MachineTyper::new().check(table, a, ty)
}

/// The type of `M · [#N]` from those of `M` and `N`.
pub fn application_typing(m: &Scheme, n: &Scheme) -> Result<Scheme, UnifyError> {
    let mut u = Unifier::new();
    let (tm, tn) = (u.instantiate(m), u.instantiate(n));
    let result = u.fresh();
    u.unify(&tm, &InferType::arrow(tn, result.clone()))?;
    Ok(u.normalize(&result))
}
