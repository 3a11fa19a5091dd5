// SPDX-License-Identifier: Apache-2.0

//! Simple types with unification variables, shared by the language and
//! machine type systems.

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use crate::syntax::SimpleType;

/// A simple type that may mention unification variables `?k`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub enum InferType {
    Int,
    Var(u32),
    Arrow(Arc<InferType>, Arc<InferType>),
}

impl InferType {
    pub fn arrow(a: InferType, b: InferType) -> InferType {
        InferType::Arrow(Arc::new(a), Arc::new(b))
    }

    /// `a₁ → … → aₙ → result`
    pub fn arrows<I>(args: I, result: InferType) -> InferType
    where
        I: IntoIterator<Item = InferType>,
        I::IntoIter: DoubleEndedIterator,
    {
        args.into_iter().rev().fold(result, |acc, a| InferType::arrow(a, acc))
    }

    pub fn from_simple(t: &SimpleType) -> InferType {
        match t {
            SimpleType::Int => InferType::Int,
            SimpleType::Arrow(a, b) => InferType::arrow(InferType::from_simple(a), InferType::from_simple(b)),
        }
    }

    /// The ground type, if no variables remain.
    pub fn to_simple(&self) -> Option<SimpleType> {
        match self {
            InferType::Int => Some(SimpleType::Int),
            InferType::Var(_) => None,
            InferType::Arrow(a, b) => Some(SimpleType::arrow(a.to_simple()?, b.to_simple()?)),
        }
    }

    pub fn is_ground(&self) -> bool {
        match self {
            InferType::Int => true,
            InferType::Var(_) => false,
            InferType::Arrow(a, b) => a.is_ground() && b.is_ground(),
        }
    }

    pub(crate) fn vars_in_order(&self, out: &mut Vec<u32>) {
        match self {
            InferType::Int => {}
            InferType::Var(v) => {
                if !out.contains(v) {
                    out.push(*v);
                }
            }
            InferType::Arrow(a, b) => {
                a.vars_in_order(out);
                b.vars_in_order(out);
            }
        }
    }

    fn rename(&self, map: &HashMap<u32, u32>) -> InferType {
        match self {
            InferType::Int => InferType::Int,
            InferType::Var(v) => InferType::Var(map[v]),
            InferType::Arrow(a, b) => InferType::arrow(a.rename(map), b.rename(map)),
        }
    }

    /// Renders with a caller-chosen naming of variables.
    pub fn render(&self, names: &dyn Fn(u32) -> String) -> String {
        struct R<'a>(&'a InferType, &'a dyn Fn(u32) -> String);
        impl fmt::Display for R<'_> {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                self.0.write(f, self.1)
            }
        }
        R(self, names).to_string()
    }

    fn write(&self, f: &mut fmt::Formatter<'_>, names: &dyn Fn(u32) -> String) -> fmt::Result {
        match self {
            InferType::Int => f.write_str("int"),
            InferType::Var(v) => f.write_str(&names(*v)),
            InferType::Arrow(a, b) => {
                if matches!(**a, InferType::Arrow(..)) {
                    f.write_str("(")?;
                    a.write(f, names)?;
                    f.write_str(")")?;
                } else {
                    a.write(f, names)?;
                }
                f.write_str(" -> ")?;
                b.write(f, names)
            }
        }
    }
}

/// `?a`, …, `?z`, `?a1`, …
pub fn schematic_name(k: u32) -> String {
    let letter = (b'a' + (k % 26) as u8) as char;
    match k / 26 {
        0 => format!("?{letter}"),
        round => format!("?{letter}{round}"),
    }
}

impl fmt::Display for InferType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.write(f, &|v| format!("?{v}"))
    }
}

impl fmt::Debug for InferType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// A fully resolved type whose variables are numbered `0..arity` in order
/// of first occurrence. Two schemes are equal iff they are equal up to
/// renaming of variables.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Scheme {
    ty: InferType,
    arity: u32,
}

impl Scheme {
    /// Renumbers the variables of an already resolved type.
    pub fn normalize(t: &InferType) -> Scheme {
        let mut order = Vec::new();
        t.vars_in_order(&mut order);
        let map: HashMap<u32, u32> = order.iter().enumerate().map(|(i, v)| (*v, i as u32)).collect();
        Scheme {
            ty: t.rename(&map),
            arity: order.len() as u32,
        }
    }

    pub fn ground(t: &SimpleType) -> Scheme {
        Scheme {
            ty: InferType::from_simple(t),
            arity: 0,
        }
    }

    pub fn ty(&self) -> &InferType {
        &self.ty
    }

    /// Number of schematic variables.
    pub fn arity(&self) -> u32 {
        self.arity
    }

    pub fn to_simple(&self) -> Option<SimpleType> {
        self.ty.to_simple()
    }

    /// True iff `t` is an instance of this scheme.
    pub fn has_instance(&self, t: &SimpleType) -> bool {
        let mut u = Unifier::new();
        let inst = u.instantiate(self);
        u.unify(&inst, &InferType::from_simple(t)).is_ok()
    }

    /// True iff the two schemes are equal up to variable renaming.
    pub fn same_as(&self, other: &Scheme) -> bool {
        self == other
    }
}

impl fmt::Display for Scheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.ty.write(f, &schematic_name)
    }
}

impl fmt::Debug for Scheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum UnifyError {
    #[error("cannot unify {0} with {1}")]
    Clash(InferType, InferType),
    #[error("occurs check: ?{0} occurs in {1}")]
    Occurs(u32, InferType),
}

/// Substitution state for first-order unification over `int` and `→`.
#[derive(Default, Clone)]
pub struct Unifier {
    bindings: Vec<Option<InferType>>,
}

impl Unifier {
    pub fn new() -> Unifier {
        Unifier::default()
    }

    pub fn fresh(&mut self) -> InferType {
        self.bindings.push(None);
        InferType::Var(self.bindings.len() as u32 - 1)
    }

    /// Follows variable bindings at the root only.
    pub fn shallow(&self, t: &InferType) -> InferType {
        let mut cur = t.clone();
        while let InferType::Var(v) = cur {
            match &self.bindings[v as usize] {
                Some(next) => cur = next.clone(),
                None => break,
            }
        }
        cur
    }

    /// Applies the current substitution everywhere.
    pub fn resolve(&self, t: &InferType) -> InferType {
        match self.shallow(t) {
            InferType::Arrow(a, b) => InferType::arrow(self.resolve(&a), self.resolve(&b)),
            other => other,
        }
    }

    pub fn normalize(&self, t: &InferType) -> Scheme {
        Scheme::normalize(&self.resolve(t))
    }

    pub fn instantiate(&mut self, s: &Scheme) -> InferType {
        let map: HashMap<u32, u32> = (0..s.arity)
            .map(|k| match self.fresh() {
                InferType::Var(v) => (k, v),
                _ => unreachable!(),
            })
            .collect();
        s.ty.rename(&map)
    }

    fn occurs(&self, v: u32, t: &InferType) -> bool {
        match self.shallow(t) {
            InferType::Var(w) => v == w,
            InferType::Int => false,
            InferType::Arrow(a, b) => self.occurs(v, &a) || self.occurs(v, &b),
        }
    }

    /// Extends the state with a most general unifier of `a` and `b`. On
    /// failure the state may be partially extended.
    pub fn unify(&mut self, a: &InferType, b: &InferType) -> Result<(), UnifyError> {
        let mut work = vec![(a.clone(), b.clone())];
        while let Some((a, b)) = work.pop() {
            match (self.shallow(&a), self.shallow(&b)) {
                (InferType::Var(x), InferType::Var(y)) if x == y => {}
                (InferType::Var(x), t) | (t, InferType::Var(x)) => {
                    if self.occurs(x, &t) {
                        return Err(UnifyError::Occurs(x, self.resolve(&t)));
                    }
                    self.bindings[x as usize] = Some(t);
                }
                (InferType::Int, InferType::Int) => {}
                (InferType::Arrow(a1, b1), InferType::Arrow(a2, b2)) => {
                    work.push(((*b1).clone(), (*b2).clone()));
                    work.push(((*a1).clone(), (*a2).clone()));
                }
                (x, y) => return Err(UnifyError::Clash(self.resolve(&x), self.resolve(&y))),
            }
        }
        Ok(())
    }
}
