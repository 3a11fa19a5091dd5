// SPDX-License-Identifier: Apache-2.0

//! Abstract syntax of EPCF terms and explicit substitutions.
//!
//! PCF is the fragment in which every abstraction carries the empty
//! substitution. Binders are identified by a globally unique `uid`; the
//! display name is cosmetic and only used by the printer.

use std::collections::HashSet;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::Arc;

use crate::deep;

static NEXT_UID: AtomicU64 = AtomicU64::new(1);

/// A variable occurrence or binder. Equality and hashing use the uid only.
#[derive(Clone)]
pub struct Var {
    name: Arc<str>,
    uid: u64,
}

impl Var {
    /// Allocates a variable with a uid never handed out before.
    pub fn fresh(name: &str) -> Var {
        Var {
            name: Arc::from(name),
            uid: NEXT_UID.fetch_add(1, Ordering::Relaxed),
        }
    }

    /// Same display name, new identity.
    pub fn refresh(&self) -> Var {
        Var {
            name: self.name.clone(),
            uid: NEXT_UID.fetch_add(1, Ordering::Relaxed),
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn uid(&self) -> u64 {
        self.uid
    }
}

impl PartialEq for Var {
    fn eq(&self, other: &Self) -> bool {
        self.uid == other.uid
    }
}

impl Eq for Var {}

impl Hash for Var {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.uid.hash(state);
    }
}

impl PartialOrd for Var {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Var {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.uid.cmp(&other.uid)
    }
}

impl fmt::Debug for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}#{}", self.name, self.uid)
    }
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name)
    }
}

/// Simple types over the ground type `int`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum SimpleType {
    Int,
    Arrow(Box<SimpleType>, Box<SimpleType>),
}

impl SimpleType {
    pub fn arrow(domain: SimpleType, codomain: SimpleType) -> SimpleType {
        SimpleType::Arrow(Box::new(domain), Box::new(codomain))
    }

    /// `a1 -> ... -> an -> result`.
    pub fn arrows<I>(args: I, result: SimpleType) -> SimpleType
    where
        I: IntoIterator<Item = SimpleType>,
        I::IntoIter: DoubleEndedIterator,
    {
        args.into_iter().rev().fold(result, |acc, a| SimpleType::arrow(a, acc))
    }

    /// Number of arrows on the right spine.
    pub fn arity(&self) -> usize {
        match self {
            SimpleType::Int => 0,
            SimpleType::Arrow(_, c) => 1 + c.arity(),
        }
    }
}

impl fmt::Display for SimpleType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SimpleType::Int => f.write_str("int"),
            SimpleType::Arrow(a, b) => match **a {
                SimpleType::Arrow(..) => write!(f, "({a}) -> {b}"),
                SimpleType::Int => write!(f, "{a} -> {b}"),
            },
        }
    }
}

/// EPCF terms.
#[derive(Clone, Debug)]
pub enum Term {
    Var(Var),
    App(Arc<Term>, Arc<Term>),
    /// `λx.M[σ]`
    Lam(Var, Subst, Arc<Term>),
    Zero,
    Pred(Arc<Term>),
    Succ(Arc<Term>),
    Ifz(Arc<Term>, Arc<Term>, Arc<Term>),
    Fix(Arc<Term>),
}

impl Term {
    pub fn var(v: &Var) -> Arc<Term> {
        Arc::new(Term::Var(v.clone()))
    }

    pub fn app(fun: Arc<Term>, arg: Arc<Term>) -> Arc<Term> {
        Arc::new(Term::App(fun, arg))
    }

    /// Left-nested application `head a1 ... an`.
    pub fn apps<I: IntoIterator<Item = Arc<Term>>>(head: Arc<Term>, args: I) -> Arc<Term> {
        args.into_iter().fold(head, Term::app)
    }

    /// Abstraction with the empty substitution.
    pub fn lam(binder: &Var, body: Arc<Term>) -> Arc<Term> {
        Arc::new(Term::Lam(binder.clone(), Subst::empty(), body))
    }

    pub fn lam_with(binder: &Var, subst: Subst, body: Arc<Term>) -> Arc<Term> {
        Arc::new(Term::Lam(binder.clone(), subst, body))
    }

    pub fn zero() -> Arc<Term> {
        Arc::new(Term::Zero)
    }

    pub fn pred(t: Arc<Term>) -> Arc<Term> {
        Arc::new(Term::Pred(t))
    }

    pub fn succ(t: Arc<Term>) -> Arc<Term> {
        Arc::new(Term::Succ(t))
    }

    pub fn ifz(l: Arc<Term>, m: Arc<Term>, n: Arc<Term>) -> Arc<Term> {
        Arc::new(Term::Ifz(l, m, n))
    }

    pub fn fix(t: Arc<Term>) -> Arc<Term> {
        Arc::new(Term::Fix(t))
    }

    /// The literal `succⁿ(0)`.
    pub fn numeral(n: u64) -> Arc<Term> {
        (0..n).fold(Term::zero(), |t, _| Term::succ(t))
    }

    /// True when every abstraction carries the empty substitution.
    pub fn is_pcf(&self) -> bool {
        deep(|| match self {
            Term::Var(_) | Term::Zero => true,
            Term::App(m, n) => m.is_pcf() && n.is_pcf(),
            Term::Lam(_, s, b) => s.is_empty() && b.is_pcf(),
            Term::Pred(m) | Term::Succ(m) | Term::Fix(m) => m.is_pcf(),
            Term::Ifz(l, m, n) => l.is_pcf() && m.is_pcf() && n.is_pcf(),
        })
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&crate::frontend::print_term(self))
    }
}

/// One entry `x ← (ρ, N)` of an explicit substitution.
#[derive(Clone, Debug)]
pub struct Binding {
    pub var: Var,
    pub closure: Closure,
}

/// An explicit substitution: an ordered list of bindings with pairwise
/// distinct domain variables. Cloning is cheap.
#[derive(Clone, Debug, Default)]
pub struct Subst(Arc<[Binding]>);

impl Subst {
    pub fn empty() -> Subst {
        Subst::default()
    }

    pub fn from_bindings(bindings: Vec<Binding>) -> Subst {
        Subst(bindings.into())
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn bindings(&self) -> &[Binding] {
        &self.0
    }

    pub fn iter(&self) -> impl DoubleEndedIterator<Item = &Binding> {
        self.0.iter()
    }

    pub fn domain(&self) -> impl Iterator<Item = &Var> {
        self.0.iter().map(|b| &b.var)
    }

    pub fn contains(&self, x: &Var) -> bool {
        self.0.iter().any(|b| &b.var == x)
    }

    /// `σ(x)`. Later bindings shadow earlier ones, which only matters if the
    /// distinct-domain invariant was broken by a caller.
    pub fn get(&self, x: &Var) -> Option<&Closure> {
        self.0.iter().rev().find(|b| &b.var == x).map(|b| &b.closure)
    }

    pub fn is_disjoint(&self, other: &Subst) -> bool {
        self.domain().all(|x| !other.contains(x))
    }

    /// `σ + ρ`.
    pub fn concat(&self, other: &Subst) -> Subst {
        if other.is_empty() {
            return self.clone();
        }
        if self.is_empty() {
            return other.clone();
        }
        let mut v = Vec::with_capacity(self.len() + other.len());
        v.extend(self.0.iter().cloned());
        v.extend(other.0.iter().cloned());
        Subst(v.into())
    }

    /// `σ + [x ← c]`.
    pub fn extend(&self, var: Var, closure: Closure) -> Subst {
        let mut v = Vec::with_capacity(self.len() + 1);
        v.extend(self.0.iter().cloned());
        v.push(Binding { var, closure });
        Subst(v.into())
    }

    /// The substitution without any binding for `x`.
    pub fn without(&self, x: &Var) -> Subst {
        if !self.contains(x) {
            return self.clone();
        }
        Subst(self.0.iter().filter(|b| &b.var != x).cloned().collect())
    }

    /// True when the domain variables are pairwise distinct.
    pub fn has_distinct_domain(&self) -> bool {
        let mut seen = HashSet::new();
        self.domain().all(|x| seen.insert(x.uid()))
    }

    pub(crate) fn ptr_id(&self) -> usize {
        self.0.as_ptr() as *const u8 as usize
    }
}

/// A term paired with the substitution giving meaning to its free variables.
#[derive(Clone, Debug)]
pub struct Closure {
    pub subst: Subst,
    pub term: Arc<Term>,
}

impl Closure {
    pub fn new(subst: Subst, term: Arc<Term>) -> Closure {
        Closure { subst, term }
    }

    /// `([], M)`
    pub fn bare(term: Arc<Term>) -> Closure {
        Closure {
            subst: Subst::empty(),
            term,
        }
    }
}

/// EPCF values: numerals and abstractions.
#[derive(Clone, Debug)]
pub enum EValue {
    Numeral(u64),
    Abstraction(Var, Subst, Arc<Term>),
}

impl EValue {
    pub fn to_term(&self) -> Arc<Term> {
        match self {
            EValue::Numeral(n) => Term::numeral(*n),
            EValue::Abstraction(x, s, b) => Term::lam_with(x, s.clone(), b.clone()),
        }
    }

    pub fn as_numeral(&self) -> Option<u64> {
        match self {
            EValue::Numeral(n) => Some(*n),
            EValue::Abstraction(..) => None,
        }
    }
}

impl fmt::Display for EValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EValue::Numeral(n) => write!(f, "{n}"),
            EValue::Abstraction(..) => write!(f, "{}", self.to_term()),
        }
    }
}

/// Sizes used as the termination measure of flattening and translation.
pub fn size(t: &Term) -> usize {
    deep(|| match t {
        Term::Var(_) | Term::Zero => 1,
        Term::App(m, n) => size(m) + size(n) + 1,
        Term::Lam(_, s, b) => subst_size(s) + size(b) + 1,
        Term::Pred(m) | Term::Succ(m) | Term::Fix(m) => size(m) + 1,
        Term::Ifz(l, m, n) => size(l) + size(m) + size(n) + 1,
    })
}

pub fn subst_size(s: &Subst) -> usize {
    s.iter().map(|b| closure_size(&b.closure)).sum()
}

pub fn closure_size(c: &Closure) -> usize {
    subst_size(&c.subst) + size(&c.term)
}

/// `FV(M)`; closures inside substitutions contribute nothing.
pub fn free_vars(t: &Term) -> HashSet<Var> {
    let mut out = HashSet::new();
    collect_free(t, &mut Vec::new(), &mut out);
    out
}

fn collect_free(t: &Term, bound: &mut Vec<Var>, out: &mut HashSet<Var>) {
    deep(|| match t {
        Term::Var(x) => {
            if !bound.contains(x) {
                out.insert(x.clone());
            }
        }
        Term::Zero => {}
        Term::App(m, n) => {
            collect_free(m, bound, out);
            collect_free(n, bound, out);
        }
        Term::Lam(x, s, b) => {
            let mark = bound.len();
            bound.push(x.clone());
            bound.extend(s.domain().cloned());
            collect_free(b, bound, out);
            bound.truncate(mark);
        }
        Term::Pred(m) | Term::Succ(m) | Term::Fix(m) => collect_free(m, bound, out),
        Term::Ifz(l, m, n) => {
            collect_free(l, bound, out);
            collect_free(m, bound, out);
            collect_free(n, bound, out);
        }
    })
}

pub fn is_closed(t: &Term) -> bool {
    free_vars(t).is_empty()
}

/// `Some(n)` iff `t` is literally `succⁿ(0)`.
pub fn numeral_of(t: &Term) -> Option<u64> {
    let mut n = 0u64;
    let mut cur = t;
    loop {
        match cur {
            Term::Zero => return Some(n),
            Term::Succ(m) => {
                n += 1;
                cur = m;
            }
            _ => return None,
        }
    }
}

/// Syntactic equality up to renaming of bound variables. Substitution
/// domains rename alongside binders; closure bodies are compared under their
/// own substitution only.
pub fn alpha_eq(a: &Term, b: &Term) -> bool {
    Alpha::default().terms(a, b)
}

pub fn alpha_eq_closure(a: &Closure, b: &Closure) -> bool {
    Alpha::default().closures(a, b)
}

#[derive(Default)]
struct Alpha {
    left: Vec<u64>,
    right: Vec<u64>,
}

impl Alpha {
    fn lookup(stack: &[u64], uid: u64) -> Option<usize> {
        stack.iter().rposition(|&u| u == uid)
    }

    fn terms(&mut self, a: &Term, b: &Term) -> bool {
        deep(|| match (a, b) {
            (Term::Var(x), Term::Var(y)) => {
                match (Self::lookup(&self.left, x.uid()), Self::lookup(&self.right, y.uid())) {
                    (Some(i), Some(j)) => i == j,
                    (None, None) => x == y,
                    _ => false,
                }
            }
            (Term::Zero, Term::Zero) => true,
            (Term::App(m1, n1), Term::App(m2, n2)) => self.terms(m1, m2) && self.terms(n1, n2),
            (Term::Lam(x1, s1, b1), Term::Lam(x2, s2, b2)) => {
                if s1.len() != s2.len() {
                    return false;
                }
                for (p, q) in s1.iter().zip(s2.iter()) {
                    if !Alpha::default().closures(&p.closure, &q.closure) {
                        return false;
                    }
                }
                let mark = self.left.len();
                self.left.extend(s1.domain().map(Var::uid));
                self.right.extend(s2.domain().map(Var::uid));
                self.left.push(x1.uid());
                self.right.push(x2.uid());
                let ok = self.terms(b1, b2);
                self.left.truncate(mark);
                self.right.truncate(mark);
                ok
            }
            (Term::Pred(m1), Term::Pred(m2)) | (Term::Succ(m1), Term::Succ(m2)) | (Term::Fix(m1), Term::Fix(m2)) => {
                self.terms(m1, m2)
            }
            (Term::Ifz(l1, m1, n1), Term::Ifz(l2, m2, n2)) => {
                self.terms(l1, l2) && self.terms(m1, m2) && self.terms(n1, n2)
            }
            _ => false,
        })
    }

    fn closures(&mut self, a: &Closure, b: &Closure) -> bool {
        if a.subst.len() != b.subst.len() {
            return false;
        }
        for (p, q) in a.subst.iter().zip(b.subst.iter()) {
            if !Alpha::default().closures(&p.closure, &q.closure) {
                return false;
            }
        }
        let mark = self.left.len();
        self.left.extend(a.subst.domain().map(Var::uid));
        self.right.extend(b.subst.domain().map(Var::uid));
        let ok = self.terms(&a.term, &b.term);
        self.left.truncate(mark);
        self.right.truncate(mark);
        ok
    }
}

/// `(σ, M)*`: the PCF term obtained by performing every explicit
/// substitution.
pub fn flatten(c: &Closure) -> Arc<Term> {
    flatten_in(&c.subst, &c.term)
}

fn flatten_in(s: &Subst, t: &Arc<Term>) -> Arc<Term> {
    deep(|| match &**t {
        Term::Var(x) => match s.get(x) {
            Some(c) => flatten(c),
            None => t.clone(),
        },
        Term::Zero => t.clone(),
        Term::Lam(x, rho, body) => {
            let inner = s.concat(rho).without(x);
            Term::lam(x, flatten_in(&inner, body))
        }
        Term::App(m, n) => Term::app(flatten_in(s, m), flatten_in(s, n)),
        Term::Fix(m) => Term::fix(flatten_in(s, m)),
        Term::Pred(m) => Term::pred(flatten_in(s, m)),
        Term::Succ(m) => Term::succ(flatten_in(s, m)),
        Term::Ifz(l, m, n) => Term::ifz(flatten_in(s, l), flatten_in(s, m), flatten_in(s, n)),
    })
}

/// `(σ, M) ∈ P†`
pub fn in_dagger(c: &Closure, p: &Term) -> bool {
    alpha_eq(&flatten(c), p)
}

/// Capture-avoiding `body[x := arg]`. Binders that would capture a free
/// variable of `arg` are renamed to fresh uids. Unchanged subterms are
/// shared with the input.
pub fn substitute(body: &Arc<Term>, x: &Var, arg: &Arc<Term>) -> Arc<Term> {
    let arg_fv = free_vars(arg);
    subst_go(body, x, arg, &arg_fv).unwrap_or_else(|| body.clone())
}

/// `body[x := arg]` for a closed `arg`, which no binder can capture.
pub(crate) fn substitute_closed(body: &Arc<Term>, x: &Var, arg: &Arc<Term>) -> Arc<Term> {
    subst_go(body, x, arg, &HashSet::new()).unwrap_or_else(|| body.clone())
}

fn subst_go(t: &Arc<Term>, x: &Var, arg: &Arc<Term>, arg_fv: &HashSet<Var>) -> Option<Arc<Term>> {
    deep(|| match &**t {
        Term::Var(y) => (y == x).then(|| arg.clone()),
        Term::Zero => None,
        Term::App(m, n) => {
            let (m2, n2) = (subst_go(m, x, arg, arg_fv), subst_go(n, x, arg, arg_fv));
            if m2.is_none() && n2.is_none() {
                return None;
            }
            Some(Term::app(
                m2.unwrap_or_else(|| m.clone()),
                n2.unwrap_or_else(|| n.clone()),
            ))
        }
        Term::Pred(m) => subst_go(m, x, arg, arg_fv).map(Term::pred),
        Term::Succ(m) => subst_go(m, x, arg, arg_fv).map(Term::succ),
        Term::Fix(m) => subst_go(m, x, arg, arg_fv).map(Term::fix),
        Term::Ifz(l, m, n) => {
            let l2 = subst_go(l, x, arg, arg_fv);
            let m2 = subst_go(m, x, arg, arg_fv);
            let n2 = subst_go(n, x, arg, arg_fv);
            if l2.is_none() && m2.is_none() && n2.is_none() {
                return None;
            }
            Some(Term::ifz(
                l2.unwrap_or_else(|| l.clone()),
                m2.unwrap_or_else(|| m.clone()),
                n2.unwrap_or_else(|| n.clone()),
            ))
        }
        Term::Lam(y, s, b) => {
            if y == x || s.contains(x) {
                return None;
            }
            let capturing = arg_fv.contains(y) || s.domain().any(|d| arg_fv.contains(d));
            if !capturing {
                return subst_go(b, x, arg, arg_fv).map(|b2| Term::lam_with(y, s.clone(), b2));
            }
            if !free_vars(t).contains(x) {
                return None;
            }
            // rename the binder and any capturing domain variable first
            let mut body = b.clone();
            let y2 = if arg_fv.contains(y) {
                let fresh = y.refresh();
                body = substitute(&body, y, &Term::var(&fresh));
                fresh
            } else {
                y.clone()
            };
            let mut bindings = Vec::with_capacity(s.len());
            for bd in s.iter() {
                if arg_fv.contains(&bd.var) {
                    let fresh = bd.var.refresh();
                    body = substitute(&body, &bd.var, &Term::var(&fresh));
                    bindings.push(Binding {
                        var: fresh,
                        closure: bd.closure.clone(),
                    });
                } else {
                    bindings.push(bd.clone());
                }
            }
            let body = subst_go(&body, x, arg, arg_fv).unwrap_or(body);
            Some(Term::lam_with(&y2, Subst::from_bindings(bindings), body))
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn id() -> Arc<Term> {
        let x = Var::fresh("x");
        Term::lam(&x, Term::var(&x))
    }

    #[test]
    fn sizes() {
        assert_eq!(subst_size(&Subst::empty()), 0);
        assert_eq!(size(&id()), 2);
        let x = Var::fresh("x");
        let c = Closure::new(
            Subst::empty().extend(x.clone(), Closure::bare(Term::zero())),
            Term::var(&x),
        );
        assert_eq!(closure_size(&c), 2);
    }

    #[test]
    fn free_variables() {
        assert!(free_vars(&id()).is_empty());
        let (x, y) = (Var::fresh("x"), Var::fresh("y"));
        let s = Subst::empty().extend(y.clone(), Closure::bare(Term::zero()));
        let t = Term::lam_with(&x, s, Term::succ(Term::var(&y)));
        assert!(free_vars(&t).is_empty());
        let z = Var::fresh("z");
        let open = Term::succ(Term::var(&z));
        assert_eq!(free_vars(&open), HashSet::from([z]));
    }

    #[test]
    fn numerals() {
        assert_eq!(numeral_of(&Term::numeral(2)), Some(2));
        assert_eq!(numeral_of(&Term::Zero), Some(0));
        let x = Var::fresh("x");
        assert_eq!(numeral_of(&Term::succ(Term::var(&x))), None);
    }

    #[test]
    fn alpha_equivalence() {
        assert!(alpha_eq(&id(), &id()));
        let x = Var::fresh("x");
        let not_id = Term::lam(&x, Term::succ(Term::var(&x)));
        assert!(!alpha_eq(&id(), &not_id));

        let mk = || {
            let (x, y) = (Var::fresh("x"), Var::fresh("y"));
            let s = Subst::empty().extend(y.clone(), Closure::bare(Term::zero()));
            Term::lam_with(&x, s, Term::var(&y))
        };
        assert!(alpha_eq(&mk(), &mk()));

        // λx.λy.x vs λx.λy.y
        let (x, y) = (Var::fresh("x"), Var::fresh("y"));
        let k = Term::lam(&x, Term::lam(&y, Term::var(&x)));
        let ki = Term::lam(&x, Term::lam(&y, Term::var(&y)));
        assert!(!alpha_eq(&k, &ki));
        // free variables compare by identity
        let (f, g) = (Var::fresh("f"), Var::fresh("f"));
        assert!(!alpha_eq(&Term::var(&f), &Term::var(&g)));
    }

    #[test]
    fn flatten_cases() {
        let x = Var::fresh("x");
        let c = Closure::new(
            Subst::empty().extend(x.clone(), Closure::bare(Term::zero())),
            Term::succ(Term::var(&x)),
        );
        assert!(alpha_eq(&flatten(&c), &Term::numeral(1)));

        let (x, y) = (Var::fresh("x"), Var::fresh("y"));
        let s = Subst::empty().extend(y.clone(), Closure::bare(Term::zero()));
        let t = Term::lam_with(&x, s, Term::var(&y));
        let flat = flatten(&Closure::bare(t));
        let z = Var::fresh("z");
        assert!(alpha_eq(&flat, &Term::lam(&z, Term::zero())));

        let omega = Term::fix(id());
        assert!(alpha_eq(&flatten(&Closure::bare(omega.clone())), &omega));
    }

    #[test]
    fn dagger_membership() {
        let p = Term::app(id(), Term::numeral(3));
        assert!(in_dagger(&Closure::bare(p.clone()), &p));
        let x = Var::fresh("x");
        let c = Closure::new(
            Subst::empty().extend(x.clone(), Closure::bare(Term::zero())),
            Term::succ(Term::var(&x)),
        );
        assert!(in_dagger(&c, &Term::numeral(1)));
        assert!(!in_dagger(&Closure::bare(id()), &Term::zero()));
    }

    #[test]
    fn substitution() {
        let x = Var::fresh("x");
        let r = substitute(&Term::succ(Term::var(&x)), &x, &Term::zero());
        assert!(alpha_eq(&r, &Term::numeral(1)));

        // (λy.x)[x := y] must not capture the free y
        let y = Var::fresh("y");
        let body = Term::lam(&y, Term::var(&x));
        let r = substitute(&body, &x, &Term::var(&y));
        match &*r {
            Term::Lam(y2, _, b) => {
                assert_ne!(y2, &y);
                assert!(matches!(&**b, Term::Var(v) if v == &y));
            }
            other => panic!("unexpected {other:?}"),
        }

        let r = substitute(&Term::var(&x), &x, &id());
        assert!(alpha_eq(&r, &id()));
    }

    #[test]
    fn substitution_respects_shadowing() {
        let x = Var::fresh("x");
        let t = Term::lam(&x, Term::var(&x));
        let r = substitute(&t, &x, &Term::zero());
        assert!(Arc::ptr_eq(&r, &t));
    }

    #[test]
    fn type_display_is_right_associative() {
        let t = SimpleType::arrows([SimpleType::Int, SimpleType::Int], SimpleType::Int);
        assert_eq!(t.to_string(), "int -> int -> int");
        let h = SimpleType::arrow(SimpleType::arrow(SimpleType::Int, SimpleType::Int), SimpleType::Int);
        assert_eq!(h.to_string(), "(int -> int) -> int");
    }
}
