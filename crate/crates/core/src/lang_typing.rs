// SPDX-License-Identifier: Apache-2.0

//! Type inference for EPCF and PCF terms.
//!
//! Inference is syntax-directed: one rule per term constructor, with the
//! guessed argument types of abstractions realized as unification
//! variables. Closures in explicit substitutions are typed independently,
//! each under the context synthesized from its own substitution, and their
//! principal types are cached per closure node.

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use crate::syntax::{SimpleType, Subst, Term, Var};
use crate::types::{InferType, Scheme, Unifier, UnifyError};

/// An ordered typing context. Variables `?k` occurring in the entries are
/// shared across the whole context.
#[derive(Clone, Default)]
pub struct TypeEnv {
    entries: Vec<(Var, InferType)>,
}

impl TypeEnv {
    pub fn new() -> TypeEnv {
        TypeEnv::default()
    }

    /// `Γ, x : α`. Panics if `x ∈ dom(Γ)`.
    pub fn with(mut self, x: &Var, ty: &SimpleType) -> TypeEnv {
        self.push(x, InferType::from_simple(ty));
        self
    }

    fn push(&mut self, x: &Var, ty: InferType) {
        assert!(self.get(x).is_none(), "variable {x:?} already in context");
        self.entries.push((x.clone(), ty));
    }

    pub fn get(&self, x: &Var) -> Option<&InferType> {
        self.entries.iter().find(|(y, _)| y == x).map(|(_, t)| t)
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Var, &InferType)> {
        self.entries.iter().map(|(x, t)| (x, t))
    }

    /// The entry for `x` as a scheme of its own.
    pub fn scheme_of(&self, x: &Var) -> Option<Scheme> {
        self.get(x).map(Scheme::normalize)
    }
}

impl fmt::Display for TypeEnv {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        // One renaming for all entries, since variables are shared.
        let mut order = Vec::new();
        for (_, t) in &self.entries {
            t.vars_in_order(&mut order);
        }
        let name = |v: u32| {
            let k = order.iter().position(|w| *w == v).expect("collected") as u32;
            crate::types::schematic_name(k)
        };
        f.write_str("{")?;
        for (k, (x, t)) in self.entries.iter().enumerate() {
            if k > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{}: {}", x.name(), t.render(&name))?;
        }
        f.write_str("}")
    }
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
#[error("{message} in `{location}`")]
pub struct TypeError {
    /// The offending subterm, printed and truncated.
    pub location: String,
    pub message: String,
    /// The two types that failed to unify, when applicable.
    pub conflict: Option<(InferType, InferType)>,
}

fn excerpt(t: &Term) -> String {
    const MAX: usize = 120;
    let s = t.to_string();
    if s.chars().count() <= MAX {
        s
    } else {
        let cut: String = s.chars().take(MAX).collect();
        format!("{cut} ...")
    }
}

impl TypeError {
    fn at(t: &Term, message: impl Into<String>) -> TypeError {
        TypeError {
            location: excerpt(t),
            message: message.into(),
            conflict: None,
        }
    }

    fn unify(t: &Term, e: UnifyError) -> TypeError {
        let conflict = match &e {
            UnifyError::Clash(a, b) => Some((a.clone(), b.clone())),
            UnifyError::Occurs(v, b) => Some((InferType::Var(*v), b.clone())),
        };
        TypeError {
            location: excerpt(t),
            message: e.to_string(),
            conflict,
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Lang {
    Pcf,
    Epcf,
}

struct Infer {
    u: Unifier,
    lang: Lang,
    /// Principal schemes of closures, keyed by (subst, body) identity.
    closures: HashMap<(usize, usize), Scheme>,
}

type Ctx = Vec<(u64, InferType)>;

impl Infer {
    fn new(lang: Lang) -> Infer {
        Infer {
            u: Unifier::new(),
            lang,
            closures: HashMap::new(),
        }
    }

    fn ctx_of(&mut self, env: &TypeEnv) -> Ctx {
        // Variables are shared across entries, so rename them jointly.
        let mut map = HashMap::new();
        env.entries
            .iter()
            .map(|(x, t)| (x.uid(), self.import(t, &mut map)))
            .collect()
    }

    fn import(&mut self, t: &InferType, map: &mut HashMap<u32, InferType>) -> InferType {
        match t {
            InferType::Int => InferType::Int,
            InferType::Var(v) => map.entry(*v).or_insert_with(|| self.u.fresh()).clone(),
            InferType::Arrow(a, b) => InferType::arrow(self.import(a, map), self.import(b, map)),
        }
    }

    fn unify(&mut self, at: &Term, a: &InferType, b: &InferType) -> Result<(), TypeError> {
        self.u.unify(a, b).map_err(|e| TypeError::unify(at, e))
    }

    fn term(&mut self, ctx: &mut Ctx, t: &Term) -> Result<InferType, TypeError> {
        crate::deep(|| match t {
            Term::Var(x) => ctx
                .iter()
                .rev()
                .find(|(u, _)| *u == x.uid())
                .map(|(_, ty)| ty.clone())
                .ok_or_else(|| TypeError::at(t, format!("unbound variable '{}'", x.name()))),
            Term::Zero => Ok(InferType::Int),
            Term::Succ(_) | Term::Pred(_) => {
                // Walk the spine iteratively; literals can be long.
                let mut cur = t;
                while let Term::Succ(m) | Term::Pred(m) = cur {
                    cur = m;
                }
                let base = self.term(ctx, cur)?;
                self.unify(cur, &base, &InferType::Int)?;
                Ok(InferType::Int)
            }
            Term::Fix(m) => {
                let tm = self.term(ctx, m)?;
                let a = self.u.fresh();
                self.unify(t, &tm, &InferType::arrow(a.clone(), a.clone()))?;
                Ok(a)
            }
            Term::Ifz(l, m, n) => {
                let tl = self.term(ctx, l)?;
                self.unify(l, &tl, &InferType::Int)?;
                let tm = self.term(ctx, m)?;
                let tn = self.term(ctx, n)?;
                self.unify(t, &tm, &tn)?;
                Ok(tm)
            }
            Term::App(m, n) => {
                let tm = self.term(ctx, m)?;
                let tn = self.term(ctx, n)?;
                let b = self.u.fresh();
                self.unify(t, &tm, &InferType::arrow(tn, b.clone()))?;
                Ok(b)
            }
            Term::Lam(x, s, body) => {
                if self.lang == Lang::Pcf && !s.is_empty() {
                    return Err(TypeError::at(t, "explicit substitution in a PCF term"));
                }
                let mark = ctx.len();
                for (y, scheme) in self.subst(s)? {
                    let ty = self.u.instantiate(&scheme);
                    ctx.push((y.uid(), ty));
                }
                let a = self.u.fresh();
                ctx.push((x.uid(), a.clone()));
                let b = self.term(ctx, body);
                ctx.truncate(mark);
                Ok(InferType::arrow(a, b?))
            }
        })
    }

    /// `σ ⊨ Δ`, with each entry as a principal scheme.
    fn subst(&mut self, s: &Subst) -> Result<Vec<(Var, Scheme)>, TypeError> {
        s.iter()
            .map(|b| Ok((b.var.clone(), self.closure(&b.closure.subst, &b.closure.term)?)))
            .collect()
    }

    /// `ρ ⊨ Δ & Δ ⊢ N : α`, typed under `Δ` alone.
    fn closure(&mut self, rho: &Subst, n: &Arc<Term>) -> Result<Scheme, TypeError> {
        let key = (rho.ptr_id(), Arc::as_ptr(n) as usize);
        if let Some(s) = self.closures.get(&key) {
            return Ok(s.clone());
        }
        let mut ctx = Ctx::new();
        for (y, scheme) in self.subst(rho)? {
            let ty = self.u.instantiate(&scheme);
            ctx.push((y.uid(), ty));
        }
        let ty = self.term(&mut ctx, n)?;
        let scheme = self.u.normalize(&ty);
        self.closures.insert(key, scheme.clone());
        Ok(scheme)
    }
}

/// The principal type of `t` under `env` in the EPCF system.
pub fn infer_epcf(env: &TypeEnv, t: &Term) -> Result<Scheme, TypeError> {
    let mut inf = Infer::new(Lang::Epcf);
    let mut ctx = inf.ctx_of(env);
    let ty = inf.term(&mut ctx, t)?;
    Ok(inf.u.normalize(&ty))
}

/// Whether `env ⊢ t : ty` is derivable in the EPCF system.
pub fn check_epcf(env: &TypeEnv, t: &Term, ty: &SimpleType) -> Result<bool, TypeError> {
    check(Lang::Epcf, env, t, ty)
}

/// The principal type of `t` under the PCF rules. Rejects explicit
/// substitutions.
pub fn infer_pcf(env: &TypeEnv, t: &Term) -> Result<Scheme, TypeError> {
    let mut inf = Infer::new(Lang::Pcf);
    let mut ctx = inf.ctx_of(env);
    let ty = inf.term(&mut ctx, t)?;
    Ok(inf.u.normalize(&ty))
}

pub fn check_pcf(env: &TypeEnv, t: &Term, ty: &SimpleType) -> Result<bool, TypeError> {
    check(Lang::Pcf, env, t, ty)
}

fn check(lang: Lang, env: &TypeEnv, t: &Term, ty: &SimpleType) -> Result<bool, TypeError> {
    let mut inf = Infer::new(lang);
    let mut ctx = inf.ctx_of(env);
    let inferred = inf.term(&mut ctx, t)?;
    Ok(inf.u.unify(&inferred, &InferType::from_simple(ty)).is_ok())
}

/// `σ ⊨ Δ`. Entries are renamed apart, so `Δ` shares no variables between
/// distinct closures.
pub fn check_subst(s: &Subst) -> Result<TypeEnv, TypeError> {
    let mut inf = Infer::new(Lang::Epcf);
    let delta = inf.subst(s)?;
    let mut u = Unifier::new();
    let mut env = TypeEnv::new();
    for (y, scheme) in delta {
        let ty = u.instantiate(&scheme);
        env.push(&y, ty);
    }
    Ok(env)
}

/// The principal type of a closure `(σ, M)`, typed under `Δ` from `σ ⊨ Δ`.
pub fn infer_closure(s: &Subst, t: &Arc<Term>) -> Result<Scheme, TypeError> {
    Infer::new(Lang::Epcf).closure(s, t)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::frontend::{parse_term, parse_type};

    fn epcf(src: &str) -> String {
        infer_epcf(&TypeEnv::new(), &parse_term(src).unwrap())
            .unwrap()
            .to_string()
    }

    #[test]
    fn epcf_examples() {
        assert_eq!(epcf("\\x { y <- ({}, 0) } . succ y"), "?a -> int");
        assert_eq!(
            epcf("fix (\\f x y. ifz y x (f (succ x) (pred y)))"),
            "int -> int -> int"
        );
        assert_eq!(epcf("fix (\\x. x)"), "?a");
    }

    #[test]
    fn checks_against_ground_types() {
        let env = TypeEnv::new();
        let ok = |src: &str, ty: &str| check_epcf(&env, &parse_term(src).unwrap(), &parse_type(ty).unwrap()).unwrap();
        assert!(ok("(\\s n. s (s n)) (\\x. succ x)", "int -> int"));
        assert!(ok("(\\x. succ x) 0", "int"));
        assert!(!ok("0", "int -> int"));
        assert!(ok("fix (\\x. x)", "(int -> int) -> int"));
    }

    #[test]
    fn substitution_contexts() {
        assert!(check_subst(&Subst::empty()).unwrap().is_empty());
        let Term::Lam(_, s, _) = &*parse_term("\\x { y <- ({}, 0) } . y").unwrap() else {
            panic!()
        };
        let delta = check_subst(s).unwrap();
        assert_eq!(delta.to_string(), "{y: int}");
        let Term::Lam(_, s, _) = &*parse_term("\\x { y <- ({}, \\z. z) } . y").unwrap() else {
            panic!()
        };
        assert_eq!(check_subst(s).unwrap().to_string(), "{y: ?a -> ?a}");
        let Term::Lam(_, s, _) = &*parse_term("\\x { y <- ({}, \\z. z), w <- ({}, \\z. z) } . y").unwrap() else {
            panic!()
        };
        assert_eq!(check_subst(s).unwrap().to_string(), "{y: ?a -> ?a, w: ?b -> ?b}");
    }

    #[test]
    fn closures_are_typed_in_their_own_context() {
        // `x` inside the closure is not the outer binder.
        let t = parse_term("\\x { y <- ({}, x) } . y").unwrap();
        assert!(infer_epcf(&TypeEnv::new(), &t).is_err());
    }

    #[test]
    fn pcf_rules() {
        let env = TypeEnv::new();
        let pcf = |src: &str| infer_pcf(&env, &parse_term(src).unwrap());
        assert_eq!(pcf("\\x. x").unwrap().to_string(), "?a -> ?a");
        assert_eq!(pcf("pred 0").unwrap().to_string(), "int");
        let err = pcf("\\x. ifz x 0 (\\y. y)").unwrap_err();
        assert!(err.conflict.is_some());
        assert!(pcf("\\x { y <- ({}, 0) } . y").is_err());
    }

    #[test]
    fn environments_and_errors() {
        let x = Var::fresh("x");
        let env = TypeEnv::new().with(&x, &SimpleType::Int);
        let t = Term::succ(Term::var(&x));
        assert_eq!(infer_epcf(&env, &t).unwrap().to_string(), "int");
        assert!(infer_epcf(&TypeEnv::new(), &t).is_err());
        let err = infer_epcf(&TypeEnv::new(), &parse_term("\\f. f f").unwrap()).unwrap_err();
        assert!(err.message.contains("occurs"));
    }
}
