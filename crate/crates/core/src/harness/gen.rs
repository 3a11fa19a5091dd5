// SPDX-License-Identifier: Apache-2.0

//! Random well-typed PCF programs and EPCF decompositions of them.

use std::sync::Arc;

use rand::seq::IndexedRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::syntax::{free_vars, Binding, Closure, SimpleType, Subst, Term, Var};

#[derive(Clone, Debug, PartialEq)]
pub struct GenConfig {
    pub seed: u64,
    /// Approximate number of term constructors; at least 1.
    pub max_size: usize,
    /// Chance that a production introduces a recursive definition.
    pub fix_probability: f64,
    pub target: SimpleType,
}

impl Default for GenConfig {
    fn default() -> GenConfig {
        GenConfig {
            seed: 0,
            max_size: 30,
            fix_probability: 0.15,
            target: SimpleType::Int,
        }
    }
}

/// Share of recursive definitions whose recursive calls are unrestricted
/// (and so may diverge). The rest recurse on a decreasing counter.
const WILD_FIX: f64 = 0.1;

#[derive(Clone)]
struct Entry {
    var: Var,
    ty: SimpleType,
    /// For a recursive function, the counter its calls must decrease.
    guard: Option<Var>,
}

struct Gen {
    rng: ChaCha8Rng,
    fix_probability: f64,
    ctx: Vec<Entry>,
    names: u32,
}

fn int() -> SimpleType {
    SimpleType::Int
}

fn arrow(a: SimpleType, b: SimpleType) -> SimpleType {
    SimpleType::arrow(a, b)
}

/// The argument types of `t` if its final result is `goal`.
fn spine_to(t: &SimpleType, goal: &SimpleType) -> Option<Vec<SimpleType>> {
    let mut args = Vec::new();
    let mut cur = t;
    loop {
        if cur == goal {
            return Some(args);
        }
        match cur {
            SimpleType::Arrow(a, b) => {
                args.push((**a).clone());
                cur = b;
            }
            SimpleType::Int => return None,
        }
    }
}

impl Gen {
    fn fresh(&mut self, base: &str) -> Var {
        self.names += 1;
        Var::fresh(&format!("{base}{}", self.names))
    }

    fn small_type(&mut self) -> SimpleType {
        match self.rng.random_range(0..20) {
            0..14 => int(),
            14..19 => arrow(int(), int()),
            _ => arrow(arrow(int(), int()), int()),
        }
    }

    fn literal(&mut self) -> Arc<Term> {
        let k = if self.rng.random_bool(0.8) {
            self.rng.random_range(0..4)
        } else {
            self.rng.random_range(4..9)
        };
        Term::numeral(k)
    }

    fn with_var<R>(&mut self, var: &Var, ty: &SimpleType, guard: Option<Var>, f: impl FnOnce(&mut Gen) -> R) -> R {
        self.ctx.push(Entry {
            var: var.clone(),
            ty: ty.clone(),
            guard,
        });
        let r = f(self);
        self.ctx.pop();
        r
    }

    /// A variable of exactly type `ty`, or a guarded recursive call.
    fn variable(&mut self, ty: &SimpleType) -> Option<Arc<Term>> {
        let hits: Vec<Entry> = self
            .ctx
            .iter()
            .filter(|e| match &e.guard {
                None => &e.ty == ty,
                Some(_) => matches!(&e.ty, SimpleType::Arrow(_, r) if **r == *ty),
            })
            .cloned()
            .collect();
        let e = hits.choose(&mut self.rng)?;
        Some(match &e.guard {
            None => Term::var(&e.var),
            Some(n) => Term::app(Term::var(&e.var), Term::pred(Term::var(n))),
        })
    }

    fn leaf(&mut self, ty: &SimpleType) -> Arc<Term> {
        if self.rng.random_bool(0.6) {
            if let Some(v) = self.variable(ty) {
                return v;
            }
        }
        match ty {
            SimpleType::Int => self.literal(),
            SimpleType::Arrow(a, b) => {
                let x = self.fresh("x");
                let (a, b) = ((**a).clone(), (**b).clone());
                let body = self.with_var(&x, &a, None, |g| g.leaf(&b));
                Term::lam(&x, body)
            }
        }
    }

    fn split(&mut self, size: usize, parts: usize) -> Vec<usize> {
        let mut left = size.saturating_sub(1);
        let mut out = Vec::with_capacity(parts);
        for k in 0..parts {
            let share = if k + 1 == parts {
                left
            } else {
                self.rng.random_range(0..=left / (parts - k) * 2).min(left)
            };
            out.push(share.max(1));
            left -= share;
        }
        out
    }

    /// Applies a context variable whose type ends in `ty` to fresh arguments.
    fn call(&mut self, ty: &SimpleType, size: usize) -> Option<Arc<Term>> {
        let heads: Vec<(Var, Vec<SimpleType>)> = self
            .ctx
            .iter()
            .filter(|e| e.guard.is_none())
            .filter_map(|e| {
                let args = spine_to(&e.ty, ty)?;
                (!args.is_empty()).then(|| (e.var.clone(), args))
            })
            .collect();
        let (head, args) = heads.choose(&mut self.rng)?.clone();
        let sizes = self.split(size, args.len());
        let args: Vec<Arc<Term>> = args.iter().zip(sizes).map(|(a, s)| self.term(a, s)).collect();
        Some(Term::apps(Term::var(&head), args))
    }

    /// `fix (λf n. ifz n B S) A`, with `f` only called on `pred n` in `S`.
    fn recursion(&mut self, ty: &SimpleType, size: usize) -> Arc<Term> {
        let sizes = self.split(size, 3);
        let (f, n) = (self.fresh("f"), self.fresh("n"));
        let fty = arrow(int(), ty.clone());
        let base = self.with_var(&n, &int(), None, |g| g.term(ty, sizes[0]));
        let step = self.with_var(&n, &int(), None, |g| {
            g.with_var(&f, &fty, Some(n.clone()), |g| g.term(ty, sizes[1]))
        });
        let body = Term::lam(&f, Term::lam(&n, Term::ifz(Term::var(&n), base, step)));
        let arg = self.term(&int(), sizes[2].min(4));
        Term::app(Term::fix(body), arg)
    }

    /// `fix (λf. M)` with unrestricted use of `f`.
    fn wild_fix(&mut self, ty: &SimpleType, size: usize) -> Arc<Term> {
        let f = self.fresh("f");
        let body = self.with_var(&f, ty, None, |g| g.term(ty, size.saturating_sub(2)));
        Term::fix(Term::lam(&f, body))
    }

    fn term(&mut self, ty: &SimpleType, size: usize) -> Arc<Term> {
        crate::deep(|| self.term_inner(ty, size))
    }

    fn term_inner(&mut self, ty: &SimpleType, size: usize) -> Arc<Term> {
        if size <= 1 {
            return self.leaf(ty);
        }
        if size >= 6 && self.rng.random_bool(self.fix_probability) {
            return if self.rng.random_bool(WILD_FIX) {
                self.wild_fix(ty, size)
            } else {
                self.recursion(ty, size)
            };
        }
        let roll = self.rng.random_range(0..100);
        match ty {
            SimpleType::Int => match roll {
                0..8 => self.leaf(ty),
                8..22 => Term::succ(self.term(ty, size - 1)),
                22..34 => Term::pred(self.term(ty, size - 1)),
                34..52 => self.ifz(ty, size),
                52..72 => self.call(ty, size).unwrap_or_else(|| self.application(ty, size)),
                _ => self.application(ty, size),
            },
            SimpleType::Arrow(a, b) => match roll {
                0..60 => {
                    let x = self.fresh("x");
                    let (a, b) = ((**a).clone(), (**b).clone());
                    let body = self.with_var(&x, &a, None, |g| g.term(&b, size - 1));
                    Term::lam(&x, body)
                }
                60..72 => self.ifz(ty, size),
                72..86 => self.call(ty, size).unwrap_or_else(|| self.application(ty, size)),
                _ => self.application(ty, size),
            },
        }
    }

    fn ifz(&mut self, ty: &SimpleType, size: usize) -> Arc<Term> {
        let s = self.split(size, 3);
        let l = self.term(&int(), s[0]);
        let m = self.term(ty, s[1]);
        let n = self.term(ty, s[2]);
        Term::ifz(l, m, n)
    }

    fn application(&mut self, ty: &SimpleType, size: usize) -> Arc<Term> {
        let a = self.small_type();
        let s = self.split(size, 2);
        let f = self.term(&arrow(a.clone(), ty.clone()), s[0]);
        let x = self.term(&a, s[1]);
        Term::app(f, x)
    }
}

/// A closed PCF program typable at `cfg.target`; deterministic per seed.
pub fn gen_typed_program(cfg: &GenConfig) -> Arc<Term> {
    let mut g = Gen {
        rng: ChaCha8Rng::seed_from_u64(cfg.seed),
        fix_probability: cfg.fix_probability,
        ctx: Vec::new(),
        names: 0,
    };
    g.term(&cfg.target, cfg.max_size.max(1))
}

/// Closed subterms in preorder, `0` excluded.
fn closed_subterms(t: &Arc<Term>, out: &mut Vec<Arc<Term>>) {
    if free_vars(t).is_empty() && !matches!(**t, Term::Zero) {
        out.push(t.clone());
    }
    match &**t {
        Term::Var(_) | Term::Zero => {}
        Term::Lam(_, _, b) | Term::Pred(b) | Term::Succ(b) | Term::Fix(b) => closed_subterms(b, out),
        Term::App(m, n) => {
            closed_subterms(m, out);
            closed_subterms(n, out);
        }
        Term::Ifz(l, m, n) => {
            closed_subterms(l, out);
            closed_subterms(m, out);
            closed_subterms(n, out);
        }
    }
}

/// Replaces every subterm pointer-equal to `target` by `y`.
fn replace(t: &Arc<Term>, target: &Arc<Term>, y: &Arc<Term>) -> Arc<Term> {
    if Arc::ptr_eq(t, target) {
        return y.clone();
    }
    let r = |s: &Arc<Term>| replace(s, target, y);
    match &**t {
        Term::Var(_) | Term::Zero => t.clone(),
        Term::Lam(x, s, b) => Term::lam_with(x, s.clone(), r(b)),
        Term::App(m, n) => Term::app(r(m), r(n)),
        Term::Pred(m) => Term::pred(r(m)),
        Term::Succ(m) => Term::succ(r(m)),
        Term::Fix(m) => Term::fix(r(m)),
        Term::Ifz(l, m, n) => Term::ifz(r(l), r(m), r(n)),
    }
}

fn decompose_in(rng: &mut ChaCha8Rng, t: &Arc<Term>, depth: u32) -> (Subst, Arc<Term>) {
    // Explicit substitutions on abstractions below the root.
    let body = push_into_lambdas(rng, t, depth);
    let mut cands = Vec::new();
    closed_subterms(&body, &mut cands);
    let mut bindings = Vec::new();
    let mut m = body;
    let rounds = rng.random_range(0..3);
    for _ in 0..rounds {
        let proper: Vec<&Arc<Term>> = cands.iter().filter(|c| !Arc::ptr_eq(c, &m)).collect();
        let Some(&n) = proper.choose(rng) else { break };
        let n = n.clone();
        let y = Var::fresh("y");
        let replaced = replace(&m, &n, &Term::var(&y));
        if Arc::ptr_eq(&replaced, &m) {
            continue;
        }
        m = replaced;
        let (tau, n) = if depth < 2 {
            decompose_in(rng, &n, depth + 1)
        } else {
            (Subst::empty(), n)
        };
        bindings.push(Binding {
            var: y,
            closure: Closure::new(tau, n),
        });
        cands.clear();
        closed_subterms(&m, &mut cands);
    }
    bindings.reverse();
    (Subst::from_bindings(bindings), m)
}

fn push_into_lambdas(rng: &mut ChaCha8Rng, t: &Arc<Term>, depth: u32) -> Arc<Term> {
    let r = |rng: &mut ChaCha8Rng, s: &Arc<Term>| push_into_lambdas(rng, s, depth);
    match &**t {
        Term::Var(_) | Term::Zero => t.clone(),
        Term::Lam(x, s, b) => {
            let b = r(rng, b);
            if s.is_empty() && depth < 2 && rng.random_bool(0.3) {
                let (rho, b) = decompose_in(rng, &b, depth + 1);
                // Only closed subterms moved, so `x` stays the innermost binder.
                Term::lam_with(x, rho, b)
            } else {
                Term::lam_with(x, s.clone(), b)
            }
        }
        Term::App(m, n) => Term::app(r(rng, m), r(rng, n)),
        Term::Pred(m) => Term::pred(r(rng, m)),
        Term::Succ(m) => Term::succ(r(rng, m)),
        Term::Fix(m) => Term::fix(r(rng, m)),
        Term::Ifz(l, m, n) => Term::ifz(r(rng, l), r(rng, m), r(rng, n)),
    }
}

/// A random `(σ, M)` whose flattening is α-equal to the PCF term `p`.
pub fn decompose(p: &Arc<Term>, seed: u64) -> Closure {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (s, m) = decompose_in(&mut rng, p, 0);
    Closure::new(s, m)
}

/// An untyped random closure whose free variables are among `free`.
pub fn gen_closure(seed: u64, free: &[Var], size: usize) -> Closure {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    random_closure(&mut rng, free, size, 0)
}

fn random_closure(rng: &mut ChaCha8Rng, free: &[Var], size: usize, depth: u32) -> Closure {
    let mut scope = free.to_vec();
    let mut bindings = Vec::new();
    if depth < 2 {
        for _ in 0..rng.random_range(0..3) {
            let y = Var::fresh("y");
            let c = random_closure(rng, &[], size / 3 + 1, depth + 1);
            bindings.push(Binding {
                var: y.clone(),
                closure: c,
            });
            scope.push(y);
        }
    }
    let t = random_term(rng, &mut scope, size, depth);
    Closure::new(Subst::from_bindings(bindings), t)
}

fn random_term(rng: &mut ChaCha8Rng, scope: &mut Vec<Var>, size: usize, depth: u32) -> Arc<Term> {
    if size <= 1 {
        return match scope.choose(rng) {
            Some(v) if rng.random_bool(0.7) => Term::var(v),
            _ => Term::numeral(rng.random_range(0..3)),
        };
    }
    let s = size - 1;
    match rng.random_range(0..7) {
        0 => {
            let x = Var::fresh("x");
            let c = if depth < 2 && rng.random_bool(0.3) {
                random_closure(rng, &[], s / 3 + 1, depth + 1).subst
            } else {
                Subst::empty()
            };
            let mut inner: Vec<Var> = scope.clone();
            inner.extend(c.domain().cloned());
            inner.push(x.clone());
            let b = random_term(rng, &mut inner, s, depth);
            Term::lam_with(&x, c, b)
        }
        1 | 2 => {
            let k = rng.random_range(1..s.max(2));
            Term::app(
                random_term(rng, scope, k, depth),
                random_term(rng, scope, s - k.min(s), depth),
            )
        }
        3 => Term::succ(random_term(rng, scope, s, depth)),
        4 => Term::pred(random_term(rng, scope, s, depth)),
        5 => Term::fix(random_term(rng, scope, s, depth)),
        _ => {
            let k = (s / 3).max(1);
            Term::ifz(
                random_term(rng, scope, k, depth),
                random_term(rng, scope, k, depth),
                random_term(rng, scope, s.saturating_sub(2 * k).max(1), depth),
            )
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lang_typing::{check_pcf, TypeEnv};
    use crate::syntax::{alpha_eq, flatten, is_closed, numeral_of};

    #[test]
    fn programs_are_closed_and_typed() {
        for seed in 0..200 {
            for target in [int(), arrow(int(), int())] {
                let cfg = GenConfig {
                    seed,
                    target: target.clone(),
                    ..GenConfig::default()
                };
                let p = gen_typed_program(&cfg);
                assert!(is_closed(&p));
                assert!(p.is_pcf());
                assert_eq!(check_pcf(&TypeEnv::new(), &p, &target), Ok(true), "{p}");
            }
        }
    }

    #[test]
    fn tiny_budget_gives_a_literal() {
        let cfg = GenConfig {
            max_size: 1,
            ..GenConfig::default()
        };
        assert!(numeral_of(&gen_typed_program(&cfg)).is_some());
    }

    #[test]
    fn generation_is_deterministic() {
        let cfg = GenConfig {
            seed: 42,
            ..GenConfig::default()
        };
        assert!(alpha_eq(&gen_typed_program(&cfg), &gen_typed_program(&cfg)));
    }

    #[test]
    fn decompositions_flatten_back() {
        let mut nontrivial = 0;
        for seed in 0..200 {
            let p = gen_typed_program(&GenConfig {
                seed,
                ..GenConfig::default()
            });
            let c = decompose(&p, seed);
            nontrivial += usize::from(!c.subst.is_empty());
            assert!(alpha_eq(&flatten(&c), &p), "{p}");
        }
        assert!(nontrivial > 50);
    }
}
