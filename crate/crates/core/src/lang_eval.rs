// SPDX-License-Identifier: Apache-2.0

//! Big-step evaluation with fuel.
//!
//! Both evaluators run on an explicit continuation stack so that deep
//! derivations do not exhaust the native stack. Every inference rule
//! applied costs one unit of fuel.

use std::fmt;
use std::sync::Arc;

use crate::syntax::{free_vars, numeral_of, substitute, substitute_closed, Closure, EValue, Subst, Term, Var};

/// Remaining rule applications.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Fuel {
    pub remaining: u64,
}

impl Fuel {
    pub fn new(n: u64) -> Fuel {
        Fuel { remaining: n }
    }

    /// Consumes one unit; false once exhausted.
    fn tick(&mut self) -> bool {
        if self.remaining == 0 {
            false
        } else {
            self.remaining -= 1;
            true
        }
    }
}

#[derive(Clone, Debug)]
pub enum Outcome {
    Value(EValue),
    Timeout,
    RuntimeFault(String),
}

impl Outcome {
    pub fn as_numeral(&self) -> Option<u64> {
        match self {
            Outcome::Value(v) => v.as_numeral(),
            _ => None,
        }
    }

    pub fn is_timeout(&self) -> bool {
        matches!(self, Outcome::Timeout)
    }

    pub fn is_fault(&self) -> bool {
        matches!(self, Outcome::RuntimeFault(_))
    }
}

impl fmt::Display for Outcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Outcome::Value(v) => write!(f, "{v}"),
            Outcome::Timeout => f.write_str("timeout"),
            Outcome::RuntimeFault(msg) => write!(f, "fault: {msg}"),
        }
    }
}

enum Frame {
    Succ,
    Pred,
    Ifz(Subst, Arc<Term>, Arc<Term>),
    /// Pending argument of a (β_v) premise, with the caller's environment.
    Arg(Subst, Arc<Term>),
}

fn kind(v: &EValue) -> &'static str {
    match v {
        EValue::Numeral(_) => "a numeral",
        EValue::Abstraction(..) => "an abstraction",
    }
}

/// `σ ▷ t ⇓_d V`
pub fn eval_epcf(s: &Subst, t: &Arc<Term>, fuel: &mut Fuel) -> Outcome {
    let mut stack: Vec<Frame> = Vec::new();
    let mut env = s.clone();
    let mut cur = t.clone();
    loop {
        // Evaluate `env ▷ cur` down to a value, pushing continuations.
        let value = loop {
            if !fuel.tick() {
                return Outcome::Timeout;
            }
            if let Some(n) = numeral_of(&cur) {
                break EValue::Numeral(n);
            }
            match &*cur {
                Term::Var(x) => match env.get(x) {
                    Some(c) => {
                        let c = c.clone();
                        env = c.subst;
                        cur = c.term;
                    }
                    None => return Outcome::RuntimeFault(format!("unbound variable '{}'", x.name())),
                },
                Term::Lam(x, rho, body) => break fun(&env, x, rho, body),
                Term::Fix(m) => cur = Term::app(m.clone(), cur.clone()),
                Term::Ifz(l, m, n) => {
                    stack.push(Frame::Ifz(env.clone(), m.clone(), n.clone()));
                    cur = l.clone();
                }
                Term::Pred(m) => {
                    stack.push(Frame::Pred);
                    cur = m.clone();
                }
                Term::Succ(m) => {
                    stack.push(Frame::Succ);
                    cur = m.clone();
                }
                Term::App(m, n) => {
                    stack.push(Frame::Arg(env.clone(), n.clone()));
                    cur = m.clone();
                }
                Term::Zero => unreachable!("zero is a numeral"),
            }
        };
        // Feed the value to the continuations until one needs evaluation.
        let mut value = value;
        loop {
            let Some(frame) = stack.pop() else {
                return Outcome::Value(value);
            };
            match (frame, value) {
                (Frame::Succ, EValue::Numeral(n)) => value = EValue::Numeral(n + 1),
                (Frame::Pred, EValue::Numeral(n)) => value = EValue::Numeral(n.saturating_sub(1)),
                (Frame::Ifz(sigma, m, n), EValue::Numeral(k)) => {
                    env = sigma;
                    cur = if k == 0 { m } else { n };
                    break;
                }
                (Frame::Arg(sigma, n), EValue::Abstraction(x, rho, body)) => {
                    env = rho.extend(x, Closure::new(sigma, n));
                    cur = body;
                    break;
                }
                (Frame::Arg(..), v) => {
                    return Outcome::RuntimeFault(format!("application of {}", kind(&v)));
                }
                (_, v) => {
                    return Outcome::RuntimeFault(format!("arithmetic or test on {}", kind(&v)));
                }
            }
        }
    }
}

/// Rule (fun): `σ ▷ λx.M[ρ] ⇓_d λx.M[σ+ρ]`. Domains are disjoint for
/// lexically scoped inputs; on a clash the abstraction is renamed apart.
fn fun(sigma: &Subst, x: &Var, rho: &Subst, body: &Arc<Term>) -> EValue {
    let clash = |v: &Var| sigma.contains(v);
    if !clash(x) && rho.domain().all(|d| !clash(d)) {
        return EValue::Abstraction(x.clone(), sigma.concat(rho), body.clone());
    }
    let mut body = body.clone();
    let mut bindings = rho.bindings().to_vec();
    for b in bindings.iter_mut() {
        if clash(&b.var) {
            let fresh = b.var.refresh();
            body = substitute(&body, &b.var, &Term::var(&fresh));
            b.var = fresh;
        }
    }
    let mut x = x.clone();
    if clash(&x) {
        let fresh = x.refresh();
        body = substitute(&body, &x, &Term::var(&fresh));
        x = fresh;
    }
    EValue::Abstraction(x, sigma.concat(&Subst::from_bindings(bindings)), body)
}

enum PcfFrame {
    Succ,
    Pred,
    Ifz(Arc<Term>, Arc<Term>),
    Arg(Arc<Term>),
}

/// `t ⇓ U` for closed PCF terms, by capture-avoiding substitution.
pub fn eval_pcf(t: &Arc<Term>, fuel: &mut Fuel) -> Outcome {
    if let Some(x) = free_vars(t).iter().next() {
        return Outcome::RuntimeFault(format!("free variable '{}'", x.name()));
    }
    let mut stack: Vec<PcfFrame> = Vec::new();
    let mut cur = t.clone();
    loop {
        let value = loop {
            if !fuel.tick() {
                return Outcome::Timeout;
            }
            if let Some(n) = numeral_of(&cur) {
                break EValue::Numeral(n);
            }
            match &*cur {
                Term::Lam(x, s, body) => {
                    if !s.is_empty() {
                        return Outcome::RuntimeFault("explicit substitution in a PCF term".into());
                    }
                    break EValue::Abstraction(x.clone(), Subst::empty(), body.clone());
                }
                Term::Var(x) => return Outcome::RuntimeFault(format!("free variable '{}'", x.name())),
                Term::Fix(m) => cur = Term::app(m.clone(), cur.clone()),
                Term::Ifz(l, m, n) => {
                    stack.push(PcfFrame::Ifz(m.clone(), n.clone()));
                    cur = l.clone();
                }
                Term::Pred(m) => {
                    stack.push(PcfFrame::Pred);
                    cur = m.clone();
                }
                Term::Succ(m) => {
                    stack.push(PcfFrame::Succ);
                    cur = m.clone();
                }
                Term::App(m, n) => {
                    stack.push(PcfFrame::Arg(n.clone()));
                    cur = m.clone();
                }
                Term::Zero => unreachable!("zero is a numeral"),
            }
        };
        let mut value = value;
        loop {
            let Some(frame) = stack.pop() else {
                return Outcome::Value(value);
            };
            match (frame, value) {
                (PcfFrame::Succ, EValue::Numeral(n)) => value = EValue::Numeral(n + 1),
                (PcfFrame::Pred, EValue::Numeral(n)) => value = EValue::Numeral(n.saturating_sub(1)),
                (PcfFrame::Ifz(m, n), EValue::Numeral(k)) => {
                    cur = if k == 0 { m } else { n };
                    break;
                }
                (PcfFrame::Arg(n), EValue::Abstraction(x, _, body)) => {
                    // Arguments of a closed program are closed.
                    cur = substitute_closed(&body, &x, &n);
                    break;
                }
                (PcfFrame::Arg(_), v) => {
                    return Outcome::RuntimeFault(format!("application of {}", kind(&v)));
                }
                (_, v) => {
                    return Outcome::RuntimeFault(format!("arithmetic or test on {}", kind(&v)));
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::frontend::parse_program;
    use crate::syntax::alpha_eq;

    const ADD: &str = "fix (\\f x y. ifz y x (f (succ x) (pred y)))";

    fn epcf(src: &str, fuel: u64) -> Outcome {
        eval_epcf(&Subst::empty(), &parse_program(src).unwrap(), &mut Fuel::new(fuel))
    }

    fn pcf(src: &str, fuel: u64) -> Outcome {
        eval_pcf(&parse_program(src).unwrap(), &mut Fuel::new(fuel))
    }

    #[test]
    fn small_programs() {
        for eval in [epcf, pcf] {
            assert_eq!(eval("(\\x. succ x) 0", 100).as_numeral(), Some(1));
            assert_eq!(eval("(\\x. x) 4", 100).as_numeral(), Some(4));
            assert_eq!(eval("(\\s n. s (s n)) (\\x. succ x) 1", 100).as_numeral(), Some(3));
            assert_eq!(eval(&format!("{ADD} 5 1"), 10_000).as_numeral(), Some(6));
            assert!(eval("fix (\\x. x)", 10_000).is_timeout());
            assert_eq!(eval("pred 0", 10).as_numeral(), Some(0));
        }
    }

    #[test]
    fn identity_applied_to_itself() {
        let Outcome::Value(v) = pcf("(\\x. x) (\\x. x)", 100) else {
            panic!()
        };
        assert!(alpha_eq(&v.to_term(), &parse_program("\\x. x").unwrap()));
        let Outcome::Value(v) = epcf("(\\x. x) (\\x. x)", 100) else {
            panic!()
        };
        assert!(matches!(v, EValue::Abstraction(_, ref s, _) if s.is_empty()));
    }

    #[test]
    fn fuel_counts_rule_applications() {
        // (β_v), (fun), (sc), (var), (nat)
        assert_eq!(epcf("(\\x. succ x) 0", 5).as_numeral(), Some(1));
        assert!(epcf("(\\x. succ x) 0", 4).is_timeout());
        let mut fuel = Fuel::new(0);
        assert!(eval_epcf(&Subst::empty(), &Term::zero(), &mut fuel).is_timeout());
    }

    #[test]
    fn explicit_substitutions_are_used() {
        assert_eq!(epcf("(\\x { y <- ({}, 2) } . succ y) 0", 100).as_numeral(), Some(3));
        assert_eq!(
            epcf("(\\x { y <- ({ z <- ({}, 4) }, pred z) } . ifz x y 7) 0", 100).as_numeral(),
            Some(3)
        );
    }

    #[test]
    fn ill_typed_programs_fault() {
        assert!(epcf("succ (\\x. x)", 100).is_fault());
        assert!(pcf("0 0", 100).is_fault());
        assert!(pcf("ifz (\\x. x) 0 0", 100).is_fault());
    }

    #[test]
    fn deep_derivations_do_not_overflow() {
        assert!(epcf("fix (\\x. succ x)", 1_000_000).is_timeout());
        assert!(pcf("fix (\\x. succ x)", 1_000_000).is_timeout());
    }
}
