// SPDX-License-Identifier: Apache-2.0

use std::collections::{HashMap, HashSet};

use crate::syntax::{numeral_of, Subst, Term, Var};

#[derive(Clone, Copy, PartialEq, Eq)]
enum Pos {
    Top,
    Head,
    Arg,
}

/// Renders `t` in the concrete syntax. Binders whose display name would be
/// captured or would capture are renamed with numeric suffixes, so the
/// output reparses to an α-equal term.
pub fn print_term(t: &Term) -> String {
    let mut p = Printer::default();
    p.reserve_free(t, &mut Vec::new());
    let mut out = String::new();
    p.term(t, Pos::Top, &mut out);
    out
}

#[derive(Default)]
struct Printer {
    /// Display names of free variables, by uid.
    free: HashMap<u64, String>,
    reserved: HashSet<String>,
    /// Bound variables in scope, innermost last.
    scope: Vec<(u64, String)>,
}

fn sanitize(name: &str) -> String {
    let mut chars = name.chars();
    let ok = chars.next().is_some_and(|c| c.is_ascii_alphabetic() || c == '_')
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_' || c == '\'');
    let keyword = matches!(name, "pred" | "succ" | "fix" | "ifz");
    if ok && !keyword {
        name.to_string()
    } else {
        "v".to_string()
    }
}

impl Printer {
    fn reserve_free(&mut self, t: &Term, bound: &mut Vec<u64>) {
        crate::deep(|| match t {
            Term::Var(x) => {
                if !bound.contains(&x.uid()) && !self.free.contains_key(&x.uid()) {
                    let base = sanitize(x.name());
                    let name = self.pick(&base, |n| !self.reserved.contains(n));
                    self.reserved.insert(name.clone());
                    self.free.insert(x.uid(), name);
                }
            }
            Term::Zero => {}
            Term::App(m, n) => {
                self.reserve_free(m, bound);
                self.reserve_free(n, bound);
            }
            Term::Lam(x, s, b) => {
                for binding in s.iter() {
                    let mut inner: Vec<u64> = binding.closure.subst.domain().map(Var::uid).collect();
                    self.reserve_subst(&binding.closure.subst);
                    self.reserve_free(&binding.closure.term, &mut inner);
                }
                let mark = bound.len();
                bound.push(x.uid());
                bound.extend(s.domain().map(Var::uid));
                self.reserve_free(b, bound);
                bound.truncate(mark);
            }
            Term::Pred(m) | Term::Succ(m) | Term::Fix(m) => self.reserve_free(m, bound),
            Term::Ifz(l, m, n) => {
                self.reserve_free(l, bound);
                self.reserve_free(m, bound);
                self.reserve_free(n, bound);
            }
        })
    }

    fn reserve_subst(&mut self, s: &Subst) {
        for binding in s.iter() {
            let mut inner: Vec<u64> = binding.closure.subst.domain().map(Var::uid).collect();
            self.reserve_subst(&binding.closure.subst);
            self.reserve_free(&binding.closure.term, &mut inner);
        }
    }

    fn pick(&self, base: &str, ok: impl Fn(&str) -> bool) -> String {
        if ok(base) {
            return base.to_string();
        }
        (1..)
            .map(|k| format!("{base}_{k}"))
            .find(|n| ok(n))
            .expect("unbounded suffixes")
    }

    /// A name for a new binder: distinct from free names, from everything in
    /// scope, and from `taken` (names introduced alongside it).
    fn bind(&self, x: &Var, taken: &[String]) -> String {
        let base = sanitize(x.name());
        self.pick(&base, |n| {
            !self.reserved.contains(n) && !self.scope.iter().any(|(_, s)| s == n) && !taken.iter().any(|s| s == n)
        })
    }

    fn name_of(&self, x: &Var) -> &str {
        if let Some((_, n)) = self.scope.iter().rev().find(|(u, _)| *u == x.uid()) {
            return n;
        }
        self.free.get(&x.uid()).map(String::as_str).unwrap_or("v")
    }

    fn term(&mut self, t: &Term, pos: Pos, out: &mut String) {
        crate::deep(|| {
            if let Some(n) = numeral_of(t) {
                out.push_str(&n.to_string());
                return;
            }
            match t {
                Term::Var(x) => out.push_str(self.name_of(x)),
                Term::Zero => out.push('0'),
                Term::Lam(..) => self.paren(pos != Pos::Top, out, |p, out| p.lambda(t, out)),
                Term::App(m, n) => self.paren(pos == Pos::Arg, out, |p, out| {
                    p.term(m, Pos::Head, out);
                    out.push(' ');
                    p.term(n, Pos::Arg, out);
                }),
                Term::Pred(m) | Term::Succ(m) | Term::Fix(m) => {
                    let kw = match t {
                        Term::Pred(_) => "pred ",
                        Term::Succ(_) => "succ ",
                        _ => "fix ",
                    };
                    self.paren(pos == Pos::Arg, out, |p, out| {
                        out.push_str(kw);
                        p.term(m, Pos::Arg, out);
                    })
                }
                Term::Ifz(l, m, n) => self.paren(pos == Pos::Arg, out, |p, out| {
                    out.push_str("ifz ");
                    p.term(l, Pos::Arg, out);
                    out.push(' ');
                    p.term(m, Pos::Arg, out);
                    out.push(' ');
                    p.term(n, Pos::Arg, out);
                }),
            }
        })
    }

    fn paren(&mut self, wrap: bool, out: &mut String, f: impl FnOnce(&mut Self, &mut String)) {
        if wrap {
            out.push('(');
        }
        f(self, out);
        if wrap {
            out.push(')');
        }
    }

    fn lambda(&mut self, t: &Term, out: &mut String) {
        let mark = self.scope.len();
        out.push('\\');
        let mut cur = t;
        let mut names: Vec<String> = Vec::new();
        let body = loop {
            let Term::Lam(x, s, b) = cur else { break cur };
            let name = self.bind(x, &names);
            out.push_str(&name);
            names.push(name.clone());
            if !s.is_empty() {
                out.push(' ');
                self.subst(s, &mut names, out);
                self.scope.extend(
                    std::iter::once(x.uid()).zip(std::iter::once(name)).chain(
                        s.domain()
                            .map(Var::uid)
                            .zip(names[names.len() - s.len()..].iter().cloned()),
                    ),
                );
                break b;
            }
            self.scope.push((x.uid(), name));
            match &**b {
                Term::Lam(..) => {
                    out.push(' ');
                    cur = b;
                }
                _ => break b,
            }
        };
        out.push_str(". ");
        self.term(body, Pos::Top, out);
        self.scope.truncate(mark);
    }

    /// Prints `{ y <- (S, N), ... }`, appending the chosen domain names to
    /// `taken`. Domain names avoid the current scope; closure bodies are
    /// printed in an empty one.
    fn subst(&mut self, s: &Subst, taken: &mut Vec<String>, out: &mut String) {
        out.push('{');
        for (i, binding) in s.iter().enumerate() {
            if i > 0 {
                out.push_str(", ");
            }
            let name = self.bind(&binding.var, taken);
            out.push_str(&name);
            taken.push(name);
            out.push_str(" <- (");
            self.closure(&binding.closure.subst, &binding.closure.term, out);
            out.push(')');
        }
        out.push('}');
    }

    fn closure(&mut self, s: &Subst, body: &Term, out: &mut String) {
        let saved = self.scope.split_off(0);
        let mut names = Vec::new();
        self.subst(s, &mut names, out);
        out.push_str(", ");
        self.scope = s.domain().map(Var::uid).zip(names).collect();
        self.term(body, Pos::Top, out);
        self.scope = saved;
    }
}
