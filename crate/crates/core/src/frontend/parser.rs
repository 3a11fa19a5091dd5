// SPDX-License-Identifier: Apache-2.0

use std::collections::HashMap;
use std::sync::Arc;

use super::lexer::{tokenize, Tok, Token};
use super::{ParseError, SourceSpan};
use crate::syntax::{Binding, Closure, SimpleType, Subst, Term, Var};

/// Largest numeral literal accepted; literals desugar to `succ` spines.
pub const MAX_LITERAL: u64 = 1_000_000;

pub(crate) struct Parser {
    toks: Vec<Token>,
    pos: usize,
    scope: Vec<(String, Var)>,
    free: HashMap<String, (Var, SourceSpan)>,
}

impl Parser {
    pub(crate) fn new(src: &str, type_keywords: bool) -> Result<Parser, ParseError> {
        Ok(Parser {
            toks: tokenize(src, type_keywords)?,
            pos: 0,
            scope: Vec::new(),
            free: HashMap::new(),
        })
    }

    fn peek(&self) -> &Tok {
        &self.toks[self.pos].tok
    }

    fn span(&self) -> SourceSpan {
        self.toks[self.pos].span
    }

    fn bump(&mut self) -> Token {
        let t = self.toks[self.pos].clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn unexpected(&self, expected: &[&str]) -> ParseError {
        let found = self.peek().describe();
        ParseError {
            span: self.span(),
            message: format!("expected {}, found {found}", expected.join(" or ")),
            expected: expected.iter().map(|s| s.to_string()).collect(),
        }
    }

    fn expect(&mut self, tok: Tok, what: &str) -> Result<Token, ParseError> {
        if *self.peek() == tok {
            Ok(self.bump())
        } else {
            Err(self.unexpected(&[what]))
        }
    }

    pub(crate) fn finish(&mut self) -> Result<(), ParseError> {
        if *self.peek() == Tok::Eof {
            Ok(())
        } else {
            Err(self.unexpected(&["end of input"]))
        }
    }

    /// Free variables with the span of their first occurrence.
    pub(crate) fn free_vars(&self) -> impl Iterator<Item = (&Var, SourceSpan)> {
        self.free.values().map(|(v, s)| (v, *s))
    }

    fn resolve(&mut self, name: &str, at: SourceSpan) -> Var {
        if let Some((_, v)) = self.scope.iter().rev().find(|(n, _)| n == name) {
            return v.clone();
        }
        self.free
            .entry(name.to_string())
            .or_insert_with(|| (Var::fresh(name), at))
            .0
            .clone()
    }

    pub(crate) fn term(&mut self) -> Result<Arc<Term>, ParseError> {
        crate::deep(|| {
            if *self.peek() == Tok::Lambda {
                self.lambda()
            } else {
                self.app()
            }
        })
    }

    fn lambda(&mut self) -> Result<Arc<Term>, ParseError> {
        self.bump();
        let mut binders = Vec::new();
        while let Tok::Ident(name) = self.peek().clone() {
            self.bump();
            binders.push(Var::fresh(&name));
        }
        if binders.is_empty() {
            return Err(self.unexpected(&["identifier"]));
        }
        let subst = if *self.peek() == Tok::LBrace {
            self.subst()?
        } else {
            Subst::empty()
        };
        let innermost = binders.last().expect("non-empty");
        if let Some(clash) = subst.domain().find(|d| d.name() == innermost.name()) {
            return Err(ParseError::new(
                self.span(),
                format!(
                    "substitution variable '{}' shadows the binder it is attached to",
                    clash.name()
                ),
            ));
        }
        self.expect(Tok::Dot, "'.'")?;
        let mark = self.scope.len();
        for b in &binders {
            self.scope.push((b.name().to_string(), b.clone()));
        }
        for d in subst.domain() {
            self.scope.push((d.name().to_string(), d.clone()));
        }
        let body = self.term();
        self.scope.truncate(mark);
        let body = body?;
        let mut binders = binders.into_iter().rev();
        let last = binders.next().expect("non-empty");
        let mut t = Term::lam_with(&last, subst, body);
        for b in binders {
            t = Term::lam(&b, t);
        }
        Ok(t)
    }

    /// `{ y <- (S, N), ... }`; closure bodies see only their own domain.
    fn subst(&mut self) -> Result<Subst, ParseError> {
        let open = self.expect(Tok::LBrace, "'{'")?;
        let mut bindings: Vec<Binding> = Vec::new();
        if *self.peek() != Tok::RBrace {
            loop {
                let name = match self.peek().clone() {
                    Tok::Ident(n) => n,
                    _ => return Err(self.unexpected(&["identifier"])),
                };
                let at = self.bump().span;
                if bindings.iter().any(|b| b.var.name() == name) {
                    return Err(ParseError::new(at, format!("duplicate substitution variable '{name}'")));
                }
                self.expect(Tok::LeftArrow, "'<-'")?;
                self.expect(Tok::LParen, "'('")?;
                let inner = self.subst()?;
                self.expect(Tok::Comma, "','")?;
                let saved = std::mem::take(&mut self.scope);
                for d in inner.domain() {
                    self.scope.push((d.name().to_string(), d.clone()));
                }
                let body = self.term();
                self.scope = saved;
                let body = body?;
                self.expect(Tok::RParen, "')'")?;
                bindings.push(Binding {
                    var: Var::fresh(&name),
                    closure: Closure::new(inner, body),
                });
                if *self.peek() == Tok::Comma {
                    self.bump();
                } else {
                    break;
                }
            }
        }
        if *self.peek() != Tok::RBrace {
            let mut err = self.unexpected(&["','", "'}'"]);
            err.span = SourceSpan::new(open.span.start, self.span().end);
            return Err(err);
        }
        self.bump();
        Ok(Subst::from_bindings(bindings))
    }

    fn app(&mut self) -> Result<Arc<Term>, ParseError> {
        let mut t = self.prefix()?;
        while self.starts_prefix() {
            let arg = self.prefix()?;
            t = Term::app(t, arg);
        }
        Ok(t)
    }

    fn starts_prefix(&self) -> bool {
        matches!(
            self.peek(),
            Tok::Ident(_) | Tok::Nat(_) | Tok::LParen | Tok::Pred | Tok::Succ | Tok::Fix | Tok::Ifz
        )
    }

    fn prefix(&mut self) -> Result<Arc<Term>, ParseError> {
        match self.peek() {
            Tok::Pred => {
                self.bump();
                Ok(Term::pred(self.atom()?))
            }
            Tok::Succ => {
                self.bump();
                Ok(Term::succ(self.atom()?))
            }
            Tok::Fix => {
                self.bump();
                Ok(Term::fix(self.atom()?))
            }
            Tok::Ifz => {
                self.bump();
                let l = self.atom()?;
                let m = self.atom()?;
                let n = self.atom()?;
                Ok(Term::ifz(l, m, n))
            }
            _ => self.atom(),
        }
    }

    fn atom(&mut self) -> Result<Arc<Term>, ParseError> {
        match self.peek().clone() {
            Tok::Ident(name) => {
                let at = self.bump().span;
                Ok(Term::var(&self.resolve(&name, at)))
            }
            Tok::Nat(n) => {
                let span = self.bump().span;
                if n > MAX_LITERAL {
                    return Err(ParseError::new(
                        span,
                        format!("numeral literal {n} exceeds the limit {MAX_LITERAL}"),
                    ));
                }
                Ok(Term::numeral(n))
            }
            Tok::LParen => {
                self.bump();
                let t = self.term()?;
                self.expect(Tok::RParen, "')'")?;
                Ok(t)
            }
            _ => Err(self.unexpected(&["identifier", "numeral", "'('"])),
        }
    }

    pub(crate) fn ty(&mut self) -> Result<SimpleType, ParseError> {
        let dom = match self.peek() {
            Tok::Int => {
                self.bump();
                SimpleType::Int
            }
            Tok::LParen => {
                self.bump();
                let t = self.ty()?;
                self.expect(Tok::RParen, "')'")?;
                t
            }
            _ => return Err(self.unexpected(&["'int'", "'('"])),
        };
        if *self.peek() == Tok::Arrow {
            self.bump();
            Ok(SimpleType::arrow(dom, self.ty()?))
        } else {
            Ok(dom)
        }
    }
}
