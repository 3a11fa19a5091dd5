// SPDX-License-Identifier: Apache-2.0

//! Concrete syntax for terms and types.
//!
//! ```text
//! term  ::= lam | app
//! lam   ::= "\" IDENT+ subst? "." term
//! subst ::= "{" [binding ("," binding)*] "}"
//! binding ::= IDENT "<-" "(" subst "," term ")"
//! app   ::= prefix prefix*
//! prefix ::= ("pred" | "succ" | "fix") atom | "ifz" atom atom atom | atom
//! atom  ::= IDENT | NAT | "(" term ")"
//! ```
//!
//! Comments run from `--` to the end of the line. `λ` and `→` are accepted
//! as alternatives to `\` and `->`.

mod lexer;
mod parser;
mod printer;

use std::fmt;
use std::sync::Arc;

use crate::syntax::{SimpleType, Term};

pub use parser::MAX_LITERAL;
pub use printer::print_term;

/// Byte offsets `[start, end)` into the source text.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Default)]
pub struct SourceSpan {
    pub start: usize,
    pub end: usize,
}

impl SourceSpan {
    pub fn new(start: usize, end: usize) -> SourceSpan {
        debug_assert!(start <= end);
        SourceSpan { start, end }
    }
}

impl fmt::Display for SourceSpan {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}..{}", self.start, self.end)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
#[error("{message} (at bytes {span})")]
pub struct ParseError {
    pub span: SourceSpan,
    pub message: String,
    /// Token descriptions that would have been accepted at `span`.
    pub expected: Vec<String>,
}

impl ParseError {
    pub fn new(span: SourceSpan, message: impl Into<String>) -> ParseError {
        ParseError {
            span,
            message: message.into(),
            expected: Vec::new(),
        }
    }

    /// 1-based line and column of the error start in `src`.
    pub fn line_col(&self, src: &str) -> (usize, usize) {
        let before = &src[..self.span.start.min(src.len())];
        let line = before.matches('\n').count() + 1;
        let col = before.rsplit('\n').next().map_or(0, |l| l.chars().count()) + 1;
        (line, col)
    }
}

/// Parses a term. Free variables are allowed; every occurrence of the same
/// free name shares one `Var`.
pub fn parse_term(text: &str) -> Result<Arc<Term>, ParseError> {
    let mut p = parser::Parser::new(text, false)?;
    let t = p.term()?;
    p.finish()?;
    Ok(t)
}

/// Parses a closed term, reporting the first free variable otherwise.
pub fn parse_program(text: &str) -> Result<Arc<Term>, ParseError> {
    let mut p = parser::Parser::new(text, false)?;
    let t = p.term()?;
    p.finish()?;
    if let Some((v, span)) = p.free_vars().min_by_key(|(_, s)| s.start) {
        return Err(ParseError::new(span, format!("unbound variable '{}'", v.name())));
    }
    Ok(t)
}

pub fn parse_type(text: &str) -> Result<SimpleType, ParseError> {
    let mut p = parser::Parser::new(text, true)?;
    let t = p.ty()?;
    p.finish()?;
    Ok(t)
}
