// SPDX-License-Identifier: Apache-2.0

use super::{ParseError, SourceSpan};

#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) enum Tok {
    Lambda,
    Ident(String),
    Nat(u64),
    Pred,
    Succ,
    Fix,
    Ifz,
    Int,
    Arrow,
    LeftArrow,
    Dot,
    Comma,
    LParen,
    RParen,
    LBrace,
    RBrace,
    Eof,
}

impl Tok {
    pub(crate) fn describe(&self) -> String {
        match self {
            Tok::Lambda => "'\\'".into(),
            Tok::Ident(s) => format!("identifier '{s}'"),
            Tok::Nat(n) => format!("numeral {n}"),
            Tok::Pred => "'pred'".into(),
            Tok::Succ => "'succ'".into(),
            Tok::Fix => "'fix'".into(),
            Tok::Ifz => "'ifz'".into(),
            Tok::Int => "'int'".into(),
            Tok::Arrow => "'->'".into(),
            Tok::LeftArrow => "'<-'".into(),
            Tok::Dot => "'.'".into(),
            Tok::Comma => "','".into(),
            Tok::LParen => "'('".into(),
            Tok::RParen => "')'".into(),
            Tok::LBrace => "'{'".into(),
            Tok::RBrace => "'}'".into(),
            Tok::Eof => "end of input".into(),
        }
    }
}

#[derive(Clone, Debug)]
pub(crate) struct Token {
    pub tok: Tok,
    pub span: SourceSpan,
}

fn is_ident_start(c: char) -> bool {
    c.is_ascii_alphabetic() || c == '_'
}

fn is_ident_char(c: char) -> bool {
    c.is_ascii_alphanumeric() || c == '_' || c == '\''
}

/// `int` is only a keyword inside types; in terms it lexes as an identifier.
pub(crate) fn tokenize(src: &str, type_keywords: bool) -> Result<Vec<Token>, ParseError> {
    let mut out = Vec::new();
    let mut chars = src.char_indices().peekable();
    while let Some(&(start, c)) = chars.peek() {
        if c.is_whitespace() {
            chars.next();
            continue;
        }
        if c == '-' && src[start..].starts_with("--") {
            while let Some(&(_, c)) = chars.peek() {
                if c == '\n' {
                    break;
                }
                chars.next();
            }
            continue;
        }
        let single = |tok| (tok, start + c.len_utf8());
        let (tok, end) = match c {
            '\\' | 'λ' => single(Tok::Lambda),
            '.' => single(Tok::Dot),
            ',' => single(Tok::Comma),
            '(' => single(Tok::LParen),
            ')' => single(Tok::RParen),
            '{' => single(Tok::LBrace),
            '}' => single(Tok::RBrace),
            '-' if src[start..].starts_with("->") => (Tok::Arrow, start + 2),
            '<' if src[start..].starts_with("<-") => (Tok::LeftArrow, start + 2),
            '→' => single(Tok::Arrow),
            c if c.is_ascii_digit() => {
                let end = src[start..]
                    .find(|c: char| !c.is_ascii_digit())
                    .map_or(src.len(), |k| start + k);
                let text = &src[start..end];
                let n = text.parse::<u64>().map_err(|_| {
                    ParseError::new(SourceSpan::new(start, end), format!("numeral {text} is too large"))
                })?;
                (Tok::Nat(n), end)
            }
            c if is_ident_start(c) => {
                let end = src[start..]
                    .find(|c: char| !is_ident_char(c))
                    .map_or(src.len(), |k| start + k);
                let word = &src[start..end];
                let tok = match word {
                    "pred" => Tok::Pred,
                    "succ" => Tok::Succ,
                    "fix" => Tok::Fix,
                    "ifz" => Tok::Ifz,
                    "int" if type_keywords => Tok::Int,
                    _ => Tok::Ident(word.to_string()),
                };
                (tok, end)
            }
            other => {
                return Err(ParseError::new(
                    SourceSpan::new(start, start + other.len_utf8()),
                    format!("unexpected character {other:?}"),
                ))
            }
        };
        while chars.peek().is_some_and(|&(i, _)| i < end) {
            chars.next();
        }
        out.push(Token {
            tok,
            span: SourceSpan::new(start, end),
        });
    }
    out.push(Token {
        tok: Tok::Eof,
        span: SourceSpan::new(src.len(), src.len()),
    });
    Ok(out)
}
