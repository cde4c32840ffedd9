//! Term syntax.
//!
//! ```text
//! term   := ("\" | "λ") binder+ "." term | app
//! binder := IDENT (":" tatom)?
//! app    := atom ("(" term ("," term)* ")")*
//! atom   := IDENT | "(" term ")"
//! type   := tatom ("->" type)?
//! tatom  := IDENT | "'" IDENT | "(" type ")" | "[" avm "]"
//! ```
//!
//! Identifiers bound by an enclosing λ are variables; all others are
//! constants. Unannotated binders get distinct type variables.

use std::collections::BTreeMap;

use thiserror::Error;

use super::term::{Binder, Term};
use super::types::TypeExpr;
use crate::feature_dag::FeatureStructure;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("unexpected end of term")]
    Eof,
    #[error("unexpected `{0}` at {1}")]
    Unexpected(char, usize),
    #[error("bad category type: {0}")]
    Category(String),
    #[error("trailing input at {0}")]
    Trailing(usize),
}

struct Parser<'a> {
    chars: Vec<char>,
    pos: usize,
    bound: Vec<String>,
    tvars: BTreeMap<String, u32>,
    next_tvar: u32,
    _src: &'a str,
}

fn is_ident_start(c: char) -> bool {
    c.is_alphabetic() && c != 'λ' || c == '_'
}

fn is_ident_char(c: char) -> bool {
    (c.is_alphanumeric() && c != 'λ') || c == '_' || c == '\''
}

impl<'a> Parser<'a> {
    fn new(src: &'a str) -> Self {
        Parser { chars: src.chars().collect(), pos: 0, bound: Vec::new(), tvars: BTreeMap::new(), next_tvar: 0, _src: src }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.chars.len() && self.chars[self.pos].is_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.chars.get(self.pos).copied()
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: char) -> Result<(), ParseError> {
        match self.peek() {
            Some(d) if d == c => {
                self.pos += 1;
                Ok(())
            }
            Some(d) => Err(ParseError::Unexpected(d, self.pos)),
            None => Err(ParseError::Eof),
        }
    }

    fn ident(&mut self) -> Result<String, ParseError> {
        match self.peek() {
            Some(c) if is_ident_start(c) => {
                let start = self.pos;
                while self.pos < self.chars.len() && is_ident_char(self.chars[self.pos]) {
                    self.pos += 1;
                }
                Ok(self.chars[start..self.pos].iter().collect())
            }
            Some(c) => Err(ParseError::Unexpected(c, self.pos)),
            None => Err(ParseError::Eof),
        }
    }

    fn term(&mut self) -> Result<Term, ParseError> {
        match self.peek() {
            Some('\\') | Some('λ') => {
                self.pos += 1;
                let mut binders = Vec::new();
                while self.peek() != Some('.') {
                    let name = self.ident()?;
                    let ty = if self.eat(':') { self.type_atom()? } else { self.fresh_tvar() };
                    binders.push(Binder::new(name, ty));
                }
                if binders.is_empty() {
                    return Err(ParseError::Unexpected('.', self.pos));
                }
                self.expect('.')?;
                let depth = self.bound.len();
                self.bound.extend(binders.iter().map(|b| b.name.clone()));
                let body = self.term();
                self.bound.truncate(depth);
                Ok(Term::lams(binders, body?))
            }
            _ => self.app(),
        }
    }

    fn app(&mut self) -> Result<Term, ParseError> {
        let mut head = self.atom()?;
        while self.peek() == Some('(') {
            self.pos += 1;
            loop {
                let arg = self.term()?;
                head = Term::app(head, arg);
                if self.eat(',') {
                    continue;
                }
                self.expect(')')?;
                break;
            }
        }
        Ok(head)
    }

    fn atom(&mut self) -> Result<Term, ParseError> {
        if self.eat('(') {
            let t = self.term()?;
            self.expect(')')?;
            return Ok(t);
        }
        let name = self.ident()?;
        if self.bound.contains(&name) {
            Ok(Term::Var(name))
        } else {
            Ok(Term::Const(name))
        }
    }

    fn fresh_tvar(&mut self) -> TypeExpr {
        let v = self.next_tvar;
        self.next_tvar += 1;
        TypeExpr::Var(v)
    }

    fn ty(&mut self) -> Result<TypeExpr, ParseError> {
        let from = self.type_atom()?;
        self.skip_ws();
        if self.chars.get(self.pos) == Some(&'-') && self.chars.get(self.pos + 1) == Some(&'>') {
            self.pos += 2;
            let to = self.ty()?;
            Ok(TypeExpr::arrow(from, to))
        } else {
            Ok(from)
        }
    }

    fn type_atom(&mut self) -> Result<TypeExpr, ParseError> {
        match self.peek() {
            Some('(') => {
                self.pos += 1;
                let t = self.ty()?;
                self.expect(')')?;
                Ok(t)
            }
            Some('\'') => {
                self.pos += 1;
                let name = self.ident()?;
                if let Some(v) = self.tvars.get(&name) {
                    return Ok(TypeExpr::Var(*v));
                }
                let v = self.fresh_tvar();
                if let TypeExpr::Var(n) = v {
                    self.tvars.insert(name, n);
                }
                Ok(v)
            }
            Some('[') => {
                self.pos += 1;
                let start = self.pos;
                let mut depth = 0i32;
                while self.pos < self.chars.len() {
                    match self.chars[self.pos] {
                        '(' => depth += 1,
                        ')' => depth -= 1,
                        ']' if depth == 0 => break,
                        _ => {}
                    }
                    self.pos += 1;
                }
                let text: String = self.chars[start..self.pos].iter().collect();
                self.expect(']')?;
                FeatureStructure::parse(&text)
                    .map(TypeExpr::Cat)
                    .map_err(|e| ParseError::Category(e.to_string()))
            }
            _ => Ok(TypeExpr::Const(self.ident()?)),
        }
    }
}

pub(crate) fn parse_term(text: &str) -> Result<Term, ParseError> {
    let mut p = Parser::new(text);
    let t = p.term()?;
    if p.peek().is_some() {
        return Err(ParseError::Trailing(p.pos));
    }
    Ok(t)
}

/// Parses a type such as `N->(N->S)->S` or `'a->'a`.
pub fn parse_type(text: &str) -> Result<TypeExpr, ParseError> {
    let mut p = Parser::new(text);
    let t = p.ty()?;
    if p.peek().is_some() {
        return Err(ParseError::Trailing(p.pos));
    }
    Ok(t)
}
