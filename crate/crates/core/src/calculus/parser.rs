//! Recursive-descent parser for univariate rational expressions.
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := factor (('*' | '/') factor)*
//! factor := '-' factor | base ('^' nonneg-int)?
//! base   := rational | variable | '(' expr ')'
//! ```
//!
//! A rational literal is an integer or `p/q` written as two integers around a
//! slash; `6/3^2` still means `6/(3^2)` because the literal is only fused
//! when no exponent follows.

use crate::error::{Error, Result, SyntaxError};
use crate::scalar::{parse_scalar, Scalar};

use super::{ExprKind, Node, Span};

/// The grammar, for diagnostics.
pub const GRAMMAR: &str = "expr := term (('+'|'-') term)*\n\
                           term := factor (('*'|'/') factor)*\n\
                           factor := '-' factor | base ('^' nonneg-int)?\n\
                           base := rational | variable | '(' expr ')'";

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Int(String),
    Ident(String),
    Sym(char),
    End,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Int(s) => format!("number {s}"),
            Tok::Ident(s) => format!("variable {s}"),
            Tok::Sym(c) => format!("'{c}'"),
            Tok::End => "end of input".to_string(),
        }
    }
}

fn lex(src: &str) -> Result<Vec<(Tok, usize)>> {
    let bytes = src.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i] as char;
        if c.is_ascii_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() {
            let start = i;
            while i < bytes.len() && bytes[i].is_ascii_digit() {
                i += 1;
            }
            out.push((Tok::Int(src[start..i].to_string()), start));
        } else if c.is_ascii_alphabetic() || c == '_' {
            let start = i;
            while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                i += 1;
            }
            out.push((Tok::Ident(src[start..i].to_string()), start));
        } else if "+-*/^()".contains(c) {
            out.push((Tok::Sym(c), i));
            i += 1;
        } else {
            let found = src[i..].chars().next().expect("in bounds");
            return Err(Error::Syntax(SyntaxError {
                position: i,
                expected: vec!["number".into(), "variable".into(), "operator".into()],
                found: format!("'{found}'"),
            }));
        }
    }
    out.push((Tok::End, src.len()));
    Ok(out)
}

struct Parser {
    toks: Vec<(Tok, usize)>,
    at: usize,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.at].0
    }

    fn peek_at(&self, ahead: usize) -> &Tok {
        &self.toks[(self.at + ahead).min(self.toks.len() - 1)].0
    }

    fn pos(&self) -> usize {
        self.toks[self.at].1
    }

    fn end_of_prev(&self) -> usize {
        let (tok, pos) = &self.toks[self.at - 1];
        pos + match tok {
            Tok::Int(s) | Tok::Ident(s) => s.len(),
            Tok::Sym(_) => 1,
            Tok::End => 0,
        }
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.at].0.clone();
        if self.at + 1 < self.toks.len() {
            self.at += 1;
        }
        t
    }

    fn fail<T>(&self, expected: &[&str]) -> Result<T> {
        Err(Error::Syntax(SyntaxError {
            position: self.pos(),
            expected: expected.iter().map(|s| s.to_string()).collect(),
            found: self.peek().describe(),
        }))
    }

    fn expr<T: Scalar>(&mut self) -> Result<Node<T>> {
        let mut lhs = self.term()?;
        while let Tok::Sym(op @ ('+' | '-')) = *self.peek() {
            self.bump();
            let rhs = self.term()?;
            let span = Span { start: lhs.span.start, end: rhs.span.end };
            let kind = if op == '+' {
                ExprKind::Add(Box::new(lhs), Box::new(rhs))
            } else {
                ExprKind::Sub(Box::new(lhs), Box::new(rhs))
            };
            lhs = Node { kind, span };
        }
        Ok(lhs)
    }

    fn term<T: Scalar>(&mut self) -> Result<Node<T>> {
        let mut lhs = self.factor()?;
        while let Tok::Sym(op @ ('*' | '/')) = *self.peek() {
            self.bump();
            let rhs = self.factor()?;
            let span = Span { start: lhs.span.start, end: rhs.span.end };
            let kind = if op == '*' {
                ExprKind::Mul(Box::new(lhs), Box::new(rhs))
            } else {
                ExprKind::Div(Box::new(lhs), Box::new(rhs))
            };
            lhs = Node { kind, span };
        }
        Ok(lhs)
    }

    fn factor<T: Scalar>(&mut self) -> Result<Node<T>> {
        let start = self.pos();
        if *self.peek() == Tok::Sym('-') {
            self.bump();
            let inner = self.factor()?;
            let span = Span { start, end: inner.span.end };
            return Ok(Node { kind: ExprKind::Neg(Box::new(inner)), span });
        }
        let base = self.base()?;
        if *self.peek() != Tok::Sym('^') {
            return Ok(base);
        }
        self.bump();
        let position = self.pos();
        match self.peek().clone() {
            Tok::Int(digits) => {
                let exp: u32 = match digits.parse() {
                    Ok(e) => e,
                    Err(_) => return self.fail(&["exponent below 2^32"]),
                };
                self.bump();
                let span = Span { start, end: self.end_of_prev() };
                Ok(Node { kind: ExprKind::Pow(Box::new(base), exp), span })
            }
            Tok::Sym('-') => Err(Error::NegativeExponent { position }),
            Tok::End => self.fail(&["non-negative integer"]),
            _ => Err(Error::NonIntegerExponent { position }),
        }
    }

    fn base<T: Scalar>(&mut self) -> Result<Node<T>> {
        let start = self.pos();
        match self.peek().clone() {
            Tok::Int(p) => {
                self.bump();
                let mut text = p;
                // fuse `p/q` into one literal unless an exponent binds the q
                if let (Tok::Sym('/'), Tok::Int(q)) = (self.peek().clone(), self.peek_at(1).clone()) {
                    if *self.peek_at(2) != Tok::Sym('^') {
                        if q.bytes().all(|b| b == b'0') {
                            self.bump();
                            return self.fail(&["nonzero denominator"]);
                        }
                        self.bump();
                        self.bump();
                        text = format!("{text}/{q}");
                    }
                }
                let value = parse_scalar(&text).expect("lexed digits form a valid literal");
                Ok(Node { kind: ExprKind::Constant(value), span: Span { start, end: self.end_of_prev() } })
            }
            Tok::Ident(name) => {
                self.bump();
                Ok(Node { kind: ExprKind::Variable(name), span: Span { start, end: self.end_of_prev() } })
            }
            Tok::Sym('(') => {
                self.bump();
                let inner = self.expr()?;
                if *self.peek() != Tok::Sym(')') {
                    return self.fail(&["'+'", "'-'", "'*'", "'/'", "'^'", "')'"]);
                }
                self.bump();
                Ok(Node { kind: inner.kind, span: Span { start, end: self.end_of_prev() } })
            }
            _ => self.fail(&["number", "variable", "'('", "'-'"]),
        }
    }
}

pub(super) fn parse<T: Scalar>(text: &str) -> Result<Node<T>> {
    let mut p = Parser { toks: lex(text)?, at: 0 };
    let root = p.expr()?;
    if *p.peek() != Tok::End {
        return p.fail(&["'+'", "'-'", "'*'", "'/'", "'^'", "end of input"]);
    }
    Ok(root)
}
