//! The shared expression grammar:
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := factor (('*' | '/') factor)*
//! factor := '-' factor | atom ('^' exponent)?
//! exponent := nat | '(' nat ')'
//! atom   := var | coeff | 'alpha' | '(' expr ')'
//! ```
//!
//! `alpha` names the generator of an extension field `GF(p^m)`.

use crate::error::{Error, Result};
use crate::ff::GENERATOR_SYMBOL;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Expr {
    Int(u64),
    Var(String),
    Generator,
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, u64),
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Int(u64),
    Ident(String),
    Sym(char),
}

struct Lexed {
    toks: Vec<(usize, Tok)>,
    end: usize,
}

fn lex(src: &str) -> Result<Lexed> {
    let mut toks = Vec::new();
    let chars: Vec<(usize, char)> = src.char_indices().collect();
    let mut i = 0;
    while i < chars.len() {
        let (pos, c) = chars[i];
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() {
            let mut v: u64 = 0;
            while i < chars.len() && chars[i].1.is_ascii_digit() {
                v = v
                    .checked_mul(10)
                    .and_then(|v| v.checked_add(chars[i].1.to_digit(10).unwrap() as u64))
                    .ok_or_else(|| parse_err(pos, "integer literal too large", &[]))?;
                i += 1;
            }
            toks.push((pos, Tok::Int(v)));
        } else if c.is_alphabetic() || c == '_' {
            let start = i;
            while i < chars.len() && (chars[i].1.is_alphanumeric() || chars[i].1 == '_') {
                i += 1;
            }
            let s: String = chars[start..i].iter().map(|&(_, c)| c).collect();
            toks.push((pos, Tok::Ident(s)));
        } else if "+-*/^()".contains(c) {
            toks.push((pos, Tok::Sym(c)));
            i += 1;
        } else {
            return Err(parse_err(pos, &format!("unexpected character `{c}`"), &["term"]));
        }
    }
    Ok(Lexed { toks, end: src.len() })
}

fn parse_err(position: usize, message: &str, expected: &[&str]) -> Error {
    Error::Parse {
        position,
        message: message.to_string(),
        expected: expected.iter().map(|s| s.to_string()).collect(),
    }
}

struct Parser {
    lexed: Lexed,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.lexed.toks.get(self.pos).map(|t| &t.1)
    }

    fn offset(&self) -> usize {
        self.lexed.toks.get(self.pos).map_or(self.lexed.end, |t| t.0)
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(&Tok::Sym(c)) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expr(&mut self) -> Result<Expr> {
        let mut lhs = self.term()?;
        loop {
            if self.eat('+') {
                lhs = Expr::Add(Box::new(lhs), Box::new(self.term()?));
            } else if self.eat('-') {
                lhs = Expr::Sub(Box::new(lhs), Box::new(self.term()?));
            } else {
                return Ok(lhs);
            }
        }
    }

    fn term(&mut self) -> Result<Expr> {
        let mut lhs = self.factor()?;
        loop {
            if self.eat('*') {
                lhs = Expr::Mul(Box::new(lhs), Box::new(self.factor()?));
            } else if self.eat('/') {
                lhs = Expr::Div(Box::new(lhs), Box::new(self.factor()?));
            } else {
                return Ok(lhs);
            }
        }
    }

    fn factor(&mut self) -> Result<Expr> {
        if self.eat('-') {
            return Ok(Expr::Neg(Box::new(self.factor()?)));
        }
        let base = self.atom()?;
        if self.eat('^') {
            let paren = self.eat('(');
            let e = match self.peek() {
                Some(Tok::Int(v)) => *v,
                _ => return Err(parse_err(self.offset(), "expected exponent", &["natural number", "("])),
            };
            self.pos += 1;
            if paren && !self.eat(')') {
                return Err(parse_err(self.offset(), "unclosed exponent", &[")"]));
            }
            return Ok(Expr::Pow(Box::new(base), e));
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Expr> {
        let at = self.offset();
        match self.peek().cloned() {
            Some(Tok::Int(v)) => {
                self.pos += 1;
                Ok(Expr::Int(v))
            }
            Some(Tok::Ident(s)) => {
                self.pos += 1;
                if s == GENERATOR_SYMBOL {
                    Ok(Expr::Generator)
                } else {
                    Ok(Expr::Var(s))
                }
            }
            Some(Tok::Sym('(')) => {
                self.pos += 1;
                let e = self.expr()?;
                if !self.eat(')') {
                    return Err(parse_err(self.offset(), "unclosed parenthesis", &[")", "+", "-", "*", "/"]));
                }
                Ok(e)
            }
            _ => Err(parse_err(at, "expected a term", &["variable", "coefficient", "("])),
        }
    }
}

pub fn parse_expr(src: &str) -> Result<Expr> {
    let lexed = lex(src)?;
    let mut p = Parser { lexed, pos: 0 };
    let e = p.expr()?;
    if p.pos != p.lexed.toks.len() {
        return Err(parse_err(p.offset(), "trailing input", &["+", "-", "*", "/", "^", "end of input"]));
    }
    Ok(e)
}

impl Expr {
    /// Folds the tree with caller-supplied leaf and node handlers.
    pub fn fold<T, F>(&self, leaf: &F, ops: &dyn ExprOps<T>) -> Result<T>
    where
        F: Fn(&Expr) -> Result<T>,
    {
        match self {
            Expr::Int(_) | Expr::Var(_) | Expr::Generator => leaf(self),
            Expr::Neg(a) => ops.neg(a.fold(leaf, ops)?),
            Expr::Add(a, b) => ops.add(a.fold(leaf, ops)?, b.fold(leaf, ops)?),
            Expr::Sub(a, b) => ops.sub(a.fold(leaf, ops)?, b.fold(leaf, ops)?),
            Expr::Mul(a, b) => ops.mul(a.fold(leaf, ops)?, b.fold(leaf, ops)?),
            Expr::Div(a, b) => ops.div(a.fold(leaf, ops)?, b.fold(leaf, ops)?),
            Expr::Pow(a, e) => ops.pow(a.fold(leaf, ops)?, *e),
        }
    }

    pub fn variables(&self) -> Vec<String> {
        let mut out = Vec::new();
        self.collect_vars(&mut out);
        out
    }

    fn collect_vars(&self, out: &mut Vec<String>) {
        match self {
            Expr::Var(v) => {
                if !out.contains(v) {
                    out.push(v.clone())
                }
            }
            Expr::Int(_) | Expr::Generator => {}
            Expr::Neg(a) | Expr::Pow(a, _) => a.collect_vars(out),
            Expr::Add(a, b) | Expr::Sub(a, b) | Expr::Mul(a, b) | Expr::Div(a, b) => {
                a.collect_vars(out);
                b.collect_vars(out)
            }
        }
    }
}

pub trait ExprOps<T> {
    fn neg(&self, a: T) -> Result<T>;
    fn add(&self, a: T, b: T) -> Result<T>;
    fn sub(&self, a: T, b: T) -> Result<T>;
    fn mul(&self, a: T, b: T) -> Result<T>;
    fn div(&self, a: T, b: T) -> Result<T>;
    fn pow(&self, a: T, e: u64) -> Result<T>;
}
