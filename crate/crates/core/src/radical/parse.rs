//! Text syntax: `c0`, integer literals, `+ - * /`, `root(k, expr)`.
//!
//! Printing uses the fewest parentheses that parse back to the same tree.
//! A leading `-` directly before a digit in operand position is part of a
//! literal; there is no unary minus on other operands.

use std::fmt;

use super::{ExprError, RadicalExpr};

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
enum Prec {
    Sum,
    Product,
    Atom,
}

fn prec(e: &RadicalExpr) -> Prec {
    match e {
        RadicalExpr::Add { .. } | RadicalExpr::Subtract { .. } => Prec::Sum,
        RadicalExpr::Multiply { .. } | RadicalExpr::Divide { .. } => Prec::Product,
        _ => Prec::Atom,
    }
}

fn write_operand(f: &mut fmt::Formatter<'_>, e: &RadicalExpr, min: Prec) -> fmt::Result {
    if prec(e) < min {
        write!(f, "({e})")
    } else {
        write!(f, "{e}")
    }
}

impl fmt::Display for RadicalExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (sym, left, right, level) = match self {
            RadicalExpr::Integer { value } => return write!(f, "{value}"),
            RadicalExpr::Coefficient { index } => return write!(f, "c{index}"),
            RadicalExpr::Root { k, radicand } => return write!(f, "root({k}, {radicand})"),
            RadicalExpr::Add { left, right } => ("+", left, right, Prec::Sum),
            RadicalExpr::Subtract { left, right } => ("-", left, right, Prec::Sum),
            RadicalExpr::Multiply { left, right } => ("*", left, right, Prec::Product),
            RadicalExpr::Divide { left, right } => ("/", left, right, Prec::Product),
        };
        // left-associative: the right operand must bind tighter
        let tighter = if level == Prec::Sum {
            Prec::Product
        } else {
            Prec::Atom
        };
        write_operand(f, left, level)?;
        write!(f, " {sym} ")?;
        write_operand(f, right, tighter)
    }
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl Parser<'_> {
    fn error<T>(&self, message: impl Into<String>) -> Result<T, ExprError> {
        Err(ExprError::Parse {
            pos: self.pos,
            message: message.into(),
        })
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn expect(&mut self, c: u8) -> Result<(), ExprError> {
        if self.peek() == Some(c) {
            self.pos += 1;
            Ok(())
        } else {
            self.error(format!("expected '{}'", c as char))
        }
    }

    fn digits(&mut self) -> &str {
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        std::str::from_utf8(&self.src[start..self.pos]).expect("ascii digits")
    }

    fn sum(&mut self) -> Result<RadicalExpr, ExprError> {
        let mut left = self.product()?;
        loop {
            match self.peek() {
                Some(b'+') => {
                    self.pos += 1;
                    left = left + self.product()?;
                }
                Some(b'-') => {
                    self.pos += 1;
                    left = left - self.product()?;
                }
                _ => return Ok(left),
            }
        }
    }

    fn product(&mut self) -> Result<RadicalExpr, ExprError> {
        let mut left = self.atom()?;
        loop {
            match self.peek() {
                Some(b'*') => {
                    self.pos += 1;
                    left = left * self.atom()?;
                }
                Some(b'/') => {
                    self.pos += 1;
                    left = left / self.atom()?;
                }
                _ => return Ok(left),
            }
        }
    }

    fn atom(&mut self) -> Result<RadicalExpr, ExprError> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let e = self.sum()?;
                self.expect(b')')?;
                Ok(e)
            }
            Some(b'-') if self.src.get(self.pos + 1).is_some_and(u8::is_ascii_digit) => {
                self.pos += 1;
                let text = format!("-{}", self.digits());
                match text.parse() {
                    Ok(value) => Ok(RadicalExpr::Integer { value }),
                    Err(_) => self.error("integer out of range"),
                }
            }
            Some(c) if c.is_ascii_digit() => match self.digits().parse() {
                Ok(value) => Ok(RadicalExpr::Integer { value }),
                Err(_) => self.error("integer out of range"),
            },
            Some(b'c') => {
                self.pos += 1;
                let d = self.digits();
                if d.is_empty() {
                    return self.error("expected coefficient index");
                }
                match d.parse() {
                    Ok(index) => Ok(RadicalExpr::Coefficient { index }),
                    Err(_) => self.error("coefficient index out of range"),
                }
            }
            Some(b'r') if self.src[self.pos..].starts_with(b"root") => {
                self.pos += 4;
                self.expect(b'(')?;
                self.skip_ws();
                let k: u32 = match self.digits().parse() {
                    Ok(k) if k >= 2 => k,
                    _ => return self.error("root index must be an integer ≥ 2"),
                };
                self.expect(b',')?;
                let radicand = self.sum()?;
                self.expect(b')')?;
                Ok(super::root(k, radicand))
            }
            Some(_) => self.error("unexpected character"),
            None => self.error("unexpected end of input"),
        }
    }
}

pub(super) fn parse(text: &str) -> Result<RadicalExpr, ExprError> {
    let mut p = Parser {
        src: text.as_bytes(),
        pos: 0,
    };
    let e = p.sum()?;
    if p.peek().is_some() {
        return p.error("trailing input");
    }
    Ok(e)
}
