//! Recursive-descent parser for the symbol grammar:
//!
//! ```text
//! expr    := term (('+' | '-') term)*
//! term    := factor (('*' | '/') factor)*
//! factor  := '-' factor | atom ['^' integer]
//! atom    := number ['i'] | 'i' | 'pi' | name | 'z' | 't' | '(' expr ')'
//!          | 'exp' '(' expr ')' | 'blaschke' '(' '[' zeros ']' ';' integer ')'
//! integer := ['-'] digits | '(' ['-'] digits ')'
//! ```
//!
//! Subtrees without `z` or `t` are folded into constants, so bound names
//! and literals such as `0.3+0.4i` become a single `Const` node.

use std::collections::BTreeMap;

use num_complex::Complex;

use super::ast::{Blaschke, SymbolExpr};
use crate::error::{ParseError, ParseErrorKind};
use crate::scalar::Real;

/// Names with fixed meaning in the grammar.
pub const RESERVED: [&str; 6] = ["z", "t", "i", "pi", "exp", "blaschke"];

pub(crate) fn parse_expr<T: Real>(text: &str, bindings: &BTreeMap<String, f64>) -> Result<SymbolExpr<T>, ParseError> {
    for (name, value) in bindings {
        if RESERVED.contains(&name.as_str()) {
            return Err(ParseError { position: 0, kind: ParseErrorKind::ReservedName(name.clone()) });
        }
        if !value.is_finite() {
            return Err(ParseError { position: 0, kind: ParseErrorKind::NonFiniteBinding(name.clone()) });
        }
    }
    let mut p = Parser { src: text, bytes: text.as_bytes(), pos: 0, bindings };
    let e = p.expr()?;
    p.skip_ws();
    if p.pos < p.bytes.len() {
        return Err(p.err(ParseErrorKind::TrailingInput));
    }
    Ok(e)
}

struct Parser<'a> {
    src: &'a str,
    bytes: &'a [u8],
    pos: usize,
    bindings: &'a BTreeMap<String, f64>,
}

enum BinOp {
    Add,
    Sub,
    Mul,
    Div,
}

impl<'a> Parser<'a> {
    fn err(&self, kind: ParseErrorKind) -> ParseError {
        ParseError { position: self.pos, kind }
    }

    fn err_at(&self, position: usize, kind: ParseErrorKind) -> ParseError {
        ParseError { position, kind }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.bytes.get(self.pos).copied()
    }

    fn eat(&mut self, c: u8) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: u8, what: &'static str) -> Result<(), ParseError> {
        match self.peek() {
            Some(x) if x == c => {
                self.pos += 1;
                Ok(())
            }
            Some(_) => Err(self.unexpected(what)),
            None => Err(self.err(ParseErrorKind::UnexpectedEnd)),
        }
    }

    fn unexpected(&self, what: &'static str) -> ParseError {
        match self.src[self.pos..].chars().next() {
            Some(_) => self.err(ParseErrorKind::Expected(what)),
            None => self.err(ParseErrorKind::UnexpectedEnd),
        }
    }

    fn expr<T: Real>(&mut self) -> Result<SymbolExpr<T>, ParseError> {
        let mut lhs = self.term()?;
        loop {
            let op = match self.peek() {
                Some(b'+') => BinOp::Add,
                Some(b'-') => BinOp::Sub,
                _ => return Ok(lhs),
            };
            let at = self.pos;
            self.pos += 1;
            let rhs = self.term()?;
            lhs = self.fold_binary(op, lhs, rhs, at)?;
        }
    }

    fn term<T: Real>(&mut self) -> Result<SymbolExpr<T>, ParseError> {
        let mut lhs = self.factor()?;
        loop {
            let op = match self.peek() {
                Some(b'*') => BinOp::Mul,
                Some(b'/') => BinOp::Div,
                _ => return Ok(lhs),
            };
            let at = self.pos;
            self.pos += 1;
            let rhs = self.factor()?;
            lhs = self.fold_binary(op, lhs, rhs, at)?;
        }
    }

    fn factor<T: Real>(&mut self) -> Result<SymbolExpr<T>, ParseError> {
        let at = self.pos;
        if self.eat(b'-') {
            let inner = self.factor()?;
            return self.fold_unary(SymbolExpr::neg(inner), at);
        }
        let base = self.atom()?;
        if self.eat(b'^') {
            let at = self.pos;
            let n = self.integer()?;
            return self.fold_unary(SymbolExpr::pow(base, n), at);
        }
        Ok(base)
    }

    /// `['-'] digits` or the same in parentheses.
    fn integer(&mut self) -> Result<i32, ParseError> {
        if self.eat(b'(') {
            let n = self.integer()?;
            self.expect(b')', "')'")?;
            return Ok(n);
        }
        let neg = self.eat(b'-');
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(match self.peek() {
                None => self.err(ParseErrorKind::UnexpectedEnd),
                Some(_) => self.err(ParseErrorKind::NonIntegerExponent),
            });
        }
        if matches!(self.bytes.get(self.pos), Some(b'.') | Some(b'e') | Some(b'E')) {
            return Err(self.err_at(start, ParseErrorKind::NonIntegerExponent));
        }
        let digits = &self.src[start..self.pos];
        let v: i64 = digits
            .parse()
            .map_err(|_| self.err_at(start, ParseErrorKind::BadNumber(digits.to_string())))?;
        let v = if neg { -v } else { v };
        i32::try_from(v).map_err(|_| self.err_at(start, ParseErrorKind::BadNumber(digits.to_string())))
    }

    fn atom<T: Real>(&mut self) -> Result<SymbolExpr<T>, ParseError> {
        let start = {
            self.skip_ws();
            self.pos
        };
        let Some(c) = self.bytes.get(self.pos).copied() else {
            return Err(self.err(ParseErrorKind::UnexpectedEnd));
        };
        if c == b'(' {
            self.pos += 1;
            let e = self.expr()?;
            self.expect(b')', "')'")?;
            return Ok(e);
        }
        if c.is_ascii_digit() || c == b'.' {
            return self.number();
        }
        if c.is_ascii_alphabetic() || c == b'_' {
            while self.pos < self.bytes.len()
                && (self.bytes[self.pos].is_ascii_alphanumeric() || self.bytes[self.pos] == b'_')
            {
                self.pos += 1;
            }
            let name = &self.src[start..self.pos];
            return match name {
                "z" => Ok(SymbolExpr::VarZ),
                "t" => Ok(SymbolExpr::ParamT),
                "i" => Ok(SymbolExpr::Const(Complex::new(T::zero(), T::one()))),
                "pi" => Ok(SymbolExpr::real(T::PI())),
                "exp" => {
                    self.expect(b'(', "'(' after exp")?;
                    let arg = self.expr()?;
                    self.expect(b')', "')'")?;
                    self.fold_unary(SymbolExpr::exp(arg), start)
                }
                "blaschke" => self.blaschke(),
                other => match self.bindings.get(other) {
                    Some(&v) => Ok(SymbolExpr::real(T::lit(v))),
                    None => Err(self.err_at(start, ParseErrorKind::UnboundName(other.to_string()))),
                },
            };
        }
        let ch = self.src[self.pos..].chars().next().unwrap_or('?');
        Err(self.err(ParseErrorKind::UnexpectedChar(ch)))
    }

    fn number<T: Real>(&mut self) -> Result<SymbolExpr<T>, ParseError> {
        let start = self.pos;
        let b = self.bytes;
        let digits = |p: &mut usize| {
            let s = *p;
            while *p < b.len() && b[*p].is_ascii_digit() {
                *p += 1;
            }
            *p - s
        };
        let mut p = self.pos;
        let mut n = digits(&mut p);
        if p < b.len() && b[p] == b'.' {
            p += 1;
            n += digits(&mut p);
        }
        if n == 0 {
            return Err(self.err_at(start, ParseErrorKind::BadNumber(self.src[start..p].to_string())));
        }
        if p < b.len() && (b[p] == b'e' || b[p] == b'E') {
            let mut q = p + 1;
            if q < b.len() && (b[q] == b'+' || b[q] == b'-') {
                q += 1;
            }
            if digits(&mut q) > 0 {
                p = q;
            }
        }
        let text = &self.src[start..p];
        let value = T::from_str_radix(text, 10)
            .ok()
            .filter(|v| v.is_finite())
            .ok_or_else(|| self.err_at(start, ParseErrorKind::BadNumber(text.to_string())))?;
        self.pos = p;
        // Imaginary literal: digits immediately followed by a lone `i`.
        if p < b.len() && b[p] == b'i' && !b.get(p + 1).is_some_and(|c| c.is_ascii_alphanumeric() || *c == b'_') {
            self.pos += 1;
            return Ok(SymbolExpr::Const(Complex::new(T::zero(), value)));
        }
        Ok(SymbolExpr::real(value))
    }

    fn blaschke<T: Real>(&mut self) -> Result<SymbolExpr<T>, ParseError> {
        self.expect(b'(', "'(' after blaschke")?;
        self.expect(b'[', "'[' opening the zero list")?;
        let mut zeros = Vec::new();
        if !self.eat(b']') {
            loop {
                self.skip_ws();
                let at = self.pos;
                let a = match self.expr::<T>()? {
                    SymbolExpr::Const(a) => a,
                    _ => return Err(self.err_at(at, ParseErrorKind::NonConstantZero)),
                };
                let r = a.norm();
                if r == T::zero() {
                    return Err(self.err_at(at, ParseErrorKind::ZeroAtOrigin));
                }
                if r >= T::one() {
                    return Err(self.err_at(at, ParseErrorKind::ZeroOutsideDisk(a.to_string())));
                }
                zeros.push(a);
                if self.eat(b',') {
                    continue;
                }
                self.expect(b']', "',' or ']'")?;
                break;
            }
        }
        self.expect(b';', "';' before the exponent")?;
        self.skip_ws();
        let at = self.pos;
        let m = self.integer()?;
        let m = u32::try_from(m).map_err(|_| self.err_at(at, ParseErrorKind::Expected("nonnegative integer exponent")))?;
        self.expect(b')', "')'")?;
        let b = Blaschke::new(zeros, m).expect("zeros validated above");
        Ok(SymbolExpr::Blaschke(b))
    }

    fn fold_binary<T: Real>(
        &self,
        op: BinOp,
        l: SymbolExpr<T>,
        r: SymbolExpr<T>,
        at: usize,
    ) -> Result<SymbolExpr<T>, ParseError> {
        let e = match op {
            BinOp::Add => SymbolExpr::add(l, r),
            BinOp::Sub => SymbolExpr::sub(l, r),
            BinOp::Mul => SymbolExpr::mul(l, r),
            BinOp::Div => SymbolExpr::div(l, r),
        };
        self.fold_unary(e, at)
    }

    /// Folds a node whose children are all constants.
    fn fold_unary<T: Real>(&self, e: SymbolExpr<T>, at: usize) -> Result<SymbolExpr<T>, ParseError> {
        use SymbolExpr::*;
        let foldable = match &e {
            Add(l, r) | Sub(l, r) | Mul(l, r) | Div(l, r) => matches!(**l, Const(_)) && matches!(**r, Const(_)),
            Neg(x) | IntPow(x, _) | Exp(x) => matches!(**x, Const(_)),
            _ => false,
        };
        if !foldable {
            return Ok(e);
        }
        let v = e.eval(T::zero(), Complex::new(T::zero(), T::zero()));
        match v {
            Ok(v) if v.re.is_finite() && v.im.is_finite() => Ok(Const(v)),
            _ => Err(self.err_at(at, ParseErrorKind::NonFiniteConstant)),
        }
    }
}
