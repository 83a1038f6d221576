//! A small expression language for profile functions `u ↦ r(u)`.
//!
//! ```text
//! expr    = term { ("+" | "-") term } ;
//! term    = unary { ("*" | "/") unary } ;
//! unary   = "-" unary | power ;
//! power   = atom [ "^" unary ] ;            (* exponent may not contain u *)
//! atom    = number | "u" | constant | func "(" expr ")" | "(" expr ")" ;
//! func    = "sqrt" | "sin" | "cos" | "sinh" | "cosh" | "exp" | "ln" | "abs" ;
//! number  = digits [ "." digits ] [ ("e" | "E") [ "+" | "-" ] digits ] ;
//! ```
//!
//! `pi` is always bound. Other constants must be declared when parsing and
//! receive their values at evaluation time, so one parsed tree serves a whole
//! parameter sweep. Evaluation yields a [`Jet2`] carrying exact first and
//! second derivatives.

use alloc::boxed::Box;
use alloc::collections::BTreeMap;
use alloc::string::{String, ToString};
use core::fmt;

use crate::error::{DomainKind, Error, Result};
use crate::jet::Jet2;
use crate::math::PI;

pub type Constants = BTreeMap<String, f64>;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BinOp {
    Add,
    Sub,
    Mul,
    Div,
    Pow,
}

impl BinOp {
    fn symbol(self) -> char {
        match self {
            BinOp::Add => '+',
            BinOp::Sub => '-',
            BinOp::Mul => '*',
            BinOp::Div => '/',
            BinOp::Pow => '^',
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Func {
    Sqrt,
    Sin,
    Cos,
    Sinh,
    Cosh,
    Exp,
    Ln,
    Abs,
}

impl Func {
    pub const ALL: [Func; 8] = [
        Func::Sqrt,
        Func::Sin,
        Func::Cos,
        Func::Sinh,
        Func::Cosh,
        Func::Exp,
        Func::Ln,
        Func::Abs,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Func::Sqrt => "sqrt",
            Func::Sin => "sin",
            Func::Cos => "cos",
            Func::Sinh => "sinh",
            Func::Cosh => "cosh",
            Func::Exp => "exp",
            Func::Ln => "ln",
            Func::Abs => "abs",
        }
    }

    fn from_name(name: &str) -> Option<Func> {
        Func::ALL.into_iter().find(|f| f.name() == name)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Expr {
    Num(f64),
    Var,
    Const(String),
    Neg(Box<Expr>),
    Binary(BinOp, Box<Expr>, Box<Expr>),
    Call(Func, Box<Expr>),
}

impl Expr {
    pub fn depends_on_u(&self) -> bool {
        match self {
            Expr::Var => true,
            Expr::Num(_) | Expr::Const(_) => false,
            Expr::Neg(e) | Expr::Call(_, e) => e.depends_on_u(),
            Expr::Binary(_, l, r) => l.depends_on_u() || r.depends_on_u(),
        }
    }
}

/// Canonical, fully parenthesized form. Re-parsing it yields the same tree.
impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Num(x) => write!(f, "{x:?}"),
            Expr::Var => f.write_str("u"),
            Expr::Const(name) => f.write_str(name),
            Expr::Neg(e) => write!(f, "(-{e})"),
            Expr::Binary(op, l, r) => write!(f, "({l}{}{r})", op.symbol()),
            Expr::Call(func, e) => write!(f, "{}({e})", func.name()),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
enum Tok<'a> {
    Num(f64),
    Ident(&'a str),
    Op(char),
    LParen,
    RParen,
    End,
}

struct Lexer<'a> {
    src: &'a str,
    pos: usize,
}

impl<'a> Lexer<'a> {
    fn next(&mut self) -> Result<(Tok<'a>, usize)> {
        let bytes = self.src.as_bytes();
        while self.pos < bytes.len() && bytes[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
        let start = self.pos;
        let Some(&c) = bytes.get(start) else {
            return Ok((Tok::End, start));
        };
        let tok = match c {
            b'0'..=b'9' | b'.' => {
                let mut end = start;
                while end < bytes.len() && (bytes[end].is_ascii_digit() || bytes[end] == b'.') {
                    end += 1;
                }
                if end < bytes.len() && (bytes[end] == b'e' || bytes[end] == b'E') {
                    let mut k = end + 1;
                    if k < bytes.len() && (bytes[k] == b'+' || bytes[k] == b'-') {
                        k += 1;
                    }
                    if k < bytes.len() && bytes[k].is_ascii_digit() {
                        while k < bytes.len() && bytes[k].is_ascii_digit() {
                            k += 1;
                        }
                        end = k;
                    }
                }
                let text = &self.src[start..end];
                let value: f64 = text.parse().map_err(|_| Error::Syntax {
                    offset: start,
                    message: "malformed number",
                })?;
                self.pos = end;
                Tok::Num(value)
            }
            b'a'..=b'z' | b'A'..=b'Z' | b'_' => {
                let mut end = start;
                while end < bytes.len()
                    && (bytes[end].is_ascii_alphanumeric() || bytes[end] == b'_')
                {
                    end += 1;
                }
                self.pos = end;
                Tok::Ident(&self.src[start..end])
            }
            b'+' | b'-' | b'*' | b'/' | b'^' => {
                self.pos += 1;
                Tok::Op(c as char)
            }
            b'(' => {
                self.pos += 1;
                Tok::LParen
            }
            b')' => {
                self.pos += 1;
                Tok::RParen
            }
            _ => {
                return Err(Error::Syntax {
                    offset: start,
                    message: "unexpected character",
                })
            }
        };
        Ok((tok, start))
    }
}

struct Parser<'a, 'c> {
    lexer: Lexer<'a>,
    tok: Tok<'a>,
    offset: usize,
    constants: &'c [&'c str],
}

impl<'a, 'c> Parser<'a, 'c> {
    fn bump(&mut self) -> Result<()> {
        let (tok, offset) = self.lexer.next()?;
        self.tok = tok;
        self.offset = offset;
        Ok(())
    }

    fn syntax<T>(&self, message: &'static str) -> Result<T> {
        Err(Error::Syntax {
            offset: self.offset,
            message,
        })
    }

    fn expr(&mut self) -> Result<Expr> {
        let mut lhs = self.term()?;
        loop {
            let op = match self.tok {
                Tok::Op('+') => BinOp::Add,
                Tok::Op('-') => BinOp::Sub,
                _ => return Ok(lhs),
            };
            self.bump()?;
            let rhs = self.term()?;
            lhs = Expr::Binary(op, Box::new(lhs), Box::new(rhs));
        }
    }

    fn term(&mut self) -> Result<Expr> {
        let mut lhs = self.unary()?;
        loop {
            let op = match self.tok {
                Tok::Op('*') => BinOp::Mul,
                Tok::Op('/') => BinOp::Div,
                _ => return Ok(lhs),
            };
            self.bump()?;
            let rhs = self.unary()?;
            lhs = Expr::Binary(op, Box::new(lhs), Box::new(rhs));
        }
    }

    fn unary(&mut self) -> Result<Expr> {
        if self.tok == Tok::Op('-') {
            self.bump()?;
            return Ok(Expr::Neg(Box::new(self.unary()?)));
        }
        self.power()
    }

    fn power(&mut self) -> Result<Expr> {
        let base = self.atom()?;
        if self.tok != Tok::Op('^') {
            return Ok(base);
        }
        self.bump()?;
        let at = self.offset;
        let exponent = self.unary()?;
        if exponent.depends_on_u() {
            return Err(Error::Syntax {
                offset: at,
                message: "exponent must not depend on u",
            });
        }
        Ok(Expr::Binary(BinOp::Pow, Box::new(base), Box::new(exponent)))
    }

    fn atom(&mut self) -> Result<Expr> {
        match self.tok {
            Tok::Num(x) => {
                self.bump()?;
                Ok(Expr::Num(x))
            }
            Tok::LParen => {
                self.bump()?;
                let e = self.expr()?;
                if self.tok != Tok::RParen {
                    return self.syntax("expected `)`");
                }
                self.bump()?;
                Ok(e)
            }
            Tok::Ident(name) => {
                let at = self.offset;
                self.bump()?;
                if self.tok == Tok::LParen {
                    let func = Func::from_name(name).ok_or_else(|| Error::UnknownIdentifier {
                        name: name.to_string(),
                        offset: at,
                    })?;
                    self.bump()?;
                    let arg = self.expr()?;
                    if self.tok != Tok::RParen {
                        return self.syntax("expected `)` after function argument");
                    }
                    self.bump()?;
                    return Ok(Expr::Call(func, Box::new(arg)));
                }
                if name == "u" {
                    Ok(Expr::Var)
                } else if name == "pi" || self.constants.contains(&name) {
                    Ok(Expr::Const(name.to_string()))
                } else if Func::from_name(name).is_some() {
                    Err(Error::Syntax {
                        offset: self.offset,
                        message: "expected `(` after function name",
                    })
                } else {
                    Err(Error::UnknownIdentifier {
                        name: name.to_string(),
                        offset: at,
                    })
                }
            }
            Tok::End => self.syntax("unexpected end of input"),
            Tok::Op(_) | Tok::RParen => self.syntax("expected a number, identifier or `(`"),
        }
    }
}

/// Parse `text`, accepting `u`, `pi` and the listed constant names.
pub fn parse(text: &str, constants: &[&str]) -> Result<Expr> {
    let mut p = Parser {
        lexer: Lexer { src: text, pos: 0 },
        tok: Tok::End,
        offset: 0,
        constants,
    };
    p.bump()?;
    let e = p.expr()?;
    if p.tok != Tok::End {
        return p.syntax("unexpected trailing input");
    }
    Ok(e)
}

/// Evaluate `expr` and its first two derivatives with respect to `u`.
pub fn eval_jet(expr: &Expr, u: f64, consts: &Constants) -> Result<Jet2> {
    let domain = |kind| Error::Domain { u, kind };
    let j = match expr {
        Expr::Num(x) => Jet2::constant(*x),
        Expr::Var => Jet2::variable(u),
        Expr::Const(name) => match consts.get(name) {
            Some(&x) => Jet2::constant(x),
            None if name == "pi" => Jet2::constant(PI),
            None => return Err(Error::UnboundConstant { name: name.clone() }),
        },
        Expr::Neg(e) => -eval_jet(e, u, consts)?,
        Expr::Binary(op, l, r) => {
            let a = eval_jet(l, u, consts)?;
            let b = eval_jet(r, u, consts)?;
            match op {
                BinOp::Add => a + b,
                BinOp::Sub => a - b,
                BinOp::Mul => a * b,
                BinOp::Div => {
                    if b.val == 0.0 {
                        return Err(domain(DomainKind::DivisionByZero));
                    }
                    a / b
                }
                BinOp::Pow => {
                    let p = b.val;
                    let integral = p == libm::trunc(p);
                    if !integral && a.val <= 0.0 {
                        return Err(domain(DomainKind::PowBase));
                    }
                    if integral && p < 0.0 && a.val == 0.0 {
                        return Err(domain(DomainKind::DivisionByZero));
                    }
                    a.powf(p)
                }
            }
        }
        Expr::Call(func, e) => {
            let a = eval_jet(e, u, consts)?;
            match func {
                Func::Sqrt if a.val <= 0.0 => return Err(domain(DomainKind::SqrtNonPositive)),
                Func::Ln if a.val <= 0.0 => return Err(domain(DomainKind::LogNonPositive)),
                Func::Abs if a.val == 0.0 => return Err(domain(DomainKind::AbsAtZero)),
                Func::Sqrt => a.sqrt(),
                Func::Sin => a.sin(),
                Func::Cos => a.cos(),
                Func::Sinh => a.sinh(),
                Func::Cosh => a.cosh(),
                Func::Exp => a.exp(),
                Func::Ln => a.ln(),
                Func::Abs => a.abs(),
            }
        }
    };
    if !j.is_finite() {
        return Err(domain(DomainKind::NonFinite));
    }
    Ok(j)
}

/// A parsed profile `u ↦ r(u)` (or `f(u)`) together with its constant values
/// and the interval it is meant to be used on.
#[derive(Clone, Debug, PartialEq)]
pub struct ProfileFunction {
    pub expr: Expr,
    pub constants: Constants,
    pub domain: (f64, f64),
}

impl ProfileFunction {
    pub fn new(expr: Expr, constants: Constants, domain: (f64, f64)) -> Self {
        Self {
            expr,
            constants,
            domain,
        }
    }

    /// Parse `text`, declaring every key of `constants`.
    pub fn parse(text: &str, constants: Constants, domain: (f64, f64)) -> Result<Self> {
        let names: alloc::vec::Vec<&str> = constants.keys().map(String::as_str).collect();
        let expr = parse(text, &names)?;
        Ok(Self::new(expr, constants, domain))
    }

    pub fn eval(&self, u: f64) -> Result<Jet2> {
        eval_jet(&self.expr, u, &self.constants)
    }

    /// Evaluate at `n` evenly spaced points of the domain, endpoints included.
    pub fn check_samples(&self, n: usize) -> Result<()> {
        let (a, b) = self.domain;
        let n = n.max(2);
        for i in 0..n {
            let u = a + (b - a) * i as f64 / (n - 1) as f64;
            self.eval(u)?;
        }
        Ok(())
    }
}
