//! Infix expression parsing shared by the operator, polynomial and
//! trivariate text formats.
//!
//! Grammar: integer literals, identifiers, `+ - * / ^ ( )`, unary minus.
//! `^` takes an integer exponent (optionally negative, optionally
//! parenthesized). Whitespace is ignored.

use crate::error::{Error, Result};
use num_bigint::BigInt;

#[derive(Clone, Debug, PartialEq)]
pub enum Expr {
    Int(BigInt),
    Var(String),
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, i64),
}

/// Target algebra for evaluating an [`Expr`].
pub trait Algebra: Sized + Clone {
    fn from_int(n: &BigInt) -> Result<Self>;
    fn var(name: &str) -> Result<Self>;
    fn add(&self, o: &Self) -> Result<Self>;
    fn sub(&self, o: &Self) -> Result<Self>;
    fn mul(&self, o: &Self) -> Result<Self>;
    fn div(&self, o: &Self) -> Result<Self>;
    fn neg(&self) -> Result<Self>;
    fn one() -> Result<Self> {
        Self::from_int(&BigInt::from(1))
    }
    fn pow(&self, e: i64) -> Result<Self> {
        let mut b = if e < 0 { Self::one()?.div(self)? } else { self.clone() };
        let mut e = e.unsigned_abs();
        let mut r = Self::one()?;
        while e > 0 {
            if e & 1 == 1 {
                r = r.mul(&b)?;
            }
            e >>= 1;
            if e > 0 {
                b = b.mul(&b)?;
            }
        }
        Ok(r)
    }
}

impl Expr {
    pub fn eval<A: Algebra>(&self) -> Result<A> {
        match self {
            Expr::Int(n) => A::from_int(n),
            Expr::Var(v) => A::var(v),
            Expr::Neg(a) => a.eval::<A>()?.neg(),
            Expr::Add(a, b) => a.eval::<A>()?.add(&b.eval::<A>()?),
            Expr::Sub(a, b) => a.eval::<A>()?.sub(&b.eval::<A>()?),
            Expr::Mul(a, b) => a.eval::<A>()?.mul(&b.eval::<A>()?),
            Expr::Div(a, b) => a.eval::<A>()?.div(&b.eval::<A>()?),
            Expr::Pow(a, e) => a.eval::<A>()?.pow(*e),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Int(BigInt),
    Ident(String),
    Op(char),
}

fn lex(s: &str) -> Result<Vec<Tok>> {
    let chars: Vec<char> = s.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() {
            let st = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            let lit: String = chars[st..i].iter().collect();
            out.push(Tok::Int(lit.parse().unwrap()));
        } else if c.is_alphabetic() || c == '_' {
            let st = i;
            while i < chars.len() && (chars[i].is_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            out.push(Tok::Ident(chars[st..i].iter().collect()));
        } else if "+-*/^()".contains(c) {
            out.push(Tok::Op(c));
            i += 1;
        } else if c == '−' {
            out.push(Tok::Op('-'));
            i += 1;
        } else {
            return Err(Error::Parse(format!("unexpected character '{}' at offset {}", c, i)));
        }
    }
    Ok(out)
}

struct Parser {
    toks: Vec<Tok>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos)
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(&Tok::Op(c)) {
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
        let mut lhs = self.unary()?;
        loop {
            if self.eat('*') {
                lhs = Expr::Mul(Box::new(lhs), Box::new(self.unary()?));
            } else if self.eat('/') {
                lhs = Expr::Div(Box::new(lhs), Box::new(self.unary()?));
            } else {
                return Ok(lhs);
            }
        }
    }

    fn unary(&mut self) -> Result<Expr> {
        if self.eat('-') {
            return Ok(Expr::Neg(Box::new(self.unary()?)));
        }
        if self.eat('+') {
            return self.unary();
        }
        self.power()
    }

    fn power(&mut self) -> Result<Expr> {
        let base = self.atom()?;
        if self.eat('^') {
            let paren = self.eat('(');
            let neg = self.eat('-');
            let e = match self.toks.get(self.pos) {
                Some(Tok::Int(n)) => {
                    self.pos += 1;
                    i64::try_from(n.clone()).map_err(|_| Error::Parse("exponent too large".into()))?
                }
                _ => return Err(Error::Parse("expected integer exponent after '^'".into())),
            };
            if paren && !self.eat(')') {
                return Err(Error::Parse("expected ')' after exponent".into()));
            }
            return Ok(Expr::Pow(Box::new(base), if neg { -e } else { e }));
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Expr> {
        match self.toks.get(self.pos).cloned() {
            Some(Tok::Int(n)) => {
                self.pos += 1;
                Ok(Expr::Int(n))
            }
            Some(Tok::Ident(s)) => {
                self.pos += 1;
                Ok(Expr::Var(s))
            }
            Some(Tok::Op('(')) => {
                self.pos += 1;
                let e = self.expr()?;
                if !self.eat(')') {
                    return Err(Error::Parse("expected ')'".into()));
                }
                Ok(e)
            }
            Some(t) => Err(Error::Parse(format!("unexpected token {:?}", t))),
            None => Err(Error::Parse("unexpected end of input".into())),
        }
    }
}

pub fn parse(s: &str) -> Result<Expr> {
    let toks = lex(s)?;
    if toks.is_empty() {
        return Err(Error::Parse("empty expression".into()));
    }
    let mut p = Parser { toks, pos: 0 };
    let e = p.expr()?;
    if p.pos != p.toks.len() {
        return Err(Error::Parse(format!("trailing input at token {}", p.pos)));
    }
    Ok(e)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn precedence() {
        let e = parse("-x^2 + 3*x/2").unwrap();
        assert_eq!(
            e,
            Expr::Add(
                Box::new(Expr::Neg(Box::new(Expr::Pow(Box::new(Expr::Var("x".into())), 2)))),
                Box::new(Expr::Div(
                    Box::new(Expr::Mul(Box::new(Expr::Int(3.into())), Box::new(Expr::Var("x".into())))),
                    Box::new(Expr::Int(2.into()))
                ))
            )
        );
    }

    #[test]
    fn negative_exponent() {
        assert_eq!(parse("x^(-2)").unwrap(), Expr::Pow(Box::new(Expr::Var("x".into())), -2));
        assert_eq!(parse("x^-2").unwrap(), Expr::Pow(Box::new(Expr::Var("x".into())), -2));
    }

    #[test]
    fn errors() {
        assert!(parse("").is_err());
        assert!(parse("x +").is_err());
        assert!(parse("(x").is_err());
        assert!(parse("x $ 2").is_err());
        assert!(parse("x^y").is_err());
    }
}
