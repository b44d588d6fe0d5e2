//! A small arithmetic expression grammar for user-supplied scalar maps.
//!
//! Grammar (one free variable `t`):
//!
//! ```text
//! expr    := term (('+' | '-') term)*
//! term    := factor (('*' | '/') factor)*
//! factor  := '-' factor | power             # unary minus binds looser than '^'
//! power   := primary ('^' factor)?          # right-associative
//! primary := number | 't' | 'pi' | fn1 '(' expr ')' | fn2 '(' expr ',' expr ')' | '(' expr ')'
//! fn1     := exp | log | sqrt | sin | asin | acos | acosh | tanh | atanh
//! fn2     := min | max
//! ```

use std::fmt;

use crate::error::{Error, Result};
use crate::model::{map, ScalarMap};

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(f64),
    Ident(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
    Comma,
}

fn lex(src: &str) -> Result<Vec<Tok>> {
    let mut out = Vec::new();
    let bytes = src.as_bytes();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i] as char;
        match c {
            ' ' | '\t' | '\n' | '\r' => i += 1,
            '+' => {
                out.push(Tok::Plus);
                i += 1;
            }
            '-' => {
                out.push(Tok::Minus);
                i += 1;
            }
            '*' => {
                out.push(Tok::Star);
                i += 1;
            }
            '/' => {
                out.push(Tok::Slash);
                i += 1;
            }
            '^' => {
                out.push(Tok::Caret);
                i += 1;
            }
            '(' => {
                out.push(Tok::LParen);
                i += 1;
            }
            ')' => {
                out.push(Tok::RParen);
                i += 1;
            }
            ',' => {
                out.push(Tok::Comma);
                i += 1;
            }
            '0'..='9' | '.' => {
                let start = i;
                while i < bytes.len() {
                    let c = bytes[i] as char;
                    if c.is_ascii_digit() || c == '.' {
                        i += 1;
                    } else if (c == 'e' || c == 'E')
                        && i + 1 < bytes.len()
                        && ((bytes[i + 1] as char).is_ascii_digit()
                            || bytes[i + 1] == b'+'
                            || bytes[i + 1] == b'-')
                    {
                        i += 2;
                    } else {
                        break;
                    }
                }
                let text = &src[start..i];
                let v: f64 = text
                    .parse()
                    .map_err(|_| Error::Parse(format!("bad number `{text}` at byte {start}")))?;
                out.push(Tok::Num(v));
            }
            'a'..='z' | 'A'..='Z' | '_' => {
                let start = i;
                while i < bytes.len() && ((bytes[i] as char).is_ascii_alphanumeric() || bytes[i] == b'_') {
                    i += 1;
                }
                out.push(Tok::Ident(src[start..i].to_string()));
            }
            _ => return Err(Error::Parse(format!("unexpected character `{c}` at byte {i}"))),
        }
    }
    Ok(out)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Fn1 {
    Exp,
    Log,
    Sqrt,
    Sin,
    Asin,
    Acos,
    Acosh,
    Tanh,
    Atanh,
}

impl Fn1 {
    fn apply(self, x: f64) -> f64 {
        match self {
            Fn1::Exp => x.exp(),
            Fn1::Log => x.ln(),
            Fn1::Sqrt => x.sqrt(),
            Fn1::Sin => x.sin(),
            Fn1::Asin => x.asin(),
            Fn1::Acos => x.acos(),
            Fn1::Acosh => x.acosh(),
            Fn1::Tanh => x.tanh(),
            Fn1::Atanh => x.atanh(),
        }
    }
}

impl fmt::Display for Fn1 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Fn1::Exp => "exp",
            Fn1::Log => "log",
            Fn1::Sqrt => "sqrt",
            Fn1::Sin => "sin",
            Fn1::Asin => "asin",
            Fn1::Acos => "acos",
            Fn1::Acosh => "acosh",
            Fn1::Tanh => "tanh",
            Fn1::Atanh => "atanh",
        };
        f.write_str(s)
    }
}

#[derive(Clone, Debug)]
pub enum Expr {
    Num(f64),
    Var,
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, Box<Expr>),
    Call(Fn1, Box<Expr>),
    Min(Box<Expr>, Box<Expr>),
    Max(Box<Expr>, Box<Expr>),
}

impl Expr {
    pub fn eval(&self, t: f64) -> f64 {
        match self {
            Expr::Num(v) => *v,
            Expr::Var => t,
            Expr::Neg(e) => -e.eval(t),
            Expr::Add(a, b) => a.eval(t) + b.eval(t),
            Expr::Sub(a, b) => a.eval(t) - b.eval(t),
            Expr::Mul(a, b) => a.eval(t) * b.eval(t),
            Expr::Div(a, b) => a.eval(t) / b.eval(t),
            Expr::Pow(a, b) => a.eval(t).powf(b.eval(t)),
            Expr::Call(f, e) => f.apply(e.eval(t)),
            Expr::Min(a, b) => a.eval(t).min(b.eval(t)),
            Expr::Max(a, b) => a.eval(t).max(b.eval(t)),
        }
    }
}

struct Parser {
    toks: Vec<Tok>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos)
    }

    fn bump(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.pos).cloned();
        self.pos += 1;
        t
    }

    fn expect(&mut self, tok: Tok) -> Result<()> {
        match self.bump() {
            Some(t) if t == tok => Ok(()),
            other => Err(Error::Parse(format!("expected {tok:?}, found {other:?}"))),
        }
    }

    fn expr(&mut self) -> Result<Expr> {
        let mut lhs = self.term()?;
        loop {
            match self.peek() {
                Some(Tok::Plus) => {
                    self.bump();
                    lhs = Expr::Add(Box::new(lhs), Box::new(self.term()?));
                }
                Some(Tok::Minus) => {
                    self.bump();
                    lhs = Expr::Sub(Box::new(lhs), Box::new(self.term()?));
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn term(&mut self) -> Result<Expr> {
        let mut lhs = self.factor()?;
        loop {
            match self.peek() {
                Some(Tok::Star) => {
                    self.bump();
                    lhs = Expr::Mul(Box::new(lhs), Box::new(self.factor()?));
                }
                Some(Tok::Slash) => {
                    self.bump();
                    lhs = Expr::Div(Box::new(lhs), Box::new(self.factor()?));
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn factor(&mut self) -> Result<Expr> {
        if matches!(self.peek(), Some(Tok::Minus)) {
            self.bump();
            return Ok(Expr::Neg(Box::new(self.factor()?)));
        }
        self.power()
    }

    fn power(&mut self) -> Result<Expr> {
        let base = self.primary()?;
        if matches!(self.peek(), Some(Tok::Caret)) {
            self.bump();
            let exp = self.factor()?; // right-associative, exponent may be signed
            return Ok(Expr::Pow(Box::new(base), Box::new(exp)));
        }
        Ok(base)
    }

    fn primary(&mut self) -> Result<Expr> {
        match self.bump() {
            Some(Tok::Num(v)) => Ok(Expr::Num(v)),
            Some(Tok::LParen) => {
                let e = self.expr()?;
                self.expect(Tok::RParen)?;
                Ok(e)
            }
            Some(Tok::Ident(name)) => match name.as_str() {
                "t" => Ok(Expr::Var),
                "pi" => Ok(Expr::Num(std::f64::consts::PI)),
                "min" | "max" => {
                    self.expect(Tok::LParen)?;
                    let a = self.expr()?;
                    self.expect(Tok::Comma)?;
                    let b = self.expr()?;
                    self.expect(Tok::RParen)?;
                    Ok(if name == "min" {
                        Expr::Min(Box::new(a), Box::new(b))
                    } else {
                        Expr::Max(Box::new(a), Box::new(b))
                    })
                }
                other => {
                    let f = match other {
                        "exp" => Fn1::Exp,
                        "log" => Fn1::Log,
                        "sqrt" => Fn1::Sqrt,
                        "sin" => Fn1::Sin,
                        "asin" => Fn1::Asin,
                        "acos" => Fn1::Acos,
                        "acosh" => Fn1::Acosh,
                        "tanh" => Fn1::Tanh,
                        "atanh" => Fn1::Atanh,
                        _ => {
                            return Err(Error::Parse(format!(
                                "unknown identifier `{other}` (the variable is `t`)"
                            )))
                        }
                    };
                    self.expect(Tok::LParen)?;
                    let e = self.expr()?;
                    self.expect(Tok::RParen)?;
                    Ok(Expr::Call(f, Box::new(e)))
                }
            },
            other => Err(Error::Parse(format!("unexpected token {other:?}"))),
        }
    }
}

/// Parse an expression in the variable `t`.
pub fn parse(src: &str) -> Result<Expr> {
    let toks = lex(src)?;
    if toks.is_empty() {
        return Err(Error::Parse("empty expression".into()));
    }
    let mut p = Parser { toks, pos: 0 };
    let e = p.expr()?;
    if p.pos != p.toks.len() {
        return Err(Error::Parse(format!(
            "trailing input after expression (token {})",
            p.pos
        )));
    }
    Ok(e)
}

/// Compile an expression source string into a [`ScalarMap`].
pub fn compile(src: &str) -> Result<ScalarMap> {
    let e = parse(src)?;
    Ok(map(move |t: f64| e.eval(t)))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ev(src: &str, t: f64) -> f64 {
        parse(src).unwrap().eval(t)
    }

    #[test]
    fn precedence_and_power() {
        assert_eq!(ev("2+3*4", 0.0), 14.0);
        assert_eq!(ev("2*3^2", 0.0), 18.0);
        assert_eq!(ev("2^3^2", 0.0), 512.0); // right-associative
        assert_eq!(ev("t^-2", 2.0), 0.25);
        assert_eq!(ev("-t^2", 2.0), -4.0);
        assert_eq!(ev("(1-t)*(1+t)", 0.5), 0.75);
    }

    #[test]
    fn functions_and_constants() {
        assert!((ev("sqrt(t)", 0.25) - 0.5).abs() < 1e-15);
        assert!((ev("exp(log(t))", 0.7) - 0.7).abs() < 1e-15);
        assert!((ev("sin(pi/2)", 0.0) - 1.0).abs() < 1e-15);
        assert!((ev("min(t, 1-t)", 0.3) - 0.3).abs() < 1e-15);
        assert!((ev("max(t, 1-t)", 0.3) - 0.7).abs() < 1e-15);
        assert!((ev("acosh(1/t)", 0.5) - (2.0f64).acosh()).abs() < 1e-15);
        assert!((ev("atanh(t)", 0.5) - 0.5f64.atanh()).abs() < 1e-15);
        assert!((ev("1e-3*t", 2.0) - 0.002).abs() < 1e-18);
    }

    #[test]
    fn catalog_shapes() {
        // (1-t^2)/pi^2, the linear-softening damage potential over t
        let pi2 = std::f64::consts::PI.powi(2);
        assert!((ev("(1-t^2)/pi^2", 0.5) - 0.75 / pi2).abs() < 1e-15);
    }

    #[test]
    fn errors_are_reported() {
        assert!(parse("").is_err());
        assert!(parse("2+").is_err());
        assert!(parse("foo(t)").is_err());
        assert!(parse("min(t)").is_err());
        assert!(parse("t t").is_err());
        assert!(parse("(t").is_err());
    }
}
