use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;

use super::{Poly, Ring};
use crate::error::{Error, Result};
use crate::linalg::Scalar;

/// Parses text such as `x^2*y - 3/2*x + 1` or `(x - 1)^2` over `ring`.
///
/// Coefficients are rationals; `/` is only accepted between integer literals.
pub fn parse_poly<S: Scalar>(ring: &Arc<Ring>, text: &str) -> Result<Poly<S>> {
    let tokens = tokenize(text)?;
    let mut p = Parser { ring, tokens, pos: 0, text, _s: std::marker::PhantomData };
    let out = p.expr()?;
    if p.pos != p.tokens.len() {
        return Err(p.err("trailing input"));
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Int(BigInt),
    Ident(String),
    Op(char),
}

fn tokenize(text: &str) -> Result<Vec<Tok>> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            let s: String = chars[start..i].iter().collect();
            out.push(Tok::Int(s.parse().expect("digits")));
        } else if c.is_alphabetic() || c == '_' {
            let start = i;
            while i < chars.len() && (chars[i].is_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            out.push(Tok::Ident(chars[start..i].iter().collect()));
        } else if "+-*/^()".contains(c) {
            out.push(Tok::Op(c));
            i += 1;
        } else {
            return Err(Error::Invalid(format!("unexpected character {c:?} in polynomial {text:?}")));
        }
    }
    Ok(out)
}

struct Parser<'a, S> {
    ring: &'a Arc<Ring>,
    tokens: Vec<Tok>,
    pos: usize,
    text: &'a str,
    _s: std::marker::PhantomData<S>,
}

impl<S: Scalar> Parser<'_, S> {
    fn err(&self, msg: &str) -> Error {
        Error::Invalid(format!("{msg} in polynomial {:?}", self.text))
    }

    fn peek(&self) -> Option<&Tok> {
        self.tokens.get(self.pos)
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(&Tok::Op(c)) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expr(&mut self) -> Result<Poly<S>> {
        let mut acc = if self.eat('-') {
            self.term()?.neg()
        } else {
            self.eat('+');
            self.term()?
        };
        loop {
            if self.eat('+') {
                acc = acc.add(&self.term()?);
            } else if self.eat('-') {
                acc = acc.sub(&self.term()?);
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<Poly<S>> {
        let mut acc = self.power()?;
        while self.eat('*') {
            acc = acc.mul(&self.power()?);
        }
        Ok(acc)
    }

    fn power(&mut self) -> Result<Poly<S>> {
        let base = self.atom()?;
        if !self.eat('^') {
            return Ok(base);
        }
        let e = match self.tokens.get(self.pos) {
            Some(Tok::Int(n)) => u32::try_from(n.clone()).map_err(|_| self.err("exponent too large"))?,
            _ => return Err(self.err("expected exponent")),
        };
        self.pos += 1;
        let mut out = Poly::constant(self.ring, S::one());
        for _ in 0..e {
            out = out.mul(&base);
        }
        Ok(out)
    }

    fn atom(&mut self) -> Result<Poly<S>> {
        match self.tokens.get(self.pos).cloned() {
            Some(Tok::Int(n)) => {
                self.pos += 1;
                let mut q = BigRational::from_integer(n);
                if self.eat('/') {
                    match self.tokens.get(self.pos) {
                        Some(Tok::Int(d)) if *d != BigInt::from(0) => {
                            q /= BigRational::from_integer(d.clone());
                            self.pos += 1;
                        }
                        _ => return Err(self.err("expected nonzero denominator")),
                    }
                }
                Ok(Poly::constant(self.ring, S::from_rational(&q)))
            }
            Some(Tok::Ident(name)) => {
                self.pos += 1;
                let v = self.ring.var_index(&name).ok_or_else(|| self.err(&format!("unknown variable {name:?}")))?;
                Ok(Poly::monomial(self.ring, self.ring.var(v), S::one()))
            }
            Some(Tok::Op('(')) => {
                self.pos += 1;
                let inner = self.expr()?;
                if !self.eat(')') {
                    return Err(self.err("missing ')'"));
                }
                Ok(inner)
            }
            Some(Tok::Op('-')) => {
                self.pos += 1;
                Ok(self.power()?.neg())
            }
            _ => Err(self.err("unexpected token")),
        }
    }
}
