//! Parser for observables written as sums of products, e.g.
//! `3/2*q^2*p - i*lambda*g1 + (q+p)^2*exp(-1/2*q^2 - p^2)`.
//!
//! Factors: rational literals, `i`, `lambda` (or `λ`), coordinate names,
//! parenthesized sub-expressions, `^` with a non-negative integer exponent,
//! and `exp(...)` whose argument is `-Σ a x²` with positive rational `a`.

use num_rational::Rational64;
use num_traits::{ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::model::ModelSpace;
use crate::poly::{Poly, Profile, MAX_VARS};
use crate::scalar::{Q, C};
use crate::series::Observable;

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(Q),
    Ident(String),
    Op(char),
}

fn lex(s: &str) -> Result<Vec<Tok>> {
    let mut out = Vec::new();
    let cs: Vec<char> = s.chars().collect();
    let mut i = 0;
    while i < cs.len() {
        let c = cs[i];
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() {
            let st = i;
            while i < cs.len() && cs[i].is_ascii_digit() {
                i += 1;
            }
            let txt: String = cs[st..i].iter().collect();
            let n: num_bigint::BigInt = txt.parse().map_err(|_| Error::Config(format!("bad number `{txt}`")))?;
            out.push(Tok::Num(Q::from_integer(n)));
        } else if c.is_alphabetic() || c == '_' {
            let st = i;
            while i < cs.len() && (cs[i].is_alphanumeric() || cs[i] == '_') {
                i += 1;
            }
            out.push(Tok::Ident(cs[st..i].iter().collect()));
        } else if "+-*/^()".contains(c) {
            out.push(Tok::Op(c));
            i += 1;
        } else {
            return Err(Error::Config(format!("unexpected character `{c}` in expression")));
        }
    }
    Ok(out)
}

struct Parser<'a> {
    toks: Vec<Tok>,
    pos: usize,
    m: &'a ModelSpace,
}

impl<'a> Parser<'a> {
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
    fn expect(&mut self, c: char) -> Result<()> {
        if self.eat(c) {
            Ok(())
        } else {
            Err(Error::Config(format!("expected `{c}` at token {}", self.pos + 1)))
        }
    }
    fn integer(&mut self) -> Result<u32> {
        match self.toks.get(self.pos) {
            Some(Tok::Num(n)) if n.is_integer() => {
                self.pos += 1;
                n.to_integer().to_u32().ok_or_else(|| Error::Config("exponent too large".into()))
            }
            _ => Err(Error::Config(format!("expected an integer exponent at token {}", self.pos + 1))),
        }
    }

    fn expr(&mut self) -> Result<Observable> {
        let mut acc = self.m.zero();
        let mut first = true;
        loop {
            let neg = if self.eat('-') {
                true
            } else {
                if !self.eat('+') && !first {
                    break;
                }
                false
            };
            let t = self.term()?;
            acc = if neg { acc.sub(&t) } else { acc.add(&t) };
            first = false;
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<Observable> {
        let mut acc = self.power()?;
        loop {
            if self.eat('*') {
                acc = acc.mul(&self.power()?);
            } else if self.eat('/') {
                let d = self.power()?;
                let c = d
                    .as_scalar()
                    .filter(|s| s.coeffs()[1..].iter().all(|c| c.is_zero()))
                    .and_then(|s| s.classical().inv())
                    .ok_or_else(|| Error::Config("division only by non-zero constants".into()))?;
                acc = acc.scale(&c);
            } else {
                return Ok(acc);
            }
        }
    }

    fn power(&mut self) -> Result<Observable> {
        let base = self.atom()?;
        if !self.eat('^') {
            return Ok(base);
        }
        let e = self.integer()?;
        let mut out = self.m.one();
        for _ in 0..e {
            out = out.mul(&base);
        }
        Ok(out)
    }

    fn atom(&mut self) -> Result<Observable> {
        match self.toks.get(self.pos).cloned() {
            Some(Tok::Num(n)) => {
                self.pos += 1;
                Ok(self.m.constant(C::real(n)))
            }
            Some(Tok::Op('(')) => {
                self.pos += 1;
                let e = self.expr()?;
                self.expect(')')?;
                Ok(e)
            }
            Some(Tok::Ident(name)) => {
                self.pos += 1;
                match name.as_str() {
                    "i" => Ok(self.m.constant(C::i())),
                    "lambda" | "λ" => Ok(self.m.lambda_term(C::one(), 1)),
                    "exp" => {
                        self.expect('(')?;
                        let arg = self.expr()?;
                        self.expect(')')?;
                        Ok(self.m.poly(Poly::gaussian(gaussian_profile(&arg)?)))
                    }
                    _ => Ok(self.m.var(self.m.var_index(&name)?)),
                }
            }
            other => Err(Error::Config(format!("unexpected token {other:?}"))),
        }
    }
}

fn gaussian_profile(arg: &Observable) -> Result<Profile> {
    let bad = || Error::Config("exp argument must be -Σ a·x² with positive rational a".into());
    if arg.coeffs()[1..].iter().any(|p| !p.is_zero()) {
        return Err(bad());
    }
    let mut pairs = Vec::new();
    for (key, c) in arg.classical().terms() {
        if !key.gauss.is_empty() || !c.is_real() || key.mono.degree() != 2 {
            return Err(bad());
        }
        let v = (0..MAX_VARS).find(|&v| key.mono.get(v) == 2).ok_or_else(bad)?;
        let a = -c.re.clone();
        if a <= Q::zero() {
            return Err(bad());
        }
        let (n, d) = (a.numer().to_i64().ok_or_else(bad)?, a.denom().to_i64().ok_or_else(bad)?);
        pairs.push((v, Rational64::new(n, d)));
    }
    Ok(Profile::new(&pairs))
}

/// Parses `s` into an observable on `m`.
pub fn parse_observable(m: &ModelSpace, s: &str) -> Result<Observable> {
    let toks = lex(s)?;
    if toks.is_empty() {
        return Err(Error::Config("empty expression".into()));
    }
    let mut p = Parser { toks, pos: 0, m };
    let out = p.expr()?;
    if p.pos != p.toks.len() {
        return Err(Error::Config(format!("trailing input at token {}", p.pos + 1)));
    }
    Ok(out)
}
