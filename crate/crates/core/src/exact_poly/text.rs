use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use super::{BigRat, MultiPoly, Var, Vars};
use crate::error::{Error, Result};

fn write_rat(out: &mut String, c: &BigRat) {
    out.push_str(&c.numer().to_string());
    if !c.denom().is_one() {
        out.push('/');
        out.push_str(&c.denom().to_string());
    }
}

fn write_var(out: &mut String, v: Var, e: i32) {
    if e == 0 {
        return;
    }
    out.push_str(v.name());
    if e != 1 {
        out.push('^');
        out.push_str(&e.to_string());
    }
}

impl fmt::Display for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let vars = self.vars();
        let mut out = String::new();
        for (i, ((e1, e2), c)) in self.terms().enumerate() {
            let neg = c.is_negative();
            if i == 0 {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            let a = c.abs();
            let mut mono = String::new();
            write_var(&mut mono, vars.0, e1);
            if e1 != 0 && e2 != 0 {
                mono.push('*');
            }
            write_var(&mut mono, vars.1, e2);
            if mono.is_empty() {
                write_rat(&mut out, &a);
            } else {
                if !a.is_one() {
                    write_rat(&mut out, &a);
                    out.push('*');
                }
                out.push_str(&mono);
            }
        }
        f.write_str(&out)
    }
}

struct Parser<'a> {
    src: &'a str,
    pos: usize,
    vars: Vars,
}

impl<'a> Parser<'a> {
    fn err(&self, msg: &str) -> Error {
        Error::Parse { pos: self.pos, msg: msg.to_string() }
    }

    fn skip_ws(&mut self) {
        while let Some(c) = self.peek() {
            if c.is_whitespace() {
                self.pos += c.len_utf8();
            } else {
                break;
            }
        }
    }

    fn peek(&self) -> Option<char> {
        self.src[self.pos..].chars().next()
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.peek()?;
        self.pos += c.len_utf8();
        Some(c)
    }

    fn sign(&mut self) -> Option<bool> {
        self.skip_ws();
        match self.peek() {
            Some('+') => {
                self.bump();
                Some(false)
            }
            Some('-') | Some('−') => {
                self.bump();
                Some(true)
            }
            _ => None,
        }
    }

    fn digits(&mut self) -> Result<BigInt> {
        let start = self.pos;
        while matches!(self.peek(), Some(c) if c.is_ascii_digit()) {
            self.bump();
        }
        if start == self.pos {
            return Err(self.err("expected digits"));
        }
        Ok(self.src[start..self.pos].parse().unwrap())
    }

    fn int(&mut self) -> Result<i32> {
        let neg = matches!(self.peek(), Some('-') | Some('−'));
        if neg {
            self.bump();
        }
        let start = self.pos;
        let d = self.digits()?;
        let v: i32 = d.try_into().map_err(|_| Error::Parse { pos: start, msg: "exponent out of range".into() })?;
        Ok(if neg { -v } else { v })
    }

    fn factor(&mut self, coeff: &mut BigRat, exps: &mut (i32, i32)) -> Result<()> {
        self.skip_ws();
        match self.peek() {
            Some(c) if c.is_ascii_digit() => {
                let n = self.digits()?;
                let mut d = BigInt::one();
                if self.peek() == Some('/') {
                    self.bump();
                    d = self.digits()?;
                    if d.is_zero() {
                        return Err(self.err("zero denominator"));
                    }
                }
                *coeff *= BigRat::new(n, d);
                Ok(())
            }
            Some(c) if c.is_alphabetic() => {
                let start = self.pos;
                while matches!(self.peek(), Some(c) if c.is_alphanumeric()) {
                    self.bump();
                }
                let name = &self.src[start..self.pos];
                let v = Var::from_name(name)
                    .ok_or_else(|| Error::Parse { pos: start, msg: format!("unknown symbol {name}") })?;
                let mut e = 1;
                self.skip_ws();
                if self.peek() == Some('^') {
                    self.bump();
                    self.skip_ws();
                    e = self.int()?;
                }
                if v == self.vars.0 {
                    exps.0 += e;
                } else if v == self.vars.1 {
                    exps.1 += e;
                } else {
                    return Err(Error::Parse { pos: start, msg: format!("symbol {name} not in {:?}", self.vars) });
                }
                Ok(())
            }
            _ => Err(self.err("expected a number or a symbol")),
        }
    }

    fn term(&mut self) -> Result<((i32, i32), BigRat)> {
        let mut coeff = BigRat::one();
        let mut exps = (0, 0);
        self.factor(&mut coeff, &mut exps)?;
        loop {
            self.skip_ws();
            if self.peek() == Some('*') {
                self.bump();
                self.factor(&mut coeff, &mut exps)?;
            } else {
                return Ok((exps, coeff));
            }
        }
    }
}

/// Parses the canonical text form (and any reordering of it) over `vars`.
pub fn parse_poly(src: &str, vars: Vars) -> Result<MultiPoly> {
    let mut p = Parser { src, pos: 0, vars };
    let mut terms = Vec::new();
    let mut neg = p.sign().unwrap_or(false);
    loop {
        let (e, c) = p.term()?;
        terms.push((e, if neg { -c } else { c }));
        p.skip_ws();
        if p.pos == src.len() {
            break;
        }
        neg = p.sign().ok_or_else(|| p.err("expected + or -"))?;
    }
    Ok(MultiPoly::from_terms(vars, terms))
}
