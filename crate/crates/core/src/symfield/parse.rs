use std::sync::Arc;

use num_bigint::BigInt;

use super::locelem::{DenominatorSet, LocElem};
use crate::error::{Error, Result};
use crate::rational::Q;

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(BigInt),
    Ident(String),
    Op(char),
}

fn lex(src: &str) -> Result<Vec<(usize, Tok)>> {
    let chars: Vec<char> = src.chars().collect();
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
            out.push((start, Tok::Num(s.parse().expect("digits"))));
        } else if c.is_alphabetic() || c == '_' {
            let start = i;
            while i < chars.len() && (chars[i].is_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            out.push((start, Tok::Ident(chars[start..i].iter().collect())));
        } else if "+-*/^()".contains(c) {
            out.push((i, Tok::Op(c)));
            i += 1;
        } else {
            return Err(Error::Parse {
                pos: i,
                msg: format!("unexpected character {c:?}"),
            });
        }
    }
    Ok(out)
}

struct Parser<'a> {
    toks: Vec<(usize, Tok)>,
    pos: usize,
    end: usize,
    set: Arc<DenominatorSet>,
    _src: &'a str,
}

impl Parser<'_> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|t| &t.1)
    }

    fn here(&self) -> usize {
        self.toks.get(self.pos).map(|t| t.0).unwrap_or(self.end)
    }

    fn err<T>(&self, msg: impl Into<String>) -> Result<T> {
        Err(Error::Parse {
            pos: self.here(),
            msg: msg.into(),
        })
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(&Tok::Op(c)) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn lift(&self, e: &LocElem) -> LocElem {
        e.in_set(&self.set).expect("sets only grow")
    }

    fn divide(&mut self, a: &LocElem, b: &LocElem) -> Result<LocElem> {
        if b.is_zero() {
            return self.err("division by zero");
        }
        let inv = b.inverse_declaring()?;
        self.set = DenominatorSet::join(&self.set, inv.set())?;
        let a = self.lift(a);
        Ok(a.try_mul(&inv)?.reduced())
    }

    fn expr(&mut self) -> Result<LocElem> {
        let mut acc = if self.eat('-') {
            self.term()?.neg()
        } else {
            self.eat('+');
            self.term()?
        };
        loop {
            if self.eat('+') {
                let t = self.term()?;
                acc = self.lift(&acc).try_add(&t)?;
            } else if self.eat('-') {
                let t = self.term()?;
                acc = self.lift(&acc).try_sub(&t)?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<LocElem> {
        let mut acc = self.power()?;
        loop {
            if self.eat('*') {
                let f = self.power()?;
                acc = self.lift(&acc).try_mul(&f)?;
            } else if self.eat('/') {
                let f = self.power()?;
                acc = self.divide(&acc, &f)?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn power(&mut self) -> Result<LocElem> {
        let base = if self.eat('-') {
            self.power()?.neg()
        } else {
            self.atom()?
        };
        if !self.eat('^') {
            return Ok(base);
        }
        let neg = self.eat('-');
        let k = match self.peek() {
            Some(Tok::Num(n)) => match u32::try_from(n.clone()) {
                Ok(k) => k,
                Err(_) => return self.err("exponent too large"),
            },
            _ => return self.err("expected integer exponent"),
        };
        self.pos += 1;
        let p = base.pow(k);
        if neg {
            let one = LocElem::one(&self.set);
            self.divide(&one, &p)
        } else {
            Ok(p)
        }
    }

    fn atom(&mut self) -> Result<LocElem> {
        match self.peek().cloned() {
            Some(Tok::Num(n)) => {
                self.pos += 1;
                Ok(LocElem::constant(&self.set, Q::from_integer(n)))
            }
            Some(Tok::Ident(name)) => match self.set.var_index(&name) {
                Some(i) => {
                    self.pos += 1;
                    Ok(LocElem::var(&self.set, i))
                }
                None => self.err(format!("unknown variable {name:?}")),
            },
            Some(Tok::Op('(')) => {
                self.pos += 1;
                let e = self.expr()?;
                if !self.eat(')') {
                    return self.err("expected ')'");
                }
                Ok(e)
            }
            Some(t) => self.err(format!("unexpected token {t:?}")),
            None => self.err("unexpected end of input"),
        }
    }
}

/// Parses an expression in the variables of `set`. Dividing by a
/// non-unit declares its non-generator part as a new generator; the returned
/// element carries the possibly extended set.
pub fn parse(src: &str, set: &Arc<DenominatorSet>) -> Result<LocElem> {
    let toks = lex(src)?;
    let mut p = Parser {
        toks,
        pos: 0,
        end: src.chars().count(),
        set: set.clone(),
        _src: src,
    };
    let e = p.expr()?;
    if p.pos != p.toks.len() {
        return p.err("trailing input");
    }
    let set = p.set.clone();
    e.in_set(&set)
}

/// Parses several expressions into one common universe.
pub fn parse_many(srcs: &[&str], set: &Arc<DenominatorSet>) -> Result<Vec<LocElem>> {
    let mut cur = set.clone();
    let mut out = Vec::with_capacity(srcs.len());
    for s in srcs {
        let e = parse(s, &cur)?;
        cur = e.set().clone();
        out.push(e);
    }
    out.into_iter().map(|e| e.in_set(&cur)).collect()
}

