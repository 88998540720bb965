//! Expression grammar: generators `x1..x9` (`t` for x1 in rank 1), integer
//! and rational literals, `+ - * / ^`, parentheses, and juxtaposition as
//! multiplication (`x1x2`, `2x1`).

use num_bigint::BigInt;
use thiserror::Error;

use super::NcPoly;
use crate::scalars::FieldSpec;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("syntax error at {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("generator x{index} outside rank {rank}")]
    BadGenerator { index: u32, rank: usize },
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(BigInt),
    Gen(u32),
    Sym(char),
}

fn lex(text: &str, rank: usize) -> Result<Vec<(usize, Tok)>, ParseError> {
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
            out.push((start, Tok::Num(s.parse().expect("digits"))));
        } else if c == 'x' {
            let start = i;
            i += 1;
            let ds = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            if ds == i {
                return Err(ParseError::Syntax { pos: start, msg: "generator needs an index".into() });
            }
            let s: String = chars[ds..i].iter().collect();
            let index: u32 = s
                .parse()
                .map_err(|_| ParseError::Syntax { pos: start, msg: "generator index too large".into() })?;
            if index == 0 || index as usize > rank {
                return Err(ParseError::BadGenerator { index, rank });
            }
            out.push((start, Tok::Gen(index)));
        } else if c == 't' {
            if rank != 1 {
                return Err(ParseError::Syntax { pos: i, msg: "`t` is only available in rank 1".into() });
            }
            out.push((i, Tok::Gen(1)));
            i += 1;
        } else if "+-*/^()".contains(c) {
            out.push((i, Tok::Sym(c)));
            i += 1;
        } else {
            return Err(ParseError::Syntax { pos: i, msg: format!("unexpected character {c:?}") });
        }
    }
    Ok(out)
}

struct Parser {
    toks: Vec<(usize, Tok)>,
    i: usize,
    end: usize,
    spec: FieldSpec,
    rank: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.i).map(|(_, t)| t)
    }

    fn pos(&self) -> usize {
        self.toks.get(self.i).map(|(p, _)| *p).unwrap_or(self.end)
    }

    fn err<T>(&self, msg: &str) -> Result<T, ParseError> {
        Err(ParseError::Syntax { pos: self.pos(), msg: msg.to_string() })
    }

    fn sum(&mut self) -> Result<NcPoly, ParseError> {
        let mut acc = match self.peek() {
            Some(Tok::Sym('-')) => {
                self.i += 1;
                -&self.product()?
            }
            Some(Tok::Sym('+')) => {
                self.i += 1;
                self.product()?
            }
            _ => self.product()?,
        };
        loop {
            match self.peek() {
                Some(Tok::Sym('+')) => {
                    self.i += 1;
                    acc = &acc + &self.product()?;
                }
                Some(Tok::Sym('-')) => {
                    self.i += 1;
                    acc = &acc - &self.product()?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn starts_atom(&self) -> bool {
        matches!(self.peek(), Some(Tok::Num(_)) | Some(Tok::Gen(_)) | Some(Tok::Sym('(')))
    }

    fn product(&mut self) -> Result<NcPoly, ParseError> {
        let mut acc = self.power()?;
        loop {
            match self.peek() {
                Some(Tok::Sym('*')) => {
                    self.i += 1;
                    acc = &acc * &self.power()?;
                }
                Some(Tok::Sym('/')) => {
                    self.i += 1;
                    let pos = self.pos();
                    let d = self.power()?;
                    if !d.is_constant() || d.is_zero() {
                        return Err(ParseError::Syntax { pos, msg: "division only by a nonzero constant".into() });
                    }
                    let inv = d.constant_term().inv().expect("nonzero constant");
                    acc = acc.scale(&inv);
                }
                _ if self.starts_atom() => {
                    acc = &acc * &self.power()?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn power(&mut self) -> Result<NcPoly, ParseError> {
        let base = self.atom()?;
        if let Some(Tok::Sym('^')) = self.peek() {
            self.i += 1;
            match self.peek().cloned() {
                Some(Tok::Num(n)) => {
                    self.i += 1;
                    let e: usize = n.try_into().map_err(|_| ParseError::Syntax {
                        pos: self.pos(),
                        msg: "exponent too large".into(),
                    })?;
                    return Ok(base.pow(e));
                }
                _ => return self.err("expected a nonnegative integer exponent"),
            }
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<NcPoly, ParseError> {
        match self.peek().cloned() {
            Some(Tok::Num(n)) => {
                self.i += 1;
                Ok(NcPoly::constant(self.spec.from_bigint(&n), self.rank))
            }
            Some(Tok::Gen(i)) => {
                self.i += 1;
                Ok(NcPoly::var(self.spec, self.rank, i))
            }
            Some(Tok::Sym('(')) => {
                self.i += 1;
                let inner = self.sum()?;
                match self.peek() {
                    Some(Tok::Sym(')')) => {
                        self.i += 1;
                        Ok(inner)
                    }
                    _ => self.err("expected `)`"),
                }
            }
            Some(_) => self.err("expected a number, generator or `(`"),
            None => self.err("unexpected end of input"),
        }
    }
}

/// Parse an expression into canonical form.
pub fn parse(text: &str, spec: FieldSpec, rank: usize) -> Result<NcPoly, ParseError> {
    let toks = lex(text, rank)?;
    let mut p = Parser { toks, i: 0, end: text.chars().count(), spec, rank };
    if p.peek().is_none() {
        return p.err("empty expression");
    }
    let out = p.sum()?;
    if p.i != p.toks.len() {
        return p.err("trailing input");
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn juxtaposition_and_powers() {
        let q = FieldSpec::rationals();
        let a = parse("2*x1*x2^2 + 3", q, 2).unwrap();
        let b = parse("2x1x2x2+3", q, 2).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.num_terms(), 2);
        assert!(!parse("x1*x2 - x2*x1", q, 2).unwrap().is_zero());
    }

    #[test]
    fn errors() {
        let q = FieldSpec::rationals();
        assert_eq!(parse("x3", q, 2), Err(ParseError::BadGenerator { index: 3, rank: 2 }));
        assert!(matches!(parse("x1 +", q, 2), Err(ParseError::Syntax { .. })));
        assert!(matches!(parse("(x1", q, 2), Err(ParseError::Syntax { .. })));
        assert!(matches!(parse("x1/x2", q, 2), Err(ParseError::Syntax { .. })));
        assert!(matches!(parse("1/0", q, 1), Err(ParseError::Syntax { .. })));
    }

    #[test]
    fn rank_one_alias() {
        let f2 = FieldSpec::prime(2).unwrap();
        assert_eq!(parse("t^2+t+1", f2, 1).unwrap(), parse("x1^2+x1+1", f2, 1).unwrap());
    }

    #[test]
    fn print_roundtrip() {
        let q = FieldSpec::rationals();
        for s in ["x1^2 - 1", "-1/2*x2*x1 + x1 + 7", "0", "-x1", "3*x1^2*x2*x1^3"] {
            let p = parse(s, q, 2).unwrap();
            assert_eq!(p.to_string(), s);
            assert_eq!(parse(&p.to_string(), q, 2).unwrap(), p);
        }
    }
}
