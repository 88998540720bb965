//! Natural-number codings of pairs, tuples and tuples of tuples, plus the
//! rectangular index used to lay out products of tuple pairs.
//!
//! Tuples are coded as `pair(len, body)` with `body(()) = 0`,
//! `body((a)) = a` and `body((a, rest…)) = pair(a, body(rest))`.

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CodeError {
    #[error("index {index} out of range 1..={len}")]
    IndexOutOfRange { index: usize, len: usize },
    #[error("{0} is not a tuple code")]
    NotACode(BigUint),
}

pub fn cantor_pair(x: &BigUint, y: &BigUint) -> BigUint {
    let s = x + y;
    (&s * (&s + 1u32)) / 2u32 + y
}

pub fn cantor_unpair(z: &BigUint) -> (BigUint, BigUint) {
    // w = floor((sqrt(8z + 1) - 1) / 2)
    let w = ((z * 8u32 + 1u32).sqrt() - 1u32) / 2u32;
    let t = (&w * (&w + 1u32)) / 2u32;
    let y = z - t;
    let x = w - &y;
    (x, y)
}

fn big(n: u64) -> BigUint {
    BigUint::from(n)
}

pub fn tuple_code(s: &[BigUint]) -> BigUint {
    let body = match s.split_last() {
        None => BigUint::zero(),
        Some((last, init)) => init.iter().rev().fold(last.clone(), |acc, a| cantor_pair(a, &acc)),
    };
    cantor_pair(&big(s.len() as u64), &body)
}

pub fn tuple_code_u64(s: &[u64]) -> BigUint {
    let v: Vec<BigUint> = s.iter().map(|&a| big(a)).collect();
    tuple_code(&v)
}

pub fn length_code(c: &BigUint) -> Result<usize, CodeError> {
    let (len, body) = cantor_unpair(c);
    let len = len.to_usize().ok_or_else(|| CodeError::NotACode(c.clone()))?;
    if len == 0 && !body.is_zero() {
        return Err(CodeError::NotACode(c.clone()));
    }
    Ok(len)
}

/// The `i`-th entry (1-based) without decoding the whole tuple.
pub fn component_code(c: &BigUint, i: usize) -> Result<BigUint, CodeError> {
    let len = length_code(c)?;
    if i == 0 || i > len {
        return Err(CodeError::IndexOutOfRange { index: i, len });
    }
    let (_, mut body) = cantor_unpair(c);
    for _ in 1..i {
        body = cantor_unpair(&body).1;
    }
    if i < len {
        Ok(cantor_unpair(&body).0)
    } else {
        Ok(body)
    }
}

pub fn decode_tuple(c: &BigUint) -> Result<Vec<BigUint>, CodeError> {
    let len = length_code(c)?;
    let (_, mut body) = cantor_unpair(c);
    let mut out = Vec::with_capacity(len);
    for i in 0..len {
        if i + 1 == len {
            out.push(body.clone());
        } else {
            let (a, rest) = cantor_unpair(&body);
            out.push(a);
            body = rest;
        }
    }
    Ok(out)
}

pub fn concat_code(a: &BigUint, b: &BigUint) -> Result<BigUint, CodeError> {
    let mut s = decode_tuple(a)?;
    s.extend(decode_tuple(b)?);
    Ok(tuple_code(&s))
}

/// Component of the two-level layer: a natural or a tuple of naturals.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Nested {
    Atom(BigUint),
    Tuple(Vec<BigUint>),
}

fn tag(item: &Nested) -> BigUint {
    match item {
        Nested::Atom(a) => a * 2u32,
        Nested::Tuple(t) => tuple_code(t) * 2u32 + 1u32,
    }
}

fn untag(c: &BigUint) -> Result<Nested, CodeError> {
    let half = c >> 1u32;
    if (c & BigUint::one()).is_zero() {
        Ok(Nested::Atom(half))
    } else {
        Ok(Nested::Tuple(decode_tuple(&half)?))
    }
}

pub fn nested_tuple_code(s: &[Nested]) -> BigUint {
    let tagged: Vec<BigUint> = s.iter().map(tag).collect();
    tuple_code(&tagged)
}

pub fn decode_nested(c: &BigUint) -> Result<Vec<Nested>, CodeError> {
    decode_tuple(c)?.iter().map(untag).collect()
}

pub fn nested_length(c: &BigUint) -> Result<usize, CodeError> {
    length_code(c)
}

pub fn nested_component(c: &BigUint, i: usize) -> Result<Nested, CodeError> {
    untag(&component_code(c, i)?)
}

/// Row-major bijection `{1..p}×{1..q} → {1..pq}`.
pub fn rect_index(p: usize, q: usize, x: usize, y: usize) -> Result<usize, CodeError> {
    if x == 0 || x > p {
        return Err(CodeError::IndexOutOfRange { index: x, len: p });
    }
    if y == 0 || y > q {
        return Err(CodeError::IndexOutOfRange { index: y, len: q });
    }
    Ok((x - 1) * q + y)
}

pub fn rect_unindex(p: usize, q: usize, r: usize) -> Result<(usize, usize), CodeError> {
    if r == 0 || r > p * q {
        return Err(CodeError::IndexOutOfRange { index: r, len: p * q });
    }
    Ok(((r - 1) / q + 1, (r - 1) % q + 1))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn b(n: u64) -> BigUint {
        BigUint::from(n)
    }

    #[test]
    fn pairing() {
        assert_eq!(cantor_pair(&b(0), &b(0)), b(0));
        assert_eq!(cantor_pair(&b(1), &b(0)), b(1));
        assert_eq!(cantor_pair(&b(0), &b(1)), b(2));
        assert_eq!(cantor_unpair(&cantor_pair(&b(7), &b(11))), (b(7), b(11)));
        for z in 0..500u64 {
            let (x, y) = cantor_unpair(&b(z));
            assert_eq!(cantor_pair(&x, &y), b(z));
        }
    }

    #[test]
    fn tuples() {
        assert_eq!(length_code(&tuple_code(&[])).unwrap(), 0);
        assert_eq!(tuple_code(&[]), b(0));
        let c = tuple_code_u64(&[4, 9]);
        assert_eq!(component_code(&c, 2).unwrap(), b(9));
        assert_eq!(component_code(&c, 1).unwrap(), b(4));
        assert_eq!(component_code(&c, 3), Err(CodeError::IndexOutOfRange { index: 3, len: 2 }));
        assert_eq!(
            concat_code(&tuple_code_u64(&[1]), &tuple_code_u64(&[2, 3])).unwrap(),
            tuple_code_u64(&[1, 2, 3])
        );
        assert!(length_code(&cantor_pair(&b(0), &b(5))).is_err());
    }

    #[test]
    fn nested() {
        let s = vec![Nested::Tuple(vec![b(1), b(2)]), Nested::Atom(b(3))];
        assert_eq!(decode_nested(&nested_tuple_code(&s)).unwrap(), s);
        let s3 = vec![Nested::Tuple(vec![b(1)]), Nested::Tuple(vec![b(2)]), Nested::Tuple(vec![b(3)])];
        assert_eq!(nested_length(&nested_tuple_code(&s3)).unwrap(), 3);
        let pairs = vec![Nested::Tuple(vec![b(1), b(2)]), Nested::Tuple(vec![b(3), b(4)])];
        let c = nested_tuple_code(&pairs);
        assert_eq!(nested_component(&c, 1).unwrap(), Nested::Tuple(vec![b(1), b(2)]));
    }

    #[test]
    fn rectangle() {
        assert_eq!(rect_index(2, 3, 1, 1).unwrap(), 1);
        assert_eq!(rect_index(2, 3, 2, 3).unwrap(), 6);
        assert_eq!(rect_index(2, 3, 1, 3).unwrap(), 3);
        assert_eq!(rect_unindex(2, 3, 4).unwrap(), (2, 1));
        assert!(rect_index(2, 3, 3, 1).is_err());
    }
}
