//! Exact coefficient fields: the rationals and prime fields 𝔽_p.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ScalarError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("field mismatch: {0} vs {1}")]
    SpecMismatch(FieldSpec, FieldSpec),
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("cannot parse scalar or field from {0:?}")]
    Parse(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
enum Kind {
    Rationals,
    Prime(u64),
}

/// Which field coefficients live in. Construct prime fields through
/// [`FieldSpec::prime`] so the modulus is always checked.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FieldSpec(Kind);

pub fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    if p < 4 {
        return true;
    }
    if p.is_multiple_of(2) {
        return false;
    }
    let mut d = 3u64;
    while d.saturating_mul(d) <= p {
        if p.is_multiple_of(d) {
            return false;
        }
        d += 2;
    }
    true
}

impl FieldSpec {
    pub const fn rationals() -> Self {
        FieldSpec(Kind::Rationals)
    }

    pub fn prime(p: u64) -> Result<Self, ScalarError> {
        // keep products inside u128 comfortably
        if !is_prime(p) || p > u32::MAX as u64 {
            return Err(ScalarError::NotPrime(p));
        }
        Ok(FieldSpec(Kind::Prime(p)))
    }

    pub fn modulus(&self) -> Option<u64> {
        match self.0 {
            Kind::Rationals => None,
            Kind::Prime(p) => Some(p),
        }
    }

    pub fn is_finite(&self) -> bool {
        self.modulus().is_some()
    }

    pub fn characteristic(&self) -> u64 {
        self.modulus().unwrap_or(0)
    }

    pub fn zero(&self) -> FieldElem {
        match self.0 {
            Kind::Rationals => FieldElem::from_value(*self, Value::Q(BigRational::zero())),
            Kind::Prime(_) => FieldElem::from_value(*self, Value::P(0)),
        }
    }

    pub fn one(&self) -> FieldElem {
        self.from_i64(1)
    }

    pub fn from_i64(&self, n: i64) -> FieldElem {
        self.from_bigint(&BigInt::from(n))
    }

    pub fn from_bigint(&self, n: &BigInt) -> FieldElem {
        match self.0 {
            Kind::Rationals => FieldElem::from_value(*self, Value::Q(BigRational::from_integer(n.clone()))),
            Kind::Prime(p) => {
                let r = n.mod_floor_u64(p);
                FieldElem::from_value(*self, Value::P(r))
            }
        }
    }

    /// Build `num/den` in this field.
    pub fn fraction(&self, num: &BigInt, den: &BigInt) -> Result<FieldElem, ScalarError> {
        if den.is_zero() {
            return Err(ScalarError::DivisionByZero);
        }
        match self.0 {
            Kind::Rationals => Ok(FieldElem::from_value(
                *self,
                Value::Q(BigRational::new(num.clone(), den.clone())),
            )),
            Kind::Prime(_) => {
                let d = self.from_bigint(den);
                let n = self.from_bigint(num);
                Ok(n.mul(&d.inv()?))
            }
        }
    }

    /// Every field element, for finite fields only, in residue order.
    pub fn elements(&self) -> Option<Vec<FieldElem>> {
        let p = self.modulus()?;
        Some((0..p).map(|r| FieldElem::from_value(*self, Value::P(r))).collect())
    }

    /// Parse a scalar literal: an integer or `a/b`.
    pub fn parse_elem(&self, s: &str) -> Result<FieldElem, ScalarError> {
        let s = s.trim();
        let bad = || ScalarError::Parse(s.to_string());
        match s.split_once('/') {
            Some((a, b)) => {
                let a: BigInt = a.trim().parse().map_err(|_| bad())?;
                let b: BigInt = b.trim().parse().map_err(|_| bad())?;
                self.fraction(&a, &b)
            }
            None => {
                let a: BigInt = s.parse().map_err(|_| bad())?;
                Ok(self.from_bigint(&a))
            }
        }
    }
}

impl fmt::Display for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.0 {
            Kind::Rationals => write!(f, "q"),
            Kind::Prime(p) => write!(f, "fp:{p}"),
        }
    }
}

impl FromStr for FieldSpec {
    type Err = ScalarError;

    /// Accepts `q` or `fp:<p>`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let t = s.trim().to_ascii_lowercase();
        if t == "q" {
            return Ok(FieldSpec::rationals());
        }
        if let Some(p) = t.strip_prefix("fp:") {
            let p: u64 = p.parse().map_err(|_| ScalarError::Parse(s.to_string()))?;
            return FieldSpec::prime(p);
        }
        Err(ScalarError::Parse(s.to_string()))
    }
}

trait ModFloor {
    fn mod_floor_u64(&self, p: u64) -> u64;
}

impl ModFloor for BigInt {
    fn mod_floor_u64(&self, p: u64) -> u64 {
        let m = BigInt::from(p);
        let mut r = self % &m;
        if r.is_negative() {
            r += &m;
        }
        r.to_u64().expect("residue fits u64")
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
enum Value {
    Q(BigRational),
    P(u64),
}

/// A canonical field element: reduced fraction with positive denominator,
/// or a residue in `[0, p)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FieldElem {
    spec: FieldSpec,
    value: Value,
}

fn pow_mod(mut b: u64, mut e: u64, p: u64) -> u64 {
    let mut acc = 1u64;
    b %= p;
    while e > 0 {
        if e & 1 == 1 {
            acc = ((acc as u128 * b as u128) % p as u128) as u64;
        }
        b = ((b as u128 * b as u128) % p as u128) as u64;
        e >>= 1;
    }
    acc
}

/// Inverse of `a` modulo `p` by the extended Euclidean algorithm.
fn inv_mod(a: u64, p: u64) -> Option<u64> {
    let (mut r0, mut r1) = (p as i128, a as i128);
    let (mut t0, mut t1) = (0i128, 1i128);
    while r1 != 0 {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (t0, t1) = (t1, t0 - q * t1);
    }
    if r0 != 1 {
        return None;
    }
    Some(t0.rem_euclid(p as i128) as u64)
}

impl FieldElem {
    fn from_value(spec: FieldSpec, value: Value) -> Self {
        FieldElem { spec, value }
    }

    pub fn spec(&self) -> FieldSpec {
        self.spec
    }

    pub fn is_zero(&self) -> bool {
        match &self.value {
            Value::Q(q) => q.is_zero(),
            Value::P(r) => *r == 0,
        }
    }

    pub fn is_one(&self) -> bool {
        match &self.value {
            Value::Q(q) => q.is_one(),
            Value::P(r) => *r == 1,
        }
    }

    /// Residue for prime fields.
    pub fn residue(&self) -> Option<u64> {
        match &self.value {
            Value::P(r) => Some(*r),
            Value::Q(_) => None,
        }
    }

    pub fn as_rational(&self) -> Option<&BigRational> {
        match &self.value {
            Value::Q(q) => Some(q),
            Value::P(_) => None,
        }
    }

    /// True when the element is an integer (always true over 𝔽_p).
    pub fn is_integral(&self) -> bool {
        match &self.value {
            Value::Q(q) => q.is_integer(),
            Value::P(_) => true,
        }
    }

    /// Rebuild the canonical representative. Identity on every value this
    /// module hands out.
    pub fn canonical(&self) -> FieldElem {
        match &self.value {
            Value::Q(q) => FieldElem::from_value(self.spec, Value::Q(BigRational::new(q.numer().clone(), q.denom().clone()))),
            Value::P(r) => FieldElem::from_value(self.spec, Value::P(r % self.spec.characteristic())),
        }
    }

    fn check(&self, other: &FieldElem) -> Result<(), ScalarError> {
        if self.spec != other.spec {
            Err(ScalarError::SpecMismatch(self.spec, other.spec))
        } else {
            Ok(())
        }
    }

    pub fn checked_add(&self, other: &FieldElem) -> Result<FieldElem, ScalarError> {
        self.check(other)?;
        Ok(self.add_same(other))
    }

    pub fn checked_sub(&self, other: &FieldElem) -> Result<FieldElem, ScalarError> {
        self.check(other)?;
        Ok(self.add_same(&other.neg_same()))
    }

    pub fn checked_mul(&self, other: &FieldElem) -> Result<FieldElem, ScalarError> {
        self.check(other)?;
        Ok(self.mul_same(other))
    }

    pub fn checked_div(&self, other: &FieldElem) -> Result<FieldElem, ScalarError> {
        self.check(other)?;
        Ok(self.mul_same(&other.inv()?))
    }

    pub fn inv(&self) -> Result<FieldElem, ScalarError> {
        if self.is_zero() {
            return Err(ScalarError::DivisionByZero);
        }
        let v = match &self.value {
            Value::Q(q) => Value::Q(q.recip()),
            Value::P(r) => {
                let p = self.spec.characteristic();
                Value::P(inv_mod(*r, p).expect("nonzero residue mod a prime"))
            }
        };
        Ok(FieldElem::from_value(self.spec, v))
    }

    pub fn pow(&self, e: u64) -> FieldElem {
        match &self.value {
            Value::Q(q) => {
                let mut acc = BigRational::one();
                for _ in 0..e {
                    acc *= q;
                }
                FieldElem::from_value(self.spec, Value::Q(acc))
            }
            Value::P(r) => FieldElem::from_value(self.spec, Value::P(pow_mod(*r, e, self.spec.characteristic()))),
        }
    }

    fn add_same(&self, other: &FieldElem) -> FieldElem {
        let v = match (&self.value, &other.value) {
            (Value::Q(a), Value::Q(b)) => Value::Q(a + b),
            (Value::P(a), Value::P(b)) => Value::P((a + b) % self.spec.characteristic()),
            _ => unreachable!("values agree with their spec"),
        };
        FieldElem::from_value(self.spec, v)
    }

    fn mul_same(&self, other: &FieldElem) -> FieldElem {
        let v = match (&self.value, &other.value) {
            (Value::Q(a), Value::Q(b)) => Value::Q(a * b),
            (Value::P(a), Value::P(b)) => {
                let p = self.spec.characteristic() as u128;
                Value::P(((*a as u128 * *b as u128) % p) as u64)
            }
            _ => unreachable!("values agree with their spec"),
        };
        FieldElem::from_value(self.spec, v)
    }

    fn neg_same(&self) -> FieldElem {
        let v = match &self.value {
            Value::Q(a) => Value::Q(-a),
            Value::P(0) => Value::P(0),
            Value::P(a) => Value::P(self.spec.characteristic() - a),
        };
        FieldElem::from_value(self.spec, v)
    }
}

/// Operator forms panic on mixed fields; use the `checked_*` methods where
/// the fields are not already known to agree.
impl Add for &FieldElem {
    type Output = FieldElem;
    fn add(self, rhs: &FieldElem) -> FieldElem {
        self.checked_add(rhs).expect("field mismatch")
    }
}

impl Sub for &FieldElem {
    type Output = FieldElem;
    fn sub(self, rhs: &FieldElem) -> FieldElem {
        self.checked_sub(rhs).expect("field mismatch")
    }
}

impl Mul for &FieldElem {
    type Output = FieldElem;
    fn mul(self, rhs: &FieldElem) -> FieldElem {
        self.checked_mul(rhs).expect("field mismatch")
    }
}

impl Neg for &FieldElem {
    type Output = FieldElem;
    fn neg(self) -> FieldElem {
        self.neg_same()
    }
}

impl fmt::Display for FieldElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.value {
            Value::Q(q) if q.is_integer() => write!(f, "{}", q.numer()),
            Value::Q(q) => write!(f, "{}/{}", q.numer(), q.denom()),
            Value::P(r) => write!(f, "{r}"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f5() -> FieldSpec {
        FieldSpec::prime(5).unwrap()
    }

    #[test]
    fn inverse_of_two_mod_five() {
        assert_eq!(f5().from_i64(2).inv().unwrap(), f5().from_i64(3));
        assert_eq!(f5().one().inv().unwrap(), f5().one());
        assert_eq!(f5().zero().inv(), Err(ScalarError::DivisionByZero));
    }

    #[test]
    fn small_products() {
        assert_eq!(&f5().from_i64(3) * &f5().from_i64(4), f5().from_i64(2));
        let q = FieldSpec::rationals();
        let a = q.parse_elem("2/3").unwrap();
        let b = q.parse_elem("1/3").unwrap();
        assert!((&a + &b).is_one());
        assert!(matches!(
            f5().one().checked_add(&q.one()),
            Err(ScalarError::SpecMismatch(_, _))
        ));
    }

    #[test]
    fn parse_and_print() {
        let q = FieldSpec::rationals();
        assert_eq!(q.parse_elem("-6/4").unwrap().to_string(), "-3/2");
        assert_eq!(f5().parse_elem("1/2").unwrap().to_string(), "3");
        assert_eq!(f5().parse_elem("-1").unwrap().to_string(), "4");
        assert_eq!("fp:7".parse::<FieldSpec>().unwrap().modulus(), Some(7));
        assert!("fp:8".parse::<FieldSpec>().is_err());
        assert_eq!("q".parse::<FieldSpec>().unwrap(), q);
    }

    #[test]
    fn primality() {
        let primes: Vec<u64> = (0..30).filter(|&n| is_prime(n)).collect();
        assert_eq!(primes, vec![2, 3, 5, 7, 11, 13, 17, 19, 23, 29]);
    }
}
