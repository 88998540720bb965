//! The free associative algebra over an exact field, in canonical reduced
//! form: a map from words to nonzero coefficients.

mod division;
mod parse;
mod slice;
mod univariate;

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::scalars::{FieldElem, FieldSpec, ScalarError};
use crate::words::Word;

pub use division::{divisors, factor_divides, left_quotient, monic_with_lead, right_quotient, SEARCH_LIMIT};
pub use parse::{parse, ParseError};
pub use slice::DegreeSlice;
pub use univariate::{gcd, is_irreducible, quot_rem, rational_roots, Irreducibility};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PolyError {
    #[error("field or rank mismatch between operands")]
    SpecMismatch,
    #[error("expected rank {expected}, got {got}")]
    RankMismatch { expected: usize, got: usize },
    #[error("operation undefined on the zero polynomial")]
    ZeroPolynomial,
    #[error("zero is not a valid divisor argument")]
    ZeroDivisorArg,
    #[error("element has a nonzero constant term")]
    ConstantTermPresent,
    #[error("generator x{index} outside rank {rank}")]
    BadGenerator { index: u32, rank: usize },
    #[error("search space of {0} candidates exceeds the enumeration limit")]
    SearchTooLarge(u128),
    #[error("unsupported domain: {0}")]
    UnsupportedDomain(String),
    #[error(transparent)]
    Scalar(#[from] ScalarError),
}

/// Shape classes used by the divisor formulas.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Class {
    Zero,
    Unit,
    ScalarMonomial,
    General,
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct NcPoly {
    spec: FieldSpec,
    rank: usize,
    terms: BTreeMap<Word, FieldElem>,
}

/// One entry of the JSON term-map form.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TermJson {
    pub word: Vec<u32>,
    pub coeff: String,
}

impl NcPoly {
    pub fn zero(spec: FieldSpec, rank: usize) -> Self {
        NcPoly { spec, rank, terms: BTreeMap::new() }
    }

    pub fn one(spec: FieldSpec, rank: usize) -> Self {
        Self::constant(spec.one(), rank)
    }

    pub fn constant(c: FieldElem, rank: usize) -> Self {
        Self::monomial(c, Word::empty(), rank)
    }

    pub fn from_i64(spec: FieldSpec, rank: usize, n: i64) -> Self {
        Self::constant(spec.from_i64(n), rank)
    }

    /// The generator `x_i`, 1-based.
    pub fn var(spec: FieldSpec, rank: usize, i: u32) -> Self {
        assert!(i >= 1 && i as usize <= rank, "generator x{i} outside rank {rank}");
        Self::monomial(spec.one(), Word::letter(i), rank)
    }

    pub fn word(spec: FieldSpec, rank: usize, w: Word) -> Self {
        Self::monomial(spec.one(), w, rank)
    }

    pub fn monomial(c: FieldElem, w: Word, rank: usize) -> Self {
        assert!(w.max_letter() as usize <= rank, "word {w} outside rank {rank}");
        let spec = c.spec();
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(w, c);
        }
        NcPoly { spec, rank, terms }
    }

    /// Sum the given terms; repeated words are collected and zeros dropped.
    pub fn from_terms<I>(spec: FieldSpec, rank: usize, terms: I) -> Result<Self, PolyError>
    where
        I: IntoIterator<Item = (Word, FieldElem)>,
    {
        let mut p = NcPoly::zero(spec, rank);
        for (w, c) in terms {
            if c.spec() != spec {
                return Err(PolyError::SpecMismatch);
            }
            let m = w.max_letter();
            if m as usize > rank {
                return Err(PolyError::BadGenerator { index: m, rank });
            }
            p.add_term(w, &c);
        }
        Ok(p)
    }

    fn add_term(&mut self, w: Word, c: &FieldElem) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&w) {
            Some(old) => {
                let s = &*old + c;
                if s.is_zero() {
                    self.terms.remove(&w);
                } else {
                    *old = s;
                }
            }
            None => {
                self.terms.insert(w, c.clone());
            }
        }
    }

    pub fn spec(&self) -> FieldSpec {
        self.spec
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    /// Terms in deglex ascending order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Word, &FieldElem)> + ExactSizeIterator {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coeff(&self, w: &Word) -> FieldElem {
        self.terms.get(w).cloned().unwrap_or_else(|| self.spec.zero())
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.terms.get(&Word::empty()).is_some_and(|c| c.is_one())
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|w| w.is_empty())
    }

    pub fn constant_term(&self) -> FieldElem {
        self.coeff(&Word::empty())
    }

    pub fn degree(&self) -> Option<usize> {
        self.terms.keys().next_back().map(|w| w.len())
    }

    pub fn min_degree(&self) -> Option<usize> {
        self.terms.keys().next().map(|w| w.len())
    }

    /// Largest word under deglex with its coefficient.
    pub fn leading(&self) -> Result<(Word, FieldElem), PolyError> {
        self.terms
            .iter()
            .next_back()
            .map(|(w, c)| (w.clone(), c.clone()))
            .ok_or(PolyError::ZeroPolynomial)
    }

    /// Smallest word under deglex with its coefficient.
    pub fn trailing(&self) -> Result<(Word, FieldElem), PolyError> {
        self.terms
            .iter()
            .next()
            .map(|(w, c)| (w.clone(), c.clone()))
            .ok_or(PolyError::ZeroPolynomial)
    }

    pub fn is_monic(&self) -> bool {
        self.leading().map(|(_, c)| c.is_one()).unwrap_or(false)
    }

    /// Scale so the leading coefficient is 1. Zero stays zero.
    pub fn monic(&self) -> NcPoly {
        match self.leading() {
            Ok((_, c)) => self.scale(&c.inv().expect("leading coefficient is nonzero")),
            Err(_) => self.clone(),
        }
    }

    pub fn homogeneous_part(&self, k: usize) -> NcPoly {
        NcPoly {
            spec: self.spec,
            rank: self.rank,
            terms: self.terms.iter().filter(|(w, _)| w.len() == k).map(|(w, c)| (w.clone(), c.clone())).collect(),
        }
    }

    pub fn without_constant(&self) -> NcPoly {
        let mut p = self.clone();
        p.terms.remove(&Word::empty());
        p
    }

    pub fn classify(&self) -> Class {
        match self.terms.len() {
            0 => Class::Zero,
            1 if self.is_constant() => Class::Unit,
            1 => Class::ScalarMonomial,
            _ => Class::General,
        }
    }

    fn compatible(&self, other: &NcPoly) -> Result<(), PolyError> {
        if self.spec != other.spec || self.rank != other.rank {
            Err(PolyError::SpecMismatch)
        } else {
            Ok(())
        }
    }

    pub fn checked_add(&self, other: &NcPoly) -> Result<NcPoly, PolyError> {
        self.compatible(other)?;
        let mut out = self.clone();
        for (w, c) in &other.terms {
            out.add_term(w.clone(), c);
        }
        Ok(out)
    }

    pub fn checked_sub(&self, other: &NcPoly) -> Result<NcPoly, PolyError> {
        self.compatible(other)?;
        let mut out = self.clone();
        for (w, c) in &other.terms {
            out.add_term(w.clone(), &-c);
        }
        Ok(out)
    }

    pub fn checked_mul(&self, other: &NcPoly) -> Result<NcPoly, PolyError> {
        self.compatible(other)?;
        let mut out = NcPoly::zero(self.spec, self.rank);
        for (u, a) in &self.terms {
            for (v, b) in &other.terms {
                out.add_term(u.concat(v), &(a * b));
            }
        }
        Ok(out)
    }

    pub fn scale(&self, c: &FieldElem) -> NcPoly {
        if c.is_zero() {
            return NcPoly::zero(self.spec, self.rank);
        }
        NcPoly {
            spec: self.spec,
            rank: self.rank,
            terms: self.terms.iter().map(|(w, a)| (w.clone(), a * c)).collect(),
        }
    }

    /// `self · w` for a word `w`.
    pub fn mul_word_right(&self, w: &Word) -> NcPoly {
        NcPoly {
            spec: self.spec,
            rank: self.rank,
            terms: self.terms.iter().map(|(u, a)| (u.concat(w), a.clone())).collect(),
        }
    }

    /// `w · self` for a word `w`.
    pub fn mul_word_left(&self, w: &Word) -> NcPoly {
        NcPoly {
            spec: self.spec,
            rank: self.rank,
            terms: self.terms.iter().map(|(u, a)| (w.concat(u), a.clone())).collect(),
        }
    }

    pub fn pow(&self, k: usize) -> NcPoly {
        let mut acc = NcPoly::one(self.spec, self.rank);
        for _ in 0..k {
            acc = &acc * self;
        }
        acc
    }

    /// Image under the unital endomorphism `x_i ↦ images[i-1]`.
    pub fn substitute(&self, images: &[NcPoly]) -> Result<NcPoly, PolyError> {
        if images.len() != self.rank {
            return Err(PolyError::RankMismatch { expected: self.rank, got: images.len() });
        }
        let Some(first) = images.first() else {
            return Ok(self.clone());
        };
        let (spec, rank) = (first.spec, first.rank);
        if images.iter().any(|v| v.spec != spec || v.rank != rank) || spec != self.spec {
            return Err(PolyError::SpecMismatch);
        }
        let mut out = NcPoly::zero(spec, rank);
        for (w, c) in &self.terms {
            let mut prod = NcPoly::constant(c.clone(), rank);
            for &a in w.letters() {
                prod = &prod * &images[a as usize - 1];
            }
            out = &out + &prod;
        }
        Ok(out)
    }

    /// Drop every term of degree above `max_deg`.
    pub fn truncate(&self, max_deg: usize) -> NcPoly {
        NcPoly {
            spec: self.spec,
            rank: self.rank,
            terms: self.terms.iter().filter(|(w, _)| w.len() <= max_deg).map(|(w, c)| (w.clone(), c.clone())).collect(),
        }
    }

    /// `(self·other)` truncated at `max_deg`, without forming the high terms.
    pub fn mul_truncated(&self, other: &NcPoly, max_deg: usize) -> NcPoly {
        let mut out = NcPoly::zero(self.spec, self.rank);
        for (u, a) in &self.terms {
            for (v, b) in &other.terms {
                if u.len() + v.len() <= max_deg {
                    out.add_term(u.concat(v), &(a * b));
                }
            }
        }
        out
    }

    /// `substitute` truncated at `max_deg`.
    pub fn substitute_truncated(&self, images: &[NcPoly], max_deg: usize) -> Result<NcPoly, PolyError> {
        if images.len() != self.rank {
            return Err(PolyError::RankMismatch { expected: self.rank, got: images.len() });
        }
        let rank = images.first().map_or(self.rank, |v| v.rank);
        let mut out = NcPoly::zero(self.spec, rank);
        for (w, c) in &self.terms {
            let mut prod = NcPoly::constant(c.clone(), rank);
            for &a in w.letters() {
                prod = prod.mul_truncated(&images[a as usize - 1], max_deg);
            }
            out = out.checked_add(&prod)?;
        }
        Ok(out)
    }

    /// Same polynomial viewed in a larger rank.
    pub fn lift_rank(&self, rank: usize) -> NcPoly {
        assert!(rank >= self.rank);
        NcPoly { spec: self.spec, rank, terms: self.terms.clone() }
    }

    pub fn to_json(&self) -> Vec<TermJson> {
        self.terms
            .iter()
            .map(|(w, c)| TermJson { word: w.letters().to_vec(), coeff: c.to_string() })
            .collect()
    }

    pub fn from_json(spec: FieldSpec, rank: usize, terms: &[TermJson]) -> Result<NcPoly, PolyError> {
        let parsed = terms
            .iter()
            .map(|t| Ok((Word::new(t.word.clone()), spec.parse_elem(&t.coeff)?)))
            .collect::<Result<Vec<_>, PolyError>>()?;
        if let Some(bad) = terms.iter().flat_map(|t| t.word.iter()).find(|&&a| a == 0) {
            return Err(PolyError::BadGenerator { index: *bad, rank });
        }
        NcPoly::from_terms(spec, rank, parsed)
    }

    /// Render with a custom generator name, e.g. `t` for the rank-1 ring.
    pub fn display_with<'a>(&'a self, name: &'a dyn Fn(u32) -> String) -> impl fmt::Display + 'a {
        Render { p: self, name }
    }

    /// Decompose an element of the n-th power of the augmentation ideal into
    /// at most rank^n products of n constant-free factors, grouping monomials
    /// by their length-n prefix. `Ok(None)` when some monomial has degree < n.
    pub fn aug_power_decompose(&self, n: usize) -> Result<Option<Vec<Vec<NcPoly>>>, PolyError> {
        if !self.constant_term().is_zero() {
            return Err(PolyError::ConstantTermPresent);
        }
        if self.min_degree().is_some_and(|m| m < n) {
            return Ok(None);
        }
        if n == 0 {
            return Ok(Some(if self.is_zero() { vec![] } else { vec![vec![self.clone()]] }));
        }
        // group by the length-n prefix; the last factor keeps its letter and
        // the tails of every monomial in the group
        let mut groups: BTreeMap<Word, NcPoly> = BTreeMap::new();
        for (w, c) in &self.terms {
            let rest = w.slice(n - 1, w.len());
            let key = w.slice(0, n);
            groups
                .entry(key)
                .or_insert_with(|| NcPoly::zero(self.spec, self.rank))
                .add_term(rest, c);
        }
        let mut out = Vec::new();
        for (key, last) in groups {
            let mut factors: Vec<NcPoly> =
                key.letters()[..n - 1].iter().map(|&a| NcPoly::var(self.spec, self.rank, a)).collect();
            factors.push(last);
            out.push(factors);
        }
        Ok(Some(out))
    }
}

/// Multiply out a list of factors.
pub fn product(factors: &[NcPoly], spec: FieldSpec, rank: usize) -> NcPoly {
    factors.iter().fold(NcPoly::one(spec, rank), |acc, f| &acc * f)
}

impl Add for &NcPoly {
    type Output = NcPoly;
    fn add(self, rhs: &NcPoly) -> NcPoly {
        self.checked_add(rhs).expect("operands from different rings")
    }
}

impl Sub for &NcPoly {
    type Output = NcPoly;
    fn sub(self, rhs: &NcPoly) -> NcPoly {
        self.checked_sub(rhs).expect("operands from different rings")
    }
}

impl Mul for &NcPoly {
    type Output = NcPoly;
    fn mul(self, rhs: &NcPoly) -> NcPoly {
        self.checked_mul(rhs).expect("operands from different rings")
    }
}

impl Neg for &NcPoly {
    type Output = NcPoly;
    fn neg(self) -> NcPoly {
        NcPoly {
            spec: self.spec,
            rank: self.rank,
            terms: self.terms.iter().map(|(w, c)| (w.clone(), -c)).collect(),
        }
    }
}

struct Render<'a> {
    p: &'a NcPoly,
    name: &'a dyn Fn(u32) -> String,
}

fn fmt_word(w: &Word, name: &dyn Fn(u32) -> String) -> String {
    let mut parts = Vec::new();
    let l = w.letters();
    let mut i = 0;
    while i < l.len() {
        let mut j = i;
        while j < l.len() && l[j] == l[i] {
            j += 1;
        }
        let run = j - i;
        if run == 1 {
            parts.push(name(l[i]));
        } else {
            parts.push(format!("{}^{}", name(l[i]), run));
        }
        i = j;
    }
    parts.join("*")
}

impl fmt::Display for Render<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.p.is_zero() {
            return write!(f, "0");
        }
        for (k, (w, c)) in self.p.terms.iter().rev().enumerate() {
            let negative = c.as_rational().is_some_and(|q| q < &num_rational::BigRational::from_integer(0.into()));
            let mag = if negative { -c } else { c.clone() };
            if k == 0 {
                if negative {
                    write!(f, "-")?;
                }
            } else if negative {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            if w.is_empty() {
                write!(f, "{mag}")?;
            } else if mag.is_one() {
                write!(f, "{}", fmt_word(w, self.name))?;
            } else {
                write!(f, "{mag}*{}", fmt_word(w, self.name))?;
            }
        }
        Ok(())
    }
}

fn default_name(i: u32) -> String {
    format!("x{i}")
}

impl fmt::Display for NcPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", Render { p: self, name: &default_name })
    }
}

impl fmt::Debug for NcPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "NcPoly[{}; rank {}]({self})", self.spec, self.rank)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q2(s: &str) -> NcPoly {
        parse(s, FieldSpec::rationals(), 2).unwrap()
    }

    #[test]
    fn products() {
        assert_ne!(&q2("x1") * &q2("x2"), &q2("x2") * &q2("x1"));
        assert_eq!(&q2("x1 + 1") * &q2("x1 - 1"), q2("x1^2 - 1"));
        let f = q2("3x1x2 - x2 + 4");
        assert!((&f + &-&f).is_zero());
    }

    #[test]
    fn classes() {
        assert_eq!(q2("3").classify(), Class::Unit);
        assert_eq!(q2("2x1x2").classify(), Class::ScalarMonomial);
        assert_eq!(q2("x1 + x2").classify(), Class::General);
        assert_eq!(q2("0").classify(), Class::Zero);
    }

    #[test]
    fn leading_terms() {
        let q = FieldSpec::rationals();
        assert_eq!(q2("x1 + x2^2").leading().unwrap(), (Word::new(vec![2, 2]), q.one()));
        assert_eq!(q2("3x1x2 + 2x2x1").leading().unwrap(), (Word::new(vec![2, 1]), q.from_i64(2)));
        assert_eq!(q2("5").leading().unwrap(), (Word::empty(), q.from_i64(5)));
        assert_eq!(q2("0").leading(), Err(PolyError::ZeroPolynomial));
    }

    #[test]
    fn substitution() {
        assert_eq!(q2("x1x2").substitute(&[q2("x2"), q2("x1")]).unwrap(), q2("x2x1"));
        assert_eq!(q2("x1").substitute(&[q2("x1 + x2^2"), q2("x2")]).unwrap(), q2("x1 + x2^2"));
        assert_eq!(q2("x1^2").substitute(&[q2("x1 + 1"), q2("x2")]).unwrap(), q2("x1^2 + 2x1 + 1"));
        assert!(matches!(q2("x1").substitute(&[q2("x1")]), Err(PolyError::RankMismatch { .. })));
    }

    #[test]
    fn width_grouping() {
        let f = q2("x1x2 + x2x1x1");
        let parts = f.aug_power_decompose(2).unwrap().unwrap();
        let shown: Vec<Vec<String>> =
            parts.iter().map(|fs| fs.iter().map(|p| p.to_string()).collect()).collect();
        assert_eq!(shown, vec![vec!["x1", "x2"], vec!["x2", "x1^2"]]);
        assert_eq!(q2("x1").aug_power_decompose(2).unwrap(), None);
        assert_eq!(q2("0").aug_power_decompose(3).unwrap(), Some(vec![]));
        assert_eq!(q2("x1 + 1").aug_power_decompose(1), Err(PolyError::ConstantTermPresent));
    }

    #[test]
    fn json_roundtrip() {
        let f = q2("-1/2x1x2 + 3");
        let j = serde_json::to_string(&f.to_json()).unwrap();
        assert_eq!(j, r#"[{"word":[],"coeff":"3"},{"word":[1,2],"coeff":"-1/2"}]"#);
        let back: Vec<TermJson> = serde_json::from_str(&j).unwrap();
        assert_eq!(NcPoly::from_json(FieldSpec::rationals(), 2, &back).unwrap(), f);
    }
}
