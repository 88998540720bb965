//! Polynomials as pairs (coefficient tuple, tuple of monomial tuples) inside
//! the list superstructure over K and ℕ, with the reduced-form algorithm, the
//! equivalence ∼ and the tuple operations ⊕, ⊙. Also the coding of finite
//! sequences of scalars by pairs `(Σ αᵢ tⁱ, tⁿ)` in K[t].

use std::collections::HashMap;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::arithmetization::rect_index;
use crate::ncpoly::{NcPoly, PolyError};
use crate::scalars::{FieldElem, FieldSpec, ScalarError};
use crate::words::Word;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PairError {
    #[error("monomial entry {entry} exceeds rank {rank}")]
    BadIndex { entry: u32, rank: usize },
    #[error("coefficient and monomial tuples differ in length ({0} vs {1})")]
    LengthMismatch(usize, usize),
    #[error("malformed sequence pair: {0}")]
    MalformedPair(String),
    #[error("sort error: {0}")]
    SortError(String),
    #[error(transparent)]
    Scalar(#[from] ScalarError),
    #[error(transparent)]
    Poly(#[from] PolyError),
}

/// A value of the three-sorted superstructure.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SkNValue {
    Field(FieldElem),
    List(Vec<FieldElem>),
    Nat(u64),
}

impl SkNValue {
    /// `l(s)`.
    pub fn length(&self) -> Result<SkNValue, PairError> {
        match self {
            SkNValue::List(s) => Ok(SkNValue::Nat(s.len() as u64)),
            _ => Err(PairError::SortError("l expects a list".into())),
        }
    }

    /// `t(s, i, a)`: the i-th entry of s is a, for 1 ≤ i ≤ l(s).
    pub fn component_is(&self, i: &SkNValue, a: &SkNValue) -> Result<bool, PairError> {
        match (self, i, a) {
            (SkNValue::List(s), SkNValue::Nat(i), SkNValue::Field(a)) => {
                let i = *i as usize;
                Ok(i >= 1 && i <= s.len() && &s[i - 1] == a)
            }
            _ => Err(PairError::SortError("t expects (list, nat, field)".into())),
        }
    }

    /// `s ⌢ r`.
    pub fn concat(&self, other: &SkNValue) -> Result<SkNValue, PairError> {
        match (self, other) {
            (SkNValue::List(a), SkNValue::List(b)) => Ok(SkNValue::List(a.iter().chain(b).cloned().collect())),
            _ => Err(PairError::SortError("concatenation expects two lists".into())),
        }
    }
}

/// The pair (ᾱ, t̄). The zero element is `((0), (ε))`: the empty monomial
/// tuple plays the role of the code 0.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TuplePair {
    spec: FieldSpec,
    coeffs: Vec<FieldElem>,
    mons: Vec<Vec<u32>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TuplePairJson {
    pub coeffs: Vec<String>,
    pub mons: Vec<Vec<u32>>,
}

impl TuplePair {
    pub fn new(spec: FieldSpec, coeffs: Vec<FieldElem>, mons: Vec<Vec<u32>>) -> Result<Self, PairError> {
        if coeffs.len() != mons.len() {
            return Err(PairError::LengthMismatch(coeffs.len(), mons.len()));
        }
        if let Some(c) = coeffs.iter().find(|c| c.spec() != spec) {
            return Err(ScalarError::SpecMismatch(spec, c.spec()).into());
        }
        Ok(TuplePair { spec, coeffs, mons })
    }

    pub fn zero(spec: FieldSpec) -> Self {
        TuplePair { spec, coeffs: vec![spec.zero()], mons: vec![vec![]] }
    }

    pub fn spec(&self) -> FieldSpec {
        self.spec
    }

    pub fn coeffs(&self) -> &[FieldElem] {
        &self.coeffs
    }

    pub fn mons(&self) -> &[Vec<u32>] {
        &self.mons
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_zero_pair(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs[0].is_zero() && self.mons[0].is_empty()
    }

    /// Nonzero coefficients and pairwise distinct monomials, or the zero pair.
    pub fn is_reduced(&self) -> bool {
        if self.is_zero_pair() {
            return true;
        }
        let mut seen = std::collections::HashSet::new();
        !self.is_empty() && self.coeffs.iter().all(|c| !c.is_zero()) && self.mons.iter().all(|m| seen.insert(m))
    }

    pub fn to_json(&self) -> TuplePairJson {
        TuplePairJson { coeffs: self.coeffs.iter().map(|c| c.to_string()).collect(), mons: self.mons.clone() }
    }

    pub fn from_json(spec: FieldSpec, j: &TuplePairJson) -> Result<Self, PairError> {
        let coeffs = j.coeffs.iter().map(|s| spec.parse_elem(s)).collect::<Result<Vec<_>, _>>()?;
        TuplePair::new(spec, coeffs, j.mons.clone())
    }
}

impl fmt::Display for TuplePair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cs: Vec<String> = self.coeffs.iter().map(|c| c.to_string()).collect();
        let ms: Vec<String> = self
            .mons
            .iter()
            .map(|m| {
                if m.is_empty() {
                    "ε".to_string()
                } else {
                    let parts: Vec<String> = m.iter().map(|a| a.to_string()).collect();
                    format!("({})", parts.join(","))
                }
            })
            .collect();
        write!(f, "(({}), ({}))", cs.join(", "), ms.join(", "))
    }
}

/// Encode with entries in deglex-ascending order.
pub fn encode_poly(f: &NcPoly) -> TuplePair {
    if f.is_zero() {
        return TuplePair::zero(f.spec());
    }
    let (coeffs, mons) = f.terms().map(|(w, c)| (c.clone(), w.letters().to_vec())).unzip();
    TuplePair { spec: f.spec(), coeffs, mons }
}

/// `Σ αᵢ M_{tᵢ}`; total on unreduced pairs.
pub fn decode_pair(q: &TuplePair, rank: usize) -> Result<NcPoly, PairError> {
    for m in &q.mons {
        if let Some(&bad) = m.iter().find(|&&a| a == 0 || a as usize > rank) {
            return Err(PairError::BadIndex { entry: bad, rank });
        }
    }
    let terms = q.coeffs.iter().cloned().zip(q.mons.iter().map(|m| Word::new(m.clone()))).map(|(c, w)| (w, c));
    Ok(NcPoly::from_terms(q.spec, rank, terms)?)
}

/// Collect similar terms: monomials in order of first occurrence,
/// coefficients summed, zero entries dropped, all-zero input collapses to
/// the zero pair.
pub fn red(q: &TuplePair) -> TuplePair {
    let mut order: Vec<Vec<u32>> = Vec::new();
    let mut sums: HashMap<Vec<u32>, FieldElem> = HashMap::new();
    for (c, m) in q.coeffs.iter().zip(&q.mons) {
        match sums.get_mut(m) {
            Some(s) => *s = &*s + c,
            None => {
                order.push(m.clone());
                sums.insert(m.clone(), c.clone());
            }
        }
    }
    let mut coeffs = Vec::new();
    let mut mons = Vec::new();
    for m in order {
        let c = sums.remove(&m).expect("collected");
        if !c.is_zero() {
            coeffs.push(c);
            mons.push(m);
        }
    }
    if coeffs.is_empty() {
        return TuplePair::zero(q.spec);
    }
    TuplePair { spec: q.spec, coeffs, mons }
}

/// `q1 ∼ q2`: the reduced forms agree up to a permutation of entries.
pub fn pair_equiv(q1: &TuplePair, q2: &TuplePair) -> bool {
    if q1.spec != q2.spec {
        return false;
    }
    let (a, b) = (red(q1), red(q2));
    if a.len() != b.len() {
        return false;
    }
    // every entry of a matches a distinct entry of b; monomials are distinct
    // inside a reduced pair, so a lookup by monomial is a matching
    let lookup: HashMap<&Vec<u32>, &FieldElem> = b.mons.iter().zip(&b.coeffs).collect();
    a.mons.iter().zip(&a.coeffs).all(|(m, c)| lookup.get(m) == Some(&c))
}

/// `(a₁ ⌢ a₂, s₁ ⌢ s₂)`.
pub fn oplus(q1: &TuplePair, q2: &TuplePair) -> Result<TuplePair, PairError> {
    if q1.spec != q2.spec {
        return Err(ScalarError::SpecMismatch(q1.spec, q2.spec).into());
    }
    let coeffs = q1.coeffs.iter().chain(&q2.coeffs).cloned().collect();
    let mons = q1.mons.iter().chain(&q2.mons).cloned().collect();
    Ok(TuplePair { spec: q1.spec, coeffs, mons })
}

/// Product pair of length `ℓ(q1)·ℓ(q2)`; entry `rect_index(p, q, x, y)` holds
/// `a_x b_y` and the concatenated monomial `s_x ⌢ t_y`.
pub fn odot(q1: &TuplePair, q2: &TuplePair) -> Result<TuplePair, PairError> {
    if q1.spec != q2.spec {
        return Err(ScalarError::SpecMismatch(q1.spec, q2.spec).into());
    }
    let (p, q) = (q1.len(), q2.len());
    let mut coeffs = vec![q1.spec.zero(); p * q];
    let mut mons = vec![Vec::new(); p * q];
    for x in 1..=p {
        for y in 1..=q {
            let r = rect_index(p, q, x, y).expect("indices in range") - 1;
            coeffs[r] = &q1.coeffs[x - 1] * &q2.coeffs[y - 1];
            mons[r] = q1.mons[x - 1].iter().chain(&q2.mons[y - 1]).copied().collect();
        }
    }
    Ok(TuplePair { spec: q1.spec, coeffs, mons })
}

fn t_power(spec: FieldSpec, n: usize) -> NcPoly {
    NcPoly::word(spec, 1, Word::new(vec![1; n]))
}

/// `(α₀, …, αₙ) ↦ (Σ αᵢ tⁱ, tⁿ)` in K[t].
pub fn kt_encode_seq(alphas: &[FieldElem]) -> Result<(NcPoly, NcPoly), PairError> {
    let Some(first) = alphas.first() else {
        return Err(PairError::MalformedPair("empty sequence".into()));
    };
    let spec = first.spec();
    let terms = alphas.iter().enumerate().map(|(i, a)| (Word::new(vec![1; i]), a.clone()));
    let f = NcPoly::from_terms(spec, 1, terms)?;
    Ok((f, t_power(spec, alphas.len() - 1)))
}

/// Exponent `n` when `g = tⁿ`.
pub fn kt_power_exponent(g: &NcPoly) -> Result<usize, PairError> {
    let bad = || PairError::MalformedPair(format!("{g} is not a power of t"));
    if g.rank() != 1 || g.num_terms() != 1 {
        return Err(bad());
    }
    let (w, c) = g.leading()?;
    if !c.is_one() {
        return Err(bad());
    }
    Ok(w.len())
}

pub fn kt_decode_seq(f: &NcPoly, g: &NcPoly) -> Result<Vec<FieldElem>, PairError> {
    let n = kt_power_exponent(g)?;
    if f.rank() != 1 {
        return Err(PairError::MalformedPair("first component must be in K[t]".into()));
    }
    if let Some(d) = f.degree() {
        if d > n {
            return Err(PairError::MalformedPair(format!("degree {d} exceeds {n}")));
        }
    }
    Ok((0..=n).map(|i| f.coeff(&Word::new(vec![1; i]))).collect())
}

/// Concatenation of coded sequences: `(f + t^{n+1} g, t^{n+m+1})`.
pub fn kt_concat(a: &(NcPoly, NcPoly), b: &(NcPoly, NcPoly)) -> Result<(NcPoly, NcPoly), PairError> {
    let n = kt_power_exponent(&a.1)?;
    let m = kt_power_exponent(&b.1)?;
    let spec = a.0.spec();
    let shifted = &t_power(spec, n + 1) * &b.0;
    Ok((&a.0 + &shifted, t_power(spec, n + m + 1)))
}

/// Render a K[t] pair as `(poly, t^n)`.
pub fn kt_display(pair: &(NcPoly, NcPoly)) -> String {
    let name = |_: u32| "t".to_string();
    format!("({}, {})", pair.0.display_with(&name), pair.1.display_with(&name))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ncpoly::parse;

    fn q() -> FieldSpec {
        FieldSpec::rationals()
    }

    fn pair(cs: &[i64], ms: &[&[u32]]) -> TuplePair {
        TuplePair::new(q(), cs.iter().map(|&c| q().from_i64(c)).collect(), ms.iter().map(|m| m.to_vec()).collect())
            .unwrap()
    }

    #[test]
    fn encodings() {
        assert_eq!(encode_poly(&NcPoly::zero(q(), 2)), TuplePair::zero(q()));
        assert_eq!(encode_poly(&NcPoly::one(q(), 2)), pair(&[1], &[&[]]));
        let f = parse("2x1x2 + 3", q(), 2).unwrap();
        assert_eq!(encode_poly(&f), pair(&[3, 2], &[&[], &[1, 2]]));
        assert_eq!(encode_poly(&f).to_string(), "((3, 2), (ε, (1,2)))");
    }

    #[test]
    fn decodings() {
        assert_eq!(decode_pair(&pair(&[1, 1], &[&[1], &[1]]), 2).unwrap(), parse("2x1", q(), 2).unwrap());
        assert!(decode_pair(&TuplePair::zero(q()), 2).unwrap().is_zero());
        assert_eq!(
            decode_pair(&pair(&[2, 3], &[&[1, 2], &[]]), 2).unwrap(),
            parse("2x1x2 + 3", q(), 2).unwrap()
        );
        assert_eq!(decode_pair(&pair(&[1], &[&[3]]), 2), Err(PairError::BadIndex { entry: 3, rank: 2 }));
    }

    #[test]
    fn reduction() {
        assert_eq!(red(&pair(&[1, 2, -3], &[&[1], &[2], &[1]])), pair(&[-2, 2], &[&[1], &[2]]));
        assert_eq!(red(&pair(&[1, -1], &[&[1], &[1]])), TuplePair::zero(q()));
        let r = pair(&[5, 1], &[&[2], &[1, 1]]);
        assert_eq!(red(&r), r);
        assert!(red(&r).is_reduced());
    }

    #[test]
    fn equivalence() {
        assert!(pair_equiv(&pair(&[1, 2], &[&[1], &[2]]), &pair(&[2, 1], &[&[2], &[1]])));
        assert!(!pair_equiv(&pair(&[1], &[&[1]]), &pair(&[1], &[&[2]])));
        let p = pair(&[1, 2, -3], &[&[1], &[2], &[1]]);
        assert!(pair_equiv(&p, &red(&p)));
    }

    #[test]
    fn tuple_operations() {
        let e = |s| encode_poly(&parse(s, q(), 2).unwrap());
        assert_eq!(oplus(&e("x1"), &e("x2")).unwrap(), pair(&[1, 1], &[&[1], &[2]]));
        assert_eq!(decode_pair(&oplus(&e("x1 + 4"), &TuplePair::zero(q())).unwrap(), 2).unwrap().to_string(), "x1 + 4");
        assert!(decode_pair(&oplus(&e("x1"), &e("-x1")).unwrap(), 2).unwrap().is_zero());
        assert_eq!(odot(&e("x1"), &e("x2")).unwrap(), pair(&[1], &[&[1, 2]]));
        assert_eq!(odot(&e("x1 + 1"), &e("x1")).unwrap().len(), 2);
        assert!(decode_pair(&odot(&e("x1 + x2"), &TuplePair::zero(q())).unwrap(), 2).unwrap().is_zero());
    }

    #[test]
    fn sequences_in_kt() {
        let s = q();
        let (f, g) = kt_encode_seq(&[s.from_i64(1), s.zero(), s.from_i64(2)]).unwrap();
        assert_eq!(kt_display(&(f.clone(), g.clone())), "(2*t^2 + 1, t^2)");
        assert_eq!(kt_decode_seq(&f, &g).unwrap(), vec![s.from_i64(1), s.zero(), s.from_i64(2)]);
        let (f, g) = kt_encode_seq(&[s.from_i64(7)]).unwrap();
        assert!(g.is_one());
        assert_eq!(f, NcPoly::from_i64(s, 1, 7));
        let t3 = parse("t^3", s, 1).unwrap();
        let t2 = parse("t^2", s, 1).unwrap();
        assert!(matches!(kt_decode_seq(&t3, &t2), Err(PairError::MalformedPair(_))));
    }
}
