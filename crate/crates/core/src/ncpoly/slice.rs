use super::{NcPoly, PolyError};
use crate::scalars::{FieldElem, FieldSpec};
use crate::words::Word;

/// All polynomials over 𝔽_p of degree at most `d`: a finite fragment of the
/// algebra that quantifiers can range over.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DegreeSlice {
    spec: FieldSpec,
    rank: usize,
    d: usize,
    words: Vec<Word>,
}

impl DegreeSlice {
    pub fn new(spec: FieldSpec, rank: usize, d: usize) -> Result<Self, PolyError> {
        if !spec.is_finite() {
            return Err(PolyError::UnsupportedDomain("degree slices need a finite field".into()));
        }
        Ok(DegreeSlice { spec, rank, d, words: Word::all_up_to(rank as u32, d) })
    }

    pub fn spec(&self) -> FieldSpec {
        self.spec
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn degree_bound(&self) -> usize {
        self.d
    }

    pub fn size(&self) -> u128 {
        (self.spec.characteristic() as u128).saturating_pow(self.words.len() as u32)
    }

    pub fn contains(&self, f: &NcPoly) -> bool {
        f.spec() == self.spec && f.rank() == self.rank && f.degree().is_none_or(|k| k <= self.d)
    }

    /// The whole carrier, in a fixed order starting at 0.
    pub fn elements(&self) -> Result<Vec<NcPoly>, PolyError> {
        self.enumerate(&self.words)
    }

    /// Constant-free elements of degree at most `e`.
    pub fn aug_elements(&self, e: usize) -> Result<Vec<NcPoly>, PolyError> {
        let words: Vec<Word> = self.words.iter().filter(|w| !w.is_empty() && w.len() <= e).cloned().collect();
        self.enumerate(&words)
    }

    fn enumerate(&self, words: &[Word]) -> Result<Vec<NcPoly>, PolyError> {
        let elems: Vec<FieldElem> = self.spec.elements().expect("finite");
        let p = elems.len() as u128;
        let total = p.checked_pow(words.len() as u32).unwrap_or(u128::MAX);
        if total > super::SEARCH_LIMIT {
            return Err(PolyError::SearchTooLarge(total));
        }
        let mut out = Vec::with_capacity(total as usize);
        for code in 0..total {
            let mut c = code;
            let mut terms = Vec::new();
            for w in words {
                let digit = (c % p) as usize;
                c /= p;
                if digit != 0 {
                    terms.push((w.clone(), elems[digit].clone()));
                }
            }
            out.push(NcPoly::from_terms(self.spec, self.rank, terms)?);
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sizes() {
        let f2 = FieldSpec::prime(2).unwrap();
        let s = DegreeSlice::new(f2, 1, 4).unwrap();
        assert_eq!(s.size(), 32);
        assert_eq!(s.elements().unwrap().len(), 32);
        let s = DegreeSlice::new(f2, 2, 2).unwrap();
        assert_eq!(s.size(), 128);
        assert_eq!(s.aug_elements(1).unwrap().len(), 4);
        assert!(DegreeSlice::new(FieldSpec::rationals(), 1, 2).is_err());
    }
}
