//! Words over the generator alphabet and the combinatorics the marker codecs
//! rely on: borders, primitivity, occurrences and maximal runs.

use std::cmp::Ordering;
use std::fmt;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum WordError {
    #[error("empty word where a nonempty one is required")]
    EmptyWord,
    #[error("marker {0} is bordered or a proper power")]
    BadMarker(Word),
}

/// A monomial of the free monoid: generator indices starting at 1. The empty
/// word is the identity monomial.
///
/// Ordering is deglex: length first, then lexicographic with x1 < x2 < ….
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Word(Vec<u32>);

impl Word {
    pub fn new(letters: Vec<u32>) -> Self {
        Word(letters)
    }

    pub fn empty() -> Self {
        Word(Vec::new())
    }

    pub fn letter(i: u32) -> Self {
        Word(vec![i])
    }

    pub fn letters(&self) -> &[u32] {
        &self.0
    }

    pub fn into_letters(self) -> Vec<u32> {
        self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Largest generator index used, 0 for the empty word.
    pub fn max_letter(&self) -> u32 {
        self.0.iter().copied().max().unwrap_or(0)
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut v = Vec::with_capacity(self.len() + other.len());
        v.extend_from_slice(&self.0);
        v.extend_from_slice(&other.0);
        Word(v)
    }

    pub fn pow(&self, k: usize) -> Word {
        Word(self.0.repeat(k))
    }

    pub fn slice(&self, from: usize, to: usize) -> Word {
        Word(self.0[from..to].to_vec())
    }

    pub fn is_prefix_of(&self, other: &Word) -> bool {
        other.0.starts_with(&self.0)
    }

    pub fn is_suffix_of(&self, other: &Word) -> bool {
        other.0.ends_with(&self.0)
    }

    pub fn is_subword_of(&self, other: &Word) -> bool {
        self.is_empty() || other.0.windows(self.len()).any(|w| w == self.0.as_slice())
    }

    /// All words of length exactly `len` over `n` letters, in lex order.
    pub fn all_of_length(n: u32, len: usize) -> Vec<Word> {
        let mut out = vec![Word::empty()];
        for _ in 0..len {
            let mut next = Vec::with_capacity(out.len() * n as usize);
            for w in &out {
                for a in 1..=n {
                    let mut v = w.0.clone();
                    v.push(a);
                    next.push(Word(v));
                }
            }
            out = next;
        }
        out
    }

    /// All words of length at most `max_len`, in deglex order.
    pub fn all_up_to(n: u32, max_len: usize) -> Vec<Word> {
        (0..=max_len).flat_map(|l| Word::all_of_length(n, l)).collect()
    }
}

impl From<Vec<u32>> for Word {
    fn from(v: Vec<u32>) -> Self {
        Word(v)
    }
}

impl Ord for Word {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0.len().cmp(&other.0.len()).then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Word {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "1");
        }
        for a in &self.0 {
            write!(f, "x{a}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Word({self})")
    }
}

/// Failure function: `b[i]` is the length of the longest proper border of
/// `w[..=i]`.
pub fn failure_function(w: &[u32]) -> Vec<usize> {
    let mut b = vec![0usize; w.len()];
    let mut k = 0usize;
    for i in 1..w.len() {
        while k > 0 && w[i] != w[k] {
            k = b[k - 1];
        }
        if w[i] == w[k] {
            k += 1;
        }
        b[i] = k;
    }
    b
}

pub fn is_primitive(w: &Word) -> Result<bool, WordError> {
    if w.is_empty() {
        return Err(WordError::EmptyWord);
    }
    let n = w.len();
    let border = failure_function(w.letters())[n - 1];
    let period = n - border;
    Ok(!(period < n && n.is_multiple_of(period)))
}

pub fn is_unbordered(w: &Word) -> Result<bool, WordError> {
    if w.is_empty() {
        return Err(WordError::EmptyWord);
    }
    Ok(failure_function(w.letters())[w.len() - 1] == 0)
}

/// Start positions of `pattern` in `text`, ascending (overlaps included).
pub fn occurrences(pattern: &Word, text: &Word) -> Result<Vec<usize>, WordError> {
    if pattern.is_empty() {
        return Err(WordError::EmptyWord);
    }
    let p = pattern.letters();
    let fail = failure_function(p);
    let mut out = Vec::new();
    let mut k = 0usize;
    for (i, &c) in text.letters().iter().enumerate() {
        while k > 0 && c != p[k] {
            k = fail[k - 1];
        }
        if c == p[k] {
            k += 1;
        }
        if k == p.len() {
            out.push(i + 1 - p.len());
            k = fail[k - 1];
        }
    }
    Ok(out)
}

/// `text = gaps[0] · a^{exps[0]} · gaps[1] · … · a^{exps[k-1]} · gaps[k]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Runs {
    pub gaps: Vec<Word>,
    pub exps: Vec<usize>,
}

impl Runs {
    pub fn reassemble(&self, a: &Word) -> Word {
        let mut out = self.gaps[0].clone();
        for (j, gap) in self.exps.iter().zip(&self.gaps[1..]) {
            out = out.concat(&a.pow(*j)).concat(gap);
        }
        out
    }
}

/// Factor `text` around the maximal runs of the unbordered primitive word `a`.
pub fn maximal_runs(a: &Word, text: &Word) -> Result<Runs, WordError> {
    if !is_primitive(a)? || !is_unbordered(a)? {
        return Err(WordError::BadMarker(a.clone()));
    }
    // occurrences of an unbordered word never overlap
    let occ = occurrences(a, text)?;
    let t = text.letters();
    let m = a.len();
    let mut gaps = Vec::new();
    let mut exps = Vec::new();
    let mut pos = 0usize;
    let mut i = 0usize;
    while i < occ.len() {
        let start = occ[i];
        let mut j = 1usize;
        while i + j < occ.len() && occ[i + j] == start + j * m {
            j += 1;
        }
        gaps.push(Word(t[pos..start].to_vec()));
        exps.push(j);
        pos = start + j * m;
        i += j;
    }
    gaps.push(Word(t[pos..].to_vec()));
    Ok(Runs { gaps, exps })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(v: &[u32]) -> Word {
        Word::new(v.to_vec())
    }

    #[test]
    fn primitivity() {
        assert!(!is_primitive(&w(&[1, 1])).unwrap());
        assert!(is_primitive(&w(&[1, 2])).unwrap());
        assert!(!is_primitive(&w(&[1, 2, 1, 2, 1, 2])).unwrap());
        assert!(is_primitive(&w(&[1, 2, 1])).unwrap());
        assert_eq!(is_primitive(&Word::empty()), Err(WordError::EmptyWord));
    }

    #[test]
    fn borders() {
        assert!(!is_unbordered(&w(&[1, 2, 1])).unwrap());
        assert!(is_unbordered(&w(&[1, 2])).unwrap());
        assert!(is_unbordered(&w(&[1, 2, 1, 2, 2])).unwrap());
    }

    #[test]
    fn occurrence_scan() {
        assert_eq!(occurrences(&w(&[1, 2]), &w(&[1, 2, 1, 2, 2])).unwrap(), vec![0, 2]);
        assert!(occurrences(&w(&[1]), &w(&[2, 2])).unwrap().is_empty());
        assert_eq!(occurrences(&w(&[2, 1]), &w(&[2, 1])).unwrap(), vec![0]);
        assert_eq!(occurrences(&w(&[1, 1]), &w(&[1, 1, 1])).unwrap(), vec![0, 1]);
    }

    #[test]
    fn runs() {
        let a = w(&[1, 2]);
        let r = maximal_runs(&a, &w(&[1, 2, 1, 2, 1, 2, 1])).unwrap();
        assert_eq!(r.gaps, vec![Word::empty(), w(&[1])]);
        assert_eq!(r.exps, vec![3]);
        let r = maximal_runs(&a, &w(&[2])).unwrap();
        assert_eq!(r.gaps, vec![w(&[2])]);
        assert!(r.exps.is_empty());
        assert!(matches!(maximal_runs(&w(&[1, 2, 1]), &a), Err(WordError::BadMarker(_))));
    }

    #[test]
    fn deglex() {
        let mut v = vec![w(&[2, 1]), w(&[1]), w(&[1, 2]), Word::empty(), w(&[2])];
        v.sort();
        assert_eq!(v, vec![Word::empty(), w(&[1]), w(&[2]), w(&[1, 2]), w(&[2, 1])]);
    }
}
