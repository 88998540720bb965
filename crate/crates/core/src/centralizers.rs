//! Centralizers of non-units in a degree window, computed by exact linear
//! algebra on monomial coordinates, and the ring maps between them.

use std::collections::BTreeMap;

use thiserror::Error;

use crate::linalg::rref;
use crate::ncpoly::{NcPoly, PolyError};
use crate::scalars::FieldElem;
use crate::words::Word;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CentralizerError {
    #[error("a unit or zero has the whole algebra as centralizer")]
    NotProper,
    #[error("window degree {d} is below the required {need}")]
    WindowTooSmall { d: usize, need: usize },
    #[error("element is not a polynomial in the generator")]
    NotMember,
    #[error("malformed sequence pair: {0}")]
    MalformedPair(String),
    /// The window is not spanned by generator powers. Cannot happen for a
    /// correct implementation.
    #[error("window is not a power basis: {0}")]
    PowerBasisViolated(String),
    #[error(transparent)]
    Poly(#[from] PolyError),
}

type Result<T> = std::result::Result<T, CentralizerError>;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CentralizerWindow {
    p: NcPoly,
    d: usize,
    generator: NcPoly,
    basis: Vec<NcPoly>,
}

impl CentralizerWindow {
    pub fn p(&self) -> &NcPoly {
        &self.p
    }

    pub fn degree_bound(&self) -> usize {
        self.d
    }

    /// Monic, constant-free, of least positive degree.
    pub fn generator(&self) -> &NcPoly {
        &self.generator
    }

    /// `1, g, g², …` up to the degree bound.
    pub fn basis(&self) -> &[NcPoly] {
        &self.basis
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }
}

fn require_proper(p: &NcPoly) -> Result<usize> {
    match p.degree() {
        None | Some(0) => Err(CentralizerError::NotProper),
        Some(k) => Ok(k),
    }
}

/// Basis of `{Z : deg Z ≤ d, PZ = ZP}`, echelonized so that leading words
/// are distinct and each leading coefficient is 1.
pub fn commutant(p: &NcPoly, d: usize) -> Vec<NcPoly> {
    let (spec, rank) = (p.spec(), p.rank());
    // descending deglex, so each pivot column is the leading word of its row
    let mut unknowns = Word::all_up_to(rank as u32, d);
    unknowns.sort();
    unknowns.reverse();
    let mut eq_index: BTreeMap<Word, usize> = BTreeMap::new();
    let mut columns: Vec<Vec<(usize, FieldElem)>> = Vec::with_capacity(unknowns.len());
    for w in &unknowns {
        let c = &p.mul_word_right(w) - &p.mul_word_left(w);
        let mut col = Vec::new();
        for (word, coef) in c.terms() {
            let n = eq_index.len();
            let row = *eq_index.entry(word.clone()).or_insert(n);
            col.push((row, coef.clone()));
        }
        columns.push(col);
    }
    let mut rows = vec![vec![spec.zero(); unknowns.len()]; eq_index.len()];
    for (j, col) in columns.iter().enumerate() {
        for (i, c) in col {
            rows[*i][j] = c.clone();
        }
    }
    let kernel = rref(rows, unknowns.len()).nullspace(spec);
    let red = rref(kernel, unknowns.len());
    red.rows
        .iter()
        .map(|row| {
            let terms = unknowns.iter().zip(row).filter(|(_, c)| !c.is_zero()).map(|(w, c)| (w.clone(), c.clone()));
            NcPoly::from_terms(spec, rank, terms).expect("window words are in rank")
        })
        .collect()
}

pub fn centralizer_window(p: &NcPoly, d: usize) -> Result<CentralizerWindow> {
    let k = require_proper(p)?;
    if d < k {
        return Err(CentralizerError::WindowTooSmall { d, need: k });
    }
    let space = commutant(p, d);
    let generator = space
        .iter()
        .filter(|z| z.degree().unwrap_or(0) > 0)
        .min_by_key(|z| z.degree())
        .map(|z| z.without_constant().monic())
        .ok_or_else(|| CentralizerError::PowerBasisViolated("P itself is missing".into()))?;
    let gd = generator.degree().expect("non-scalar");
    let basis: Vec<NcPoly> = (0..=d / gd).map(|i| generator.pow(i)).collect();
    if basis.len() != space.len() {
        return Err(CentralizerError::PowerBasisViolated(format!(
            "dimension {} but {} generator powers fit",
            space.len(),
            basis.len()
        )));
    }
    if let Some(b) = basis.iter().find(|b| (p * *b) != (*b * p)) {
        return Err(CentralizerError::PowerBasisViolated(format!("{b} does not commute with P")));
    }
    Ok(CentralizerWindow { p: p.clone(), d, generator, basis })
}

/// The centralizer generator, found in the smallest window that holds it.
pub fn generator(p: &NcPoly) -> Result<NcPoly> {
    let k = require_proper(p)?;
    Ok(centralizer_window(p, k)?.generator)
}

/// `C(P) = K[P]` within the window.
pub fn is_self_generating(p: &NcPoly, d: usize) -> Result<bool> {
    let w = centralizer_window(p, d)?;
    Ok(w.generator.degree() == p.degree())
}

/// `α` with `f = Σ α_i gⁱ`, by leading-term elimination.
pub fn expand_in_powers(f: &NcPoly, g: &NcPoly) -> Result<Vec<FieldElem>> {
    let (lw, lc) = g.leading()?;
    let k = lw.len();
    if k == 0 {
        return Err(CentralizerError::NotProper);
    }
    let mut alphas: Vec<FieldElem> = Vec::new();
    let mut r = f.clone();
    while let Ok((w, c)) = r.leading() {
        let j = w.len() / k;
        if w.len() % k != 0 || w != lw.pow(j) {
            return Err(CentralizerError::NotMember);
        }
        let a = c.checked_div(&lc.pow(j as u64)).map_err(PolyError::from)?;
        r = r.checked_sub(&g.pow(j).scale(&a))?;
        if alphas.len() <= j {
            alphas.resize(j + 1, f.spec().zero());
        }
        alphas[j] = a;
    }
    Ok(alphas)
}

pub fn expand_in_generator(f: &NcPoly, w: &CentralizerWindow) -> Result<Vec<FieldElem>> {
    if let Some(k) = f.degree() {
        if k > w.d {
            return Err(CentralizerError::WindowTooSmall { d: w.d, need: k });
        }
    }
    expand_in_powers(f, &w.generator)
}

pub fn eval_in_powers(alphas: &[FieldElem], g: &NcPoly) -> NcPoly {
    let mut acc = NcPoly::zero(g.spec(), g.rank());
    for a in alphas.iter().rev() {
        acc = &(&acc * g) + &NcPoly::constant(a.clone(), g.rank());
    }
    acc
}

/// Transport `f ∈ C(P)` to `C(Q)` by sending the generator of one to the
/// generator of the other.
pub fn map_centralizer(p: &NcPoly, q: &NcPoly, f: &NcPoly, d: usize) -> Result<NcPoly> {
    let gp = generator(p)?;
    let gq = generator(q)?;
    if let Some(k) = f.degree() {
        if k > d {
            return Err(CentralizerError::WindowTooSmall { d, need: k });
        }
    }
    Ok(eval_in_powers(&expand_in_powers(f, &gp)?, &gq))
}

/// `(Σ α_i Pⁱ, Pⁿ) ↦ (Σ α_i Qⁱ, Qⁿ)`.
pub fn transport_seq(p: &NcPoly, q: &NcPoly, pair: &(NcPoly, NcPoly)) -> Result<(NcPoly, NcPoly)> {
    require_proper(p)?;
    require_proper(q)?;
    let malformed = |m: &str| CentralizerError::MalformedPair(m.into());
    let len = expand_in_powers(&pair.1, p).map_err(|_| malformed("second entry is not a power of P"))?;
    let n = len.len().checked_sub(1).ok_or_else(|| malformed("second entry is zero"))?;
    if !len[n].is_one() || len[..n].iter().any(|a| !a.is_zero()) {
        return Err(malformed("second entry is not a power of P"));
    }
    let mut alphas = expand_in_powers(&pair.0, p).map_err(|_| malformed("first entry is not in K[P]"))?;
    if alphas.len() > n + 1 {
        return Err(malformed("sequence longer than the declared length"));
    }
    alphas.resize(n + 1, p.spec().zero());
    Ok((eval_in_powers(&alphas, q), q.pow(n)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ncpoly::parse;
    use crate::scalars::FieldSpec;

    fn q2(s: &str) -> NcPoly {
        parse(s, FieldSpec::rationals(), 2).unwrap()
    }

    #[test]
    fn windows() {
        let w = centralizer_window(&q2("x1"), 2).unwrap();
        assert_eq!(w.basis(), &[q2("1"), q2("x1"), q2("x1^2")]);
        assert_eq!(w.generator(), &q2("x1"));
        assert_eq!(centralizer_window(&q2("x1^2"), 3).unwrap().generator(), &q2("x1"));
        assert_eq!(centralizer_window(&q2("5"), 3), Err(CentralizerError::NotProper));
        assert!(matches!(centralizer_window(&q2("x1^3"), 2), Err(CentralizerError::WindowTooSmall { .. })));
        // generator normalization drops scale and constant
        assert_eq!(generator(&q2("3*x1*x2 + 7")).unwrap(), q2("x1*x2"));
    }

    #[test]
    fn self_generation() {
        assert!(is_self_generating(&q2("x1"), 3).unwrap());
        assert!(!is_self_generating(&q2("x1^2"), 4).unwrap());
        assert!(is_self_generating(&q2("x1*x2"), 6).unwrap());
        assert!(!is_self_generating(&q2("x1*x2*x1*x2"), 6).unwrap());
    }

    #[test]
    fn expansion_and_maps() {
        let w = centralizer_window(&q2("x1"), 3).unwrap();
        let q = FieldSpec::rationals();
        let e = |n| q.from_i64(n);
        assert_eq!(expand_in_generator(&q2("3*x1^2 + x1 + 5"), &w).unwrap(), vec![e(5), e(1), e(3)]);
        assert_eq!(expand_in_generator(&q2("1"), &w).unwrap(), vec![e(1)]);
        assert_eq!(expand_in_generator(&q2("x2"), &w), Err(CentralizerError::NotMember));
        let (x1, x2) = (q2("x1"), q2("x2"));
        assert_eq!(map_centralizer(&x1, &x2, &q2("3*x1^2 + x1 + 5"), 4).unwrap(), q2("3*x2^2 + x2 + 5"));
        assert_eq!(map_centralizer(&x1, &x2, &q2("7"), 4).unwrap(), q2("7"));
        assert_eq!(map_centralizer(&x1, &x2, &x2, 4), Err(CentralizerError::NotMember));
    }

    #[test]
    fn sequences() {
        let (x1, x2) = (q2("x1"), q2("x2"));
        let got = transport_seq(&x1, &x2, &(q2("1 + 2*x1^2"), q2("x1^2"))).unwrap();
        assert_eq!(got, (q2("1 + 2*x2^2"), q2("x2^2")));
        let got = transport_seq(&x1, &x2, &(q2("4"), q2("1"))).unwrap();
        assert_eq!(got, (q2("4"), q2("1")));
        assert!(matches!(
            transport_seq(&x1, &x2, &(q2("1"), q2("x1 + 1"))),
            Err(CentralizerError::MalformedPair(_))
        ));
    }
}
