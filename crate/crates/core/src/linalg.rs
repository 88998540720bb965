//! Dense Gaussian elimination over an exact field.

use std::collections::BTreeMap;

use crate::ncpoly::NcPoly;
use crate::scalars::{FieldElem, FieldSpec};
use crate::words::Word;

/// Row-reduced echelon form of a matrix, kept with its pivot columns.
#[derive(Debug, Clone)]
pub struct Rref {
    pub rows: Vec<Vec<FieldElem>>,
    pub pivots: Vec<usize>,
    pub ncols: usize,
}

pub fn rref(mut rows: Vec<Vec<FieldElem>>, ncols: usize) -> Rref {
    let mut pivots = Vec::new();
    let mut r = 0;
    for col in 0..ncols {
        let Some(pr) = (r..rows.len()).find(|&i| !rows[i][col].is_zero()) else {
            continue;
        };
        rows.swap(r, pr);
        let inv = rows[r][col].inv().expect("pivot is nonzero");
        for x in rows[r].iter_mut() {
            *x = &*x * &inv;
        }
        let pivot_row = rows[r].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i == r || row[col].is_zero() {
                continue;
            }
            let f = row[col].clone();
            for (x, p) in row.iter_mut().zip(&pivot_row) {
                if !p.is_zero() {
                    *x = &*x - &(&f * p);
                }
            }
        }
        pivots.push(col);
        r += 1;
        if r == rows.len() {
            break;
        }
    }
    rows.truncate(r);
    Rref { rows, pivots, ncols }
}

impl Rref {
    /// Basis of `{x : A x = 0}`, one vector per free column.
    pub fn nullspace(&self, spec: FieldSpec) -> Vec<Vec<FieldElem>> {
        let mut out = Vec::new();
        for free in (0..self.ncols).filter(|c| !self.pivots.contains(c)) {
            let mut v = vec![spec.zero(); self.ncols];
            v[free] = spec.one();
            for (row, &pc) in self.rows.iter().zip(&self.pivots) {
                v[pc] = -&row[free];
            }
            out.push(v);
        }
        out
    }
}

/// One solution of `A x = b`, if any. Columns of `a` are unknowns.
pub fn solve(spec: FieldSpec, a: &[Vec<FieldElem>], b: &[FieldElem], ncols: usize) -> Option<Vec<FieldElem>> {
    let aug: Vec<Vec<FieldElem>> = a
        .iter()
        .zip(b)
        .map(|(row, bi)| {
            let mut r = row.clone();
            r.push(bi.clone());
            r
        })
        .collect();
    let red = rref(aug, ncols + 1);
    if red.pivots.last() == Some(&ncols) {
        return None;
    }
    let mut x = vec![spec.zero(); ncols];
    for (row, &pc) in red.rows.iter().zip(&red.pivots) {
        x[pc] = row[ncols].clone();
    }
    Some(x)
}

/// K-span of polynomials, echelonized by leading word.
#[derive(Debug, Clone, Default)]
pub struct LinearSpan {
    rows: BTreeMap<Word, NcPoly>,
}

impl LinearSpan {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    /// Remainder of `f` after eliminating every pivot word.
    pub fn reduce(&self, f: &NcPoly) -> NcPoly {
        let mut r = f.clone();
        let mut done = NcPoly::zero(f.spec(), f.rank());
        while let Ok((w, c)) = r.leading() {
            match self.rows.get(&w) {
                Some(row) => r = &r - &row.scale(&c),
                None => {
                    let t = NcPoly::monomial(c, w, f.rank());
                    r = &r - &t;
                    done = &done + &t;
                }
            }
        }
        done
    }

    pub fn contains(&self, f: &NcPoly) -> bool {
        self.reduce(f).is_zero()
    }

    /// Insert `f`; false when it was already in the span.
    pub fn insert(&mut self, f: &NcPoly) -> bool {
        let r = self.reduce(f);
        let Ok((w, _)) = r.leading() else {
            return false;
        };
        let r = r.monic();
        for row in self.rows.values_mut() {
            let c = row.coeff(&w);
            if !c.is_zero() {
                *row = &*row - &r.scale(&c);
            }
        }
        self.rows.insert(w, r);
        true
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_system() {
        let q = FieldSpec::rationals();
        let e = |n| q.from_i64(n);
        // x + y = 3, x - y = 1
        let a = vec![vec![e(1), e(1)], vec![e(1), e(-1)]];
        assert_eq!(solve(q, &a, &[e(3), e(1)], 2).unwrap(), vec![e(2), e(1)]);
        let sing = vec![vec![e(1), e(2)], vec![e(2), e(4)]];
        assert!(solve(q, &sing, &[e(1), e(3)], 2).is_none());
        let ns = rref(sing, 2).nullspace(q);
        assert_eq!(ns, vec![vec![e(-2), e(1)]]);
    }

    #[test]
    fn spans() {
        let q = FieldSpec::rationals();
        let p = |s| crate::ncpoly::parse(s, q, 2).unwrap();
        let mut sp = LinearSpan::new();
        assert!(sp.insert(&p("x1 + x2")));
        assert!(sp.insert(&p("x1 - x2")));
        assert!(!sp.insert(&p("3*x1")));
        assert!(sp.contains(&p("x2")));
        assert_eq!(sp.reduce(&p("x2 + x1*x1")), p("x1*x1"));
        assert_eq!(sp.dim(), 2);
    }
}
