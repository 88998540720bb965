//! One- and two-sided divisibility in the free algebra.
//!
//! Divisibility means two-sided factorization `f = u·b·v`. One-sided
//! quotients are exact: `lead(g·q) = lead(g)·lead(q)` under deglex, so
//! reduction by leading words decides membership in `g·A` and `A·g`.

use std::collections::HashSet;
use std::ops::ControlFlow;

use super::univariate::{monic_of_degree, quot_rem, rational_roots};
use super::{NcPoly, PolyError};
use crate::words::Word;

/// Upper bound on candidates any exhaustive search will enumerate.
pub const SEARCH_LIMIT: u128 = 1 << 22;

fn same_ring(a: &NcPoly, b: &NcPoly) -> Result<(), PolyError> {
    if a.spec() != b.spec() || a.rank() != b.rank() {
        Err(PolyError::SpecMismatch)
    } else {
        Ok(())
    }
}

/// `q` with `f = g·q`, if it exists.
pub fn right_quotient(f: &NcPoly, g: &NcPoly) -> Result<Option<NcPoly>, PolyError> {
    same_ring(f, g)?;
    let (gl, gc) = g.leading().map_err(|_| PolyError::ZeroDivisorArg)?;
    let inv = gc.inv()?;
    let mut q = NcPoly::zero(f.spec(), f.rank());
    let mut r = f.clone();
    while let Ok((w, c)) = r.leading() {
        if !gl.is_prefix_of(&w) {
            return Ok(None);
        }
        let m = w.slice(gl.len(), w.len());
        let coef = &c * &inv;
        r = &r - &g.mul_word_right(&m).scale(&coef);
        q = &q + &NcPoly::monomial(coef, m, f.rank());
    }
    Ok(Some(q))
}

/// `q` with `f = q·g`, if it exists.
pub fn left_quotient(f: &NcPoly, g: &NcPoly) -> Result<Option<NcPoly>, PolyError> {
    same_ring(f, g)?;
    let (gl, gc) = g.leading().map_err(|_| PolyError::ZeroDivisorArg)?;
    let inv = gc.inv()?;
    let mut q = NcPoly::zero(f.spec(), f.rank());
    let mut r = f.clone();
    while let Ok((w, c)) = r.leading() {
        if !gl.is_suffix_of(&w) {
            return Ok(None);
        }
        let m = w.slice(0, w.len() - gl.len());
        let coef = &c * &inv;
        r = &r - &g.mul_word_left(&m).scale(&coef);
        q = &q + &NcPoly::monomial(coef, m, f.rank());
    }
    Ok(Some(q))
}

/// Visit every monic polynomial over 𝔽_p whose leading word is `lead`.
pub fn monic_with_lead<F>(
    lead: &Word,
    spec: crate::scalars::FieldSpec,
    rank: usize,
    mut visit: F,
) -> Result<(), PolyError>
where
    F: FnMut(NcPoly) -> ControlFlow<()>,
{
    let elems = spec
        .elements()
        .ok_or_else(|| PolyError::UnsupportedDomain("enumeration needs a finite field".into()))?;
    let p = elems.len() as u128;
    let smaller: Vec<Word> = Word::all_up_to(rank as u32, lead.len()).into_iter().filter(|w| w < lead).collect();
    let total = p.checked_pow(smaller.len() as u32).unwrap_or(u128::MAX);
    if total > SEARCH_LIMIT {
        return Err(PolyError::SearchTooLarge(total));
    }
    let mut digits = vec![0usize; smaller.len()];
    loop {
        let mut terms = vec![(lead.clone(), spec.one())];
        for (w, &d) in smaller.iter().zip(&digits) {
            if d != 0 {
                terms.push((w.clone(), elems[d].clone()));
            }
        }
        let u = NcPoly::from_terms(spec, rank, terms)?;
        if visit(u).is_break() {
            return Ok(());
        }
        // odometer
        let mut i = 0;
        loop {
            if i == digits.len() {
                return Ok(());
            }
            digits[i] += 1;
            if digits[i] < elems.len() {
                break;
            }
            digits[i] = 0;
            i += 1;
        }
    }
}

/// Find `(u, v)` with `f = u·b·v` and `deg u, deg v ≤ bound`.
///
/// Rank 1 is commutative, so this is Euclidean division and the bound plays
/// no role. In higher rank over 𝔽_p the search is exhaustive over monic
/// candidates for the shorter of `u`, `v` (its leading word is forced by
/// `lead(f)`), so `None` proves there is no witness within the bound. Over ℚ
/// in higher rank only the cases decidable by inspection are handled (unit
/// `b`, or `f` a scalar monomial); anything else is `UnsupportedDomain`.
pub fn factor_divides(b: &NcPoly, f: &NcPoly, bound: usize) -> Result<Option<(NcPoly, NcPoly)>, PolyError> {
    same_ring(b, f)?;
    if b.is_zero() {
        return Err(PolyError::ZeroDivisorArg);
    }
    let (spec, rank) = (f.spec(), f.rank());
    let one = NcPoly::one(spec, rank);
    if f.is_zero() {
        return Ok(Some((NcPoly::zero(spec, rank), one)));
    }
    if b.is_constant() {
        let inv = b.constant_term().inv()?;
        return Ok(Some((one, f.scale(&inv))));
    }
    let (df, db) = (f.degree().unwrap(), b.degree().unwrap());
    if df < db {
        return Ok(None);
    }
    if rank == 1 {
        let (q, r) = quot_rem(f, b)?;
        return Ok(r.is_zero().then_some((one, q)));
    }
    let (lf, cf) = f.leading()?;
    let (lb, cb) = b.leading()?;
    if f.num_terms() == 1 && b.num_terms() == 1 {
        // monomials only factor into monomials
        for k in 0..=df - db {
            let l = df - db - k;
            if k <= bound && l <= bound && lf.slice(k, k + db) == lb {
                let coef = cf.checked_div(&cb)?;
                return Ok(Some((
                    NcPoly::word(spec, rank, lf.slice(0, k)),
                    NcPoly::monomial(coef, lf.slice(k + db, df), rank),
                )));
            }
        }
        return Ok(None);
    }
    if f.num_terms() == 1 {
        return Ok(None);
    }
    if !spec.is_finite() {
        return Err(PolyError::UnsupportedDomain(
            "two-sided division in rank ≥ 2 is only searched over finite fields".into(),
        ));
    }
    for k in 0..=df - db {
        let l = df - db - k;
        if k > bound || l > bound || lf.slice(k, k + db) != lb {
            continue;
        }
        let mut found = None;
        let mut err = None;
        if k <= l {
            monic_with_lead(&lf.slice(0, k), spec, rank, |u| {
                match right_quotient(f, &(&u * b)) {
                    Ok(Some(v)) => {
                        found = Some((u, v));
                        ControlFlow::Break(())
                    }
                    Ok(None) => ControlFlow::Continue(()),
                    Err(e) => {
                        err = Some(e);
                        ControlFlow::Break(())
                    }
                }
            })?;
        } else {
            monic_with_lead(&lf.slice(df - l, df), spec, rank, |v| match left_quotient(f, &(b * &v)) {
                Ok(Some(u)) => {
                    found = Some((u, v));
                    ControlFlow::Break(())
                }
                Ok(None) => ControlFlow::Continue(()),
                Err(e) => {
                    err = Some(e);
                    ControlFlow::Break(())
                }
            })?;
        }
        if let Some(e) = err {
            return Err(e);
        }
        if found.is_some() {
            return Ok(found);
        }
    }
    Ok(None)
}

/// Every two-sided divisor of a nonzero `f`, one monic representative per
/// class of associates, in no particular order.
pub fn divisors(f: &NcPoly) -> Result<Vec<NcPoly>, PolyError> {
    if f.is_zero() {
        return Err(PolyError::ZeroPolynomial);
    }
    let (spec, rank) = (f.spec(), f.rank());
    let df = f.degree().unwrap();
    if rank == 1 {
        return if spec.is_finite() { divisors_rank1_fp(f) } else { divisors_rank1_q(f) };
    }
    if f.num_terms() == 1 {
        let (w, _) = f.leading()?;
        let mut seen = HashSet::new();
        for i in 0..=df {
            for j in i..=df {
                seen.insert(NcPoly::word(spec, rank, w.slice(i, j)));
            }
        }
        return Ok(seen.into_iter().collect());
    }
    if !spec.is_finite() {
        return Err(PolyError::UnsupportedDomain(
            "divisor enumeration in rank ≥ 2 needs a finite field".into(),
        ));
    }
    let (lf, _) = f.leading()?;
    let mut seen: HashSet<NcPoly> = HashSet::new();
    let mut failure = None;
    for k in 0..=df {
        monic_with_lead(&lf.slice(0, k), spec, rank, |u| {
            let w = match right_quotient(f, &u) {
                Ok(Some(w)) => w,
                Ok(None) => return ControlFlow::Continue(()),
                Err(e) => {
                    failure = Some(e);
                    return ControlFlow::Break(());
                }
            };
            let (lw, _) = w.leading().expect("nonzero quotient");
            for l in 0..=lw.len() {
                let r = monic_with_lead(&lw.slice(lw.len() - l, lw.len()), spec, rank, |v| {
                    if let Ok(Some(b)) = left_quotient(&w, &v) {
                        seen.insert(b.monic());
                    }
                    ControlFlow::Continue(())
                });
                if let Err(e) = r {
                    failure = Some(e);
                    return ControlFlow::Break(());
                }
            }
            ControlFlow::Continue(())
        })?;
        if let Some(e) = failure.take() {
            return Err(e);
        }
    }
    Ok(seen.into_iter().collect())
}

fn divisors_rank1_fp(f: &NcPoly) -> Result<Vec<NcPoly>, PolyError> {
    let mut out = Vec::new();
    for d in 0..=f.degree().unwrap() {
        for g in monic_of_degree(f, d) {
            if quot_rem(f, &g)?.1.is_zero() {
                out.push(g);
            }
        }
    }
    Ok(out)
}

/// Over ℚ: split off rational roots; a root-free remainder of degree ≤ 3 is
/// irreducible, anything larger cannot be factored here.
fn divisors_rank1_q(f: &NcPoly) -> Result<Vec<NcPoly>, PolyError> {
    let spec = f.spec();
    let mut factors: Vec<NcPoly> = Vec::new();
    let mut rest = f.monic();
    let t = NcPoly::var(spec, 1, 1);
    for r in rational_roots(f)? {
        let lin = &t - &NcPoly::constant(r, 1);
        loop {
            let (q, rem) = quot_rem(&rest, &lin)?;
            if !rem.is_zero() {
                break;
            }
            factors.push(lin.clone());
            rest = q;
        }
    }
    match rest.degree() {
        Some(0) => {}
        Some(d) if d <= 3 => factors.push(rest),
        _ => {
            return Err(PolyError::UnsupportedDomain(
                "cannot factor a root-free part of degree ≥ 4 over ℚ".into(),
            ))
        }
    }
    // all sub-multisets, deduplicated
    let mut set: HashSet<NcPoly> = HashSet::new();
    set.insert(NcPoly::one(spec, 1));
    for fac in &factors {
        let prev: Vec<NcPoly> = set.iter().cloned().collect();
        for p in prev {
            set.insert(&p * fac);
        }
    }
    Ok(set.into_iter().collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ncpoly::parse;
    use crate::scalars::FieldSpec;

    #[test]
    fn spec_examples() {
        let q = FieldSpec::rationals();
        let p = |s| parse(s, q, 2).unwrap();
        let (u, v) = factor_divides(&p("x1"), &p("x2x1x2"), 2).unwrap().unwrap();
        assert_eq!((u, v), (p("x2"), p("x2")));
        assert_eq!(factor_divides(&p("x1x1"), &p("x1x2x1"), 2).unwrap(), None);
        let (u, v) = factor_divides(&p("2"), &p("x1"), 0).unwrap().unwrap();
        assert_eq!((u, v), (p("1"), p("1/2x1")));
    }

    #[test]
    fn one_sided_quotients() {
        let f2 = FieldSpec::prime(2).unwrap();
        let p = |s| parse(s, f2, 2).unwrap();
        let g = p("x1 + x2x1");
        let h = p("x2 + 1");
        let f = &g * &h;
        assert_eq!(right_quotient(&f, &g).unwrap(), Some(h.clone()));
        assert_eq!(left_quotient(&f, &h).unwrap(), Some(g.clone()));
        // f = (x2 + 1)·x1·(x2 + 1), so h is also a left factor
        assert_eq!(right_quotient(&f, &h).unwrap(), Some(&p("x1") * &h));
        assert_eq!(right_quotient(&f, &p("x1")).unwrap(), None);
    }

    #[test]
    fn two_sided_over_f2() {
        let f2 = FieldSpec::prime(2).unwrap();
        let p = |s| parse(s, f2, 2).unwrap();
        let f = &(&p("x1 + 1") * &p("x2x1 + x2")) * &p("x2 + x1");
        let (u, v) = factor_divides(&p("x2x1 + x2"), &f, 4).unwrap().unwrap();
        assert_eq!(&(&u * &p("x2x1 + x2")) * &v, f);
        assert_eq!(factor_divides(&p("x1x1"), &p("x1x2x1 + x2"), 4).unwrap(), None);
    }

    #[test]
    fn divisor_sets() {
        let f2 = FieldSpec::prime(2).unwrap();
        let f = parse("t^2 + 1", f2, 1).unwrap();
        let mut ds: Vec<String> = divisors(&f).unwrap().iter().map(|d| d.to_string()).collect();
        ds.sort();
        assert_eq!(ds, vec!["1", "x1 + 1", "x1^2 + 1"]);
        let q = FieldSpec::rationals();
        let g = parse("t^3 - t", q, 1).unwrap();
        assert_eq!(divisors(&g).unwrap().len(), 8);
        let m = parse("x1x2", f2, 2).unwrap();
        assert_eq!(divisors(&m).unwrap().len(), 4);
        let h = parse("x1x2 + x1", f2, 2).unwrap();
        let mut ds: Vec<String> = divisors(&h).unwrap().iter().map(|d| d.to_string()).collect();
        ds.sort();
        assert_eq!(ds, vec!["1", "x1", "x1*x2 + x1", "x2 + 1"]);
    }
}
