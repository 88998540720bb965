//! Rank-1 (commutative) toolkit: Euclidean division, gcd, rational roots and
//! irreducibility verdicts.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::{NcPoly, PolyError};
use crate::scalars::FieldElem;
use crate::words::Word;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Irreducibility {
    Irreducible,
    /// Zero, a unit, or a product of two non-units.
    NotIrreducible,
    Unknown,
}

fn require_rank1(f: &NcPoly) -> Result<(), PolyError> {
    if f.rank() != 1 {
        return Err(PolyError::RankMismatch { expected: 1, got: f.rank() });
    }
    Ok(())
}

fn t_pow(k: usize) -> Word {
    Word::new(vec![1; k])
}

/// `f = q·g + r` with `deg r < deg g`.
pub fn quot_rem(f: &NcPoly, g: &NcPoly) -> Result<(NcPoly, NcPoly), PolyError> {
    require_rank1(f)?;
    require_rank1(g)?;
    let (lw, lc) = g.leading().map_err(|_| PolyError::ZeroDivisorArg)?;
    let dg = lw.len();
    let inv = lc.inv()?;
    let mut q = NcPoly::zero(f.spec(), 1);
    let mut r = f.clone();
    while let Ok((w, c)) = r.leading() {
        if w.len() < dg {
            break;
        }
        let shift = t_pow(w.len() - dg);
        let coef = &c * &inv;
        let step = NcPoly::monomial(coef, shift, 1);
        r = &r - &(&step * g);
        q = &q + &step;
    }
    Ok((q, r))
}

/// Monic gcd; `gcd(0, 0) = 0`.
pub fn gcd(f: &NcPoly, g: &NcPoly) -> Result<NcPoly, PolyError> {
    require_rank1(f)?;
    require_rank1(g)?;
    let (mut a, mut b) = (f.clone(), g.clone());
    while !b.is_zero() {
        let (_, r) = quot_rem(&a, &b)?;
        a = b;
        b = r;
    }
    Ok(a.monic())
}

fn integer_divisors(n: &BigInt) -> Vec<BigInt> {
    let n = n.abs();
    let mut out = Vec::new();
    let mut d = BigInt::one();
    while &d * &d <= n {
        if (&n % &d).is_zero() {
            out.push(d.clone());
            let e = &n / &d;
            if e != d {
                out.push(e);
            }
        }
        d += 1;
    }
    out
}

/// Distinct rational roots of a rank-1 polynomial over ℚ.
pub fn rational_roots(f: &NcPoly) -> Result<Vec<FieldElem>, PolyError> {
    require_rank1(f)?;
    if f.spec().is_finite() {
        return Err(PolyError::UnsupportedDomain("rational roots need ℚ".into()));
    }
    if f.is_zero() {
        return Err(PolyError::ZeroPolynomial);
    }
    let deg = f.degree().unwrap_or(0);
    // clear denominators into integer coefficients c_0..c_deg
    let mut lcm = BigInt::one();
    for (_, c) in f.terms() {
        lcm = lcm.lcm(c.as_rational().expect("ℚ").denom());
    }
    let mut coeffs = vec![BigInt::zero(); deg + 1];
    for (w, c) in f.terms() {
        let q = c.as_rational().expect("ℚ") * BigRational::from_integer(lcm.clone());
        coeffs[w.len()] = q.to_integer();
    }
    let low = coeffs.iter().position(|c| !c.is_zero()).expect("nonzero");
    let mut roots = Vec::new();
    if low > 0 {
        roots.push(f.spec().zero());
    }
    let c0 = &coeffs[low];
    let cn = &coeffs[deg];
    let eval = |x: &BigRational| {
        let mut acc = BigRational::zero();
        for c in coeffs.iter().rev() {
            acc = acc * x + BigRational::from_integer(c.clone());
        }
        acc
    };
    let mut seen = std::collections::BTreeSet::new();
    for p in integer_divisors(c0) {
        for q in integer_divisors(cn) {
            for sign in [1, -1] {
                let x = BigRational::new(&p * sign, q.clone());
                if seen.insert(x.clone()) && eval(&x).is_zero() {
                    roots.push(f.spec().fraction(x.numer(), x.denom())?);
                }
            }
        }
    }
    Ok(roots)
}

/// Every monic polynomial of exact degree `d` over 𝔽_p in rank 1.
pub(crate) fn monic_of_degree(f: &NcPoly, d: usize) -> Vec<NcPoly> {
    let elems = f.spec().elements().expect("finite field");
    let p = elems.len();
    let total = p.pow(d as u32);
    let mut out = Vec::with_capacity(total);
    for mut code in 0..total {
        let mut terms = vec![(t_pow(d), f.spec().one())];
        for k in 0..d {
            terms.push((t_pow(k), elems[code % p].clone()));
            code /= p;
        }
        out.push(NcPoly::from_terms(f.spec(), 1, terms).expect("rank 1 terms"));
    }
    out
}

/// Irreducibility in K[t]: exhaustive trial division over 𝔽_p; over ℚ exact
/// through degree 3 by the rational root test, else `Unknown` unless a
/// rational root exhibits a linear factor.
pub fn is_irreducible(f: &NcPoly) -> Result<Irreducibility, PolyError> {
    require_rank1(f)?;
    let deg = match f.degree() {
        None | Some(0) => return Ok(Irreducibility::NotIrreducible),
        Some(d) => d,
    };
    if deg == 1 {
        return Ok(Irreducibility::Irreducible);
    }
    if f.spec().is_finite() {
        for d in 1..=deg / 2 {
            for g in monic_of_degree(f, d) {
                if quot_rem(f, &g)?.1.is_zero() {
                    return Ok(Irreducibility::NotIrreducible);
                }
            }
        }
        return Ok(Irreducibility::Irreducible);
    }
    let has_root = !rational_roots(f)?.is_empty();
    Ok(match (has_root, deg <= 3) {
        (true, _) => Irreducibility::NotIrreducible,
        (false, true) => Irreducibility::Irreducible,
        (false, false) => Irreducibility::Unknown,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ncpoly::parse;
    use crate::scalars::FieldSpec;

    #[test]
    fn gcd_over_q() {
        let q = FieldSpec::rationals();
        let f = parse("t^2 - 1", q, 1).unwrap();
        let g = parse("t - 1", q, 1).unwrap();
        assert_eq!(gcd(&f, &g).unwrap(), g);
        let h = parse("2t + 2", q, 1).unwrap();
        assert_eq!(gcd(&f, &h).unwrap(), parse("t + 1", q, 1).unwrap());
    }

    #[test]
    fn division() {
        let q = FieldSpec::rationals();
        let f = parse("t^3 + 2t + 5", q, 1).unwrap();
        let g = parse("t^2 + 1", q, 1).unwrap();
        let (qq, r) = quot_rem(&f, &g).unwrap();
        assert_eq!(&(&qq * &g) + &r, f);
        assert!(r.degree().unwrap() < 2);
    }

    #[test]
    fn irreducibility() {
        let f2 = FieldSpec::prime(2).unwrap();
        let p = |s| parse(s, f2, 1).unwrap();
        assert_eq!(is_irreducible(&p("t^2+t+1")).unwrap(), Irreducibility::Irreducible);
        assert_eq!(is_irreducible(&p("t^2")).unwrap(), Irreducibility::NotIrreducible);
        assert_eq!(is_irreducible(&p("t^3+t+1")).unwrap(), Irreducibility::Irreducible);
        assert_eq!(is_irreducible(&p("t^4+t^2+1")).unwrap(), Irreducibility::NotIrreducible);
        let q = FieldSpec::rationals();
        let r = |s| parse(s, q, 1).unwrap();
        assert_eq!(is_irreducible(&r("t^2-2")).unwrap(), Irreducibility::Irreducible);
        assert_eq!(is_irreducible(&r("t^3-8")).unwrap(), Irreducibility::NotIrreducible);
        assert_eq!(is_irreducible(&r("t^4+1")).unwrap(), Irreducibility::Unknown);
        assert_eq!(is_irreducible(&r("4t^2-1")).unwrap(), Irreducibility::NotIrreducible);
    }

    #[test]
    fn rank_two_rejected() {
        let q = FieldSpec::rationals();
        let f = parse("x1", q, 2).unwrap();
        assert!(matches!(quot_rem(&f, &f), Err(PolyError::RankMismatch { .. })));
    }
}
