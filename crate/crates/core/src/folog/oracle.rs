//! Direct decision procedures for the catalog predicates, written without
//! the formula machinery: trial division, power enumeration, P-adic
//! expansion and term inspection.

use super::catalog::{entry, CatalogParams};
use super::{FologError, Result};
use crate::bigpowers::recognize_marker;
use crate::ncpoly::{is_irreducible, quot_rem, Irreducibility};
use crate::ncpoly::NcPoly;

fn unsupported(msg: impl Into<String>) -> FologError {
    FologError::UnsupportedDomain(msg.into())
}

fn bad(msg: impl Into<String>) -> FologError {
    FologError::BadParams(msg.into())
}

fn is_unit(f: &NcPoly) -> bool {
    f.is_constant() && !f.is_zero()
}

fn rank1(f: &NcPoly, what: &str) -> Result<()> {
    if f.rank() != 1 {
        return Err(unsupported(format!("{what} oracle works in K[t] only")));
    }
    Ok(())
}

/// `Some(n)` with `x = a^n`, for a non-constant `a`.
fn log(x: &NcPoly, a: &NcPoly) -> Option<usize> {
    let (dx, da) = (x.degree()?, a.degree()?);
    if da == 0 || dx % da != 0 {
        return None;
    }
    let n = dx / da;
    (a.pow(n) == *x).then_some(n)
}

fn irreducible_base(a: &NcPoly) -> Result<()> {
    rank1(a, "Nat")?;
    match is_irreducible(a)? {
        Irreducibility::Irreducible => Ok(()),
        Irreducibility::NotIrreducible => Err(bad("the base a must be irreducible")),
        Irreducibility::Unknown => Err(unsupported("cannot decide irreducibility of the base")),
    }
}

/// Q ∈ K[P]: every digit of the P-adic expansion of Q is a scalar.
fn in_subring(q: &NcPoly, p: &NcPoly) -> Result<bool> {
    rank1(q, "FPmember")?;
    if p.is_constant() {
        return Ok(q.is_constant());
    }
    let mut rest = q.clone();
    while !rest.is_zero() {
        let (quot, rem) = quot_rem(&rest, p)?;
        if !rem.is_constant() {
            return Ok(false);
        }
        rest = quot;
    }
    Ok(true)
}

/// Sum of at most k products of n constant-free factors. Definite when the
/// prefix decomposition already fits, or when y is outside the n-th power.
fn in_width(y: &NcPoly, n: usize, k: usize) -> Result<bool> {
    if !y.constant_term().is_zero() {
        return Ok(false);
    }
    match y.aug_power_decompose(n)? {
        None => Ok(false),
        Some(s) if s.len() <= k => Ok(true),
        Some(_) => Err(unsupported("minimal number of summands is not computed")),
    }
}

fn arg<'a>(args: &'a [(&str, NcPoly)], name: &str) -> Result<&'a NcPoly> {
    args.iter().find(|(n, _)| *n == name).map(|(_, v)| v).ok_or_else(|| bad(format!("missing argument {name}")))
}

/// Decide a catalog predicate directly. `args` binds the entry's free
/// variables.
pub fn oracle(name: &str, p: &CatalogParams, args: &[(&str, NcPoly)]) -> Result<bool> {
    entry(name)?;
    let a = |n: &str| arg(args, n);
    match name {
        "unit" => Ok(is_unit(a("x")?)),
        "Irr" => {
            let x = a("x")?;
            rank1(x, "Irr")?;
            match is_irreducible(x)? {
                Irreducibility::Irreducible => Ok(true),
                Irreducibility::NotIrreducible => Ok(false),
                Irreducibility::Unknown => Err(unsupported("irreducibility undecided")),
            }
        }
        "FPmember" => in_subring(a("Q")?, a("P")?),
        "NatChar0" => Err(unsupported("NatChar0 has no finite decision procedure")),
        "Nat" => {
            let base = a("a")?;
            irreducible_base(base)?;
            Ok(log(a("x")?, base).is_some())
        }
        "pow_add" => {
            let base = a("a")?;
            irreducible_base(base)?;
            match (log(a("x")?, base), log(a("y")?, base), log(a("z")?, base)) {
                (Some(i), Some(j), Some(k)) => Ok(i + j == k),
                _ => Ok(false),
            }
        }
        "pow_div" => {
            let base = a("a")?;
            irreducible_base(base)?;
            match (log(a("x")?, base), log(a("y")?, base)) {
                (Some(0), Some(j)) => Ok(j == 0),
                (Some(i), Some(j)) => Ok(j % i == 0),
                _ => Ok(false),
            }
        }
        "NatP" => {
            let pp = a("P")?;
            if pp.is_constant() {
                return Err(bad("P must be non-constant"));
            }
            Ok(*a("x")? == pp.pow(p.m))
        }
        "KMX" => {
            let v = a("a")?;
            if v.rank() != p.rank {
                return Err(bad("rank parameter differs from the ring"));
            }
            Ok(v.num_terms() <= 1)
        }
        "markerpair" => {
            let x = a("x")?;
            if x.rank() < 2 {
                return Err(bad("markers need two generators"));
            }
            Ok(recognize_marker(x) == Some(p.m))
        }
        "width" => in_width(a("y")?, p.n, p.k),
        "W" => Err(unsupported("width of an ideal power is not decided directly")),
        _ => unreachable!("entry() checked the name"),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ncpoly::parse;
    use crate::scalars::FieldSpec;

    fn p(s: &str, spec: FieldSpec, r: usize) -> NcPoly {
        parse(s, spec, r).unwrap()
    }

    #[test]
    fn examples() {
        let f2 = FieldSpec::prime(2).unwrap();
        let q = FieldSpec::rationals();
        let d = CatalogParams::default();
        assert!(oracle("Irr", &d, &[("x", p("t^3 + t + 1", f2, 1))]).unwrap());
        assert!(!oracle("Irr", &d, &[("x", p("t^2 + 1", f2, 1))]).unwrap());
        let r2 = CatalogParams { rank: 2, ..d };
        assert!(oracle("KMX", &r2, &[("a", p("3*x1*x2", q, 2))]).unwrap());
        assert!(!oracle("KMX", &r2, &[("a", p("x1 + x2", q, 2))]).unwrap());
        let pp = p("t^2 + 3*t", q, 1);
        assert!(oracle("FPmember", &d, &[("Q", pp.pow(2)), ("P", pp.clone())]).unwrap());
        assert!(!oracle("FPmember", &d, &[("Q", p("t^3", q, 1)), ("P", p("t^2", q, 1))]).unwrap());
        assert!(matches!(oracle("NatChar0", &d, &[("a", p("2", q, 1))]), Err(FologError::UnsupportedDomain(_))));
    }

    #[test]
    fn powers() {
        let f3 = FieldSpec::prime(3).unwrap();
        let d = CatalogParams::default();
        let t = p("t", f3, 1);
        for (x, want) in [("1", true), ("t^3", true), ("2*t^3", false), ("t^2 + t", false), ("0", false)] {
            assert_eq!(oracle("Nat", &d, &[("x", p(x, f3, 1)), ("a", t.clone())]).unwrap(), want, "{x}");
        }
        assert!(matches!(oracle("Nat", &d, &[("x", t.clone()), ("a", p("t^2", f3, 1))]), Err(FologError::BadParams(_))));
        let args = |x: &str, y: &str| vec![("x", p(x, f3, 1)), ("y", p(y, f3, 1)), ("a", t.clone())];
        assert!(oracle("pow_div", &d, &args("t^2", "t^4")).unwrap());
        assert!(!oracle("pow_div", &d, &args("t^2", "t^3")).unwrap());
        assert!(oracle("pow_div", &d, &args("1", "1")).unwrap());
        let mut add = args("t", "t^2");
        add.insert(2, ("z", p("t^3", f3, 1)));
        assert!(oracle("pow_add", &d, &add).unwrap());
    }

    #[test]
    fn width_and_markers() {
        let f2 = FieldSpec::prime(2).unwrap();
        let w = CatalogParams { n: 2, k: 1, ..CatalogParams::default() };
        assert!(oracle("width", &w, &[("y", p("x1*x2*x1 + x1*x2*x2", f2, 2))]).unwrap());
        assert!(!oracle("width", &w, &[("y", p("x1", f2, 2))]).unwrap());
        assert!(oracle("width", &w, &[("y", p("x1*x2 + x2*x1", f2, 2))]).is_err());
        let m = CatalogParams { m: 2, ..CatalogParams::default() };
        assert!(oracle("markerpair", &m, &[("x", p("x1*x2*x1*x2^2", f2, 2))]).unwrap());
        assert!(!oracle("markerpair", &m, &[("x", p("x1*x2", f2, 2))]).unwrap());
    }
}
