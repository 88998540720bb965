use std::cell::RefCell;
use std::collections::HashMap;

use super::eval::{Domain, RangeVal, Structure};
use super::{FologError, Result, TriBool};
use crate::ncpoly::{divisors, factor_divides, parse, quot_rem, DegreeSlice, NcPoly, PolyError};
use crate::scalars::FieldSpec;

/// The free algebra `K⟨x1..xr⟩` (or `K[t]` in rank 1) seen through a finite
/// carrier. Values are genuine ring elements; only unrestricted quantifiers
/// are confined to the carrier, so they never give definite answers that a
/// larger carrier could overturn.
///
/// Symbols: numerals, `t` (rank 1), `x1..xr`, quoted polynomial literals;
/// operations `+ * -`; relations `divides` (two-sided) and `in-K`.
#[derive(Debug)]
pub struct PolyStructure {
    spec: FieldSpec,
    rank: usize,
    carrier: Vec<NcPoly>,
    non_unital: bool,
    divisor_cache: RefCell<HashMap<NcPoly, Option<Vec<NcPoly>>>>,
}

impl PolyStructure {
    /// Carrier: every polynomial of degree ≤ d over a finite field.
    pub fn slice(spec: FieldSpec, rank: usize, d: usize) -> Result<Self> {
        let carrier = DegreeSlice::new(spec, rank, d)?.elements()?;
        Ok(Self::with_carrier(spec, rank, carrier, false))
    }

    /// The augmentation ideal as a ring without unit, carrier its elements of
    /// degree ≤ d. Only `0` is available as a numeral.
    pub fn augmentation_slice(spec: FieldSpec, rank: usize, d: usize) -> Result<Self> {
        let carrier = DegreeSlice::new(spec, rank, d)?.aug_elements(d)?;
        Ok(Self::with_carrier(spec, rank, carrier, true))
    }

    /// An arbitrary finite sample as carrier, for infinite fields.
    pub fn sampled(spec: FieldSpec, rank: usize, sample: Vec<NcPoly>) -> Self {
        Self::with_carrier(spec, rank, sample, false)
    }

    fn with_carrier(spec: FieldSpec, rank: usize, carrier: Vec<NcPoly>, non_unital: bool) -> Self {
        PolyStructure { spec, rank, carrier, non_unital, divisor_cache: RefCell::new(HashMap::new()) }
    }

    pub fn spec(&self) -> FieldSpec {
        self.spec
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn carrier(&self) -> &[NcPoly] {
        &self.carrier
    }

    /// Monic divisor representatives, `None` when they cannot all be listed.
    fn divisor_classes(&self, v: &NcPoly) -> Option<Vec<NcPoly>> {
        if let Some(hit) = self.divisor_cache.borrow().get(v) {
            return hit.clone();
        }
        let ds = divisors(v).ok();
        self.divisor_cache.borrow_mut().insert(v.clone(), ds.clone());
        ds
    }

    fn scalar(&self, n: &str) -> Result<NcPoly> {
        let c = self.spec.parse_elem(n).map_err(|_| FologError::UnknownSymbol(n.to_string()))?;
        if self.non_unital && !c.is_zero() {
            return Err(FologError::UnknownSymbol(format!("{n} (the ring has no unit)")));
        }
        Ok(NcPoly::constant(c, self.rank))
    }

    fn divides(&self, u: &NcPoly, v: &NcPoly) -> Result<TriBool> {
        if v.is_zero() {
            return Ok(TriBool::True);
        }
        if u.is_zero() {
            return Ok(TriBool::False);
        }
        if self.rank == 1 {
            return Ok(TriBool::from(quot_rem(v, u)?.1.is_zero()));
        }
        let bound = v.degree().unwrap_or(0);
        match factor_divides(u, v, bound) {
            Ok(w) => Ok(TriBool::from(w.is_some())),
            Err(PolyError::UnsupportedDomain(_) | PolyError::SearchTooLarge(_)) => Ok(TriBool::Unknown),
            Err(e) => Err(e.into()),
        }
    }

    /// Hint helper `augfactor:n:j:i(y)`: factor `i` of summand `j` in the
    /// decomposition of `y` as a sum of n-fold products, or 0.
    fn aug_factor(&self, op: &str, y: &NcPoly) -> Result<Option<NcPoly>> {
        let idx: Vec<usize> = op.split(':').skip(1).map(|s| s.parse().map_err(|_| FologError::UnknownSymbol(op.into()))).collect::<Result<_>>()?;
        let [n, j, i] = idx[..] else {
            return Err(FologError::UnknownSymbol(op.into()));
        };
        let zero = NcPoly::zero(self.spec, self.rank);
        if !y.constant_term().is_zero() {
            return Ok(Some(zero));
        }
        let got = y.aug_power_decompose(n)?;
        Ok(Some(got.and_then(|s| s.get(j).and_then(|p| p.get(i)).cloned()).unwrap_or(zero)))
    }
}

impl Structure for PolyStructure {
    type Val = NcPoly;

    fn default_sort(&self) -> &str {
        "r"
    }

    fn constant(&self, name: &str) -> Result<NcPoly> {
        if name == "t" && self.rank == 1 {
            return Ok(NcPoly::var(self.spec, 1, 1));
        }
        if let Some(i) = name.strip_prefix('x').and_then(|s| s.parse::<u32>().ok()) {
            if (1..=self.rank as u32).contains(&i) {
                return Ok(NcPoly::var(self.spec, self.rank, i));
            }
        }
        if name.starts_with(|c: char| c.is_ascii_digit() || c == '-') {
            return self.scalar(name);
        }
        Err(FologError::UnknownSymbol(name.to_string()))
    }

    fn literal(&self, text: &str) -> Result<NcPoly> {
        let p = parse(text, self.spec, self.rank).map_err(|e| FologError::Syntax(e.to_string()))?;
        if self.non_unital && !p.constant_term().is_zero() {
            return Err(FologError::UnknownSymbol(format!("\"{text}\" (the ring has no unit)")));
        }
        Ok(p)
    }

    fn apply(&self, op: &str, args: &[NcPoly]) -> Result<Option<NcPoly>> {
        let zero = NcPoly::zero(self.spec, self.rank);
        let v = match (op, args) {
            ("+", _) => args.iter().try_fold(zero, |acc, a| acc.checked_add(a))?,
            ("*", [first, rest @ ..]) => rest.iter().try_fold(first.clone(), |acc, a| acc.checked_mul(a))?,
            ("-", [a]) => zero.checked_sub(a)?,
            ("-", [a, b]) => a.checked_sub(b)?,
            (op, [y]) if op.starts_with("augfactor:") => return self.aug_factor(op, y),
            _ => return Err(FologError::UnknownSymbol(format!("{op}/{}", args.len()))),
        };
        Ok(Some(v))
    }

    fn relation(&self, name: &str, args: &[NcPoly]) -> Result<TriBool> {
        match (name, args) {
            ("divides", [u, v]) => self.divides(u, v),
            ("in-K", [u]) => Ok(TriBool::from(u.degree().unwrap_or(0) == 0)),
            _ => Err(FologError::UnknownSymbol(format!("{name}/{}", args.len()))),
        }
    }

    fn domain(&self, sort: &str, range: &RangeVal<NcPoly>) -> Result<Domain<NcPoly>> {
        if sort != "r" {
            return Err(FologError::SortError(format!("no sort {sort}")));
        }
        let open_carrier = || Domain { values: self.carrier.clone(), exhaustive: false, open: true };
        let finite = self.spec.is_finite();
        Ok(match range {
            RangeVal::All => open_carrier(),
            RangeVal::Field => {
                if self.non_unital {
                    return Err(FologError::UnsupportedDomain("a ring without unit has no scalar field".into()));
                }
                match self.spec.elements() {
                    Some(es) => Domain::complete(es.into_iter().map(|c| NcPoly::constant(c, self.rank)).collect()),
                    None => Domain::partial((-3..=3).map(|n| NcPoly::from_i64(self.spec, self.rank, n)).collect()),
                }
            }
            RangeVal::DegreeAtMost(k) => {
                let inside: Vec<NcPoly> = self.carrier.iter().filter(|p| p.degree().is_none_or(|e| e <= *k)).cloned().collect();
                if !finite {
                    Domain::partial(inside)
                } else {
                    let slice = DegreeSlice::new(self.spec, self.rank, *k)?;
                    let all = if self.non_unital { slice.aug_elements(*k)? } else { slice.elements()? };
                    Domain::complete(all)
                }
            }
            RangeVal::Divides(v) | RangeVal::DivisorClass(v) if v.is_zero() => open_carrier(),
            RangeVal::DivisorClass(v) => match self.divisor_classes(v) {
                Some(ds) => Domain::complete(ds),
                None => Domain::partial(Vec::new()),
            },
            RangeVal::Divides(v) => match (self.divisor_classes(v), self.spec.elements()) {
                (Some(ds), Some(units)) => {
                    let units: Vec<_> = units.into_iter().filter(|c| !c.is_zero()).collect();
                    Domain::complete(ds.iter().flat_map(|d| units.iter().map(move |c| d.scale(c))).collect())
                }
                (Some(ds), None) => Domain::partial(ds),
                (None, _) => Domain::partial(Vec::new()),
            },
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::folog::{eval, parse_formula};

    fn f2(d: usize) -> PolyStructure {
        PolyStructure::slice(FieldSpec::prime(2).unwrap(), 1, d).unwrap()
    }

    #[test]
    fn unrestricted_quantifiers_stay_open() {
        let s = f2(2);
        let t = s.constant("t").unwrap();
        // no inverse in the carrier, but the ring is bigger than the carrier
        let inv = parse_formula("(exists (y) (= (* x y) 1))").unwrap();
        assert_eq!(eval(&s, &inv, &[("x", t.clone())]).unwrap(), TriBool::Unknown);
        // inverses divide 1, and the divisors of 1 are listed exhaustively
        let inv = parse_formula("(exists (y :divides 1) (= (* x y) 1))").unwrap();
        assert_eq!(eval(&s, &inv, &[("x", t.clone())]).unwrap(), TriBool::False);
        assert_eq!(eval(&s, &inv, &[("x", s.constant("1").unwrap())]).unwrap(), TriBool::True);
        // a counterexample inside the carrier is a genuine counterexample
        let all = parse_formula("(forall (y) (= (* y 0) y))").unwrap();
        assert_eq!(eval(&s, &all, &[]).unwrap(), TriBool::False);
    }

    #[test]
    fn symbols_and_relations() {
        let s = PolyStructure::slice(FieldSpec::prime(3).unwrap(), 2, 1).unwrap();
        let f = parse_formula("(and (divides x1 (* x2 x1 x2)) (not (divides x1 \"x2^2 + 1\")) (in-K 2) (= (- x1) (* 2 x1)))").unwrap();
        assert_eq!(eval(&s, &f, &[]).unwrap(), TriBool::True);
        assert!(matches!(eval(&s, &parse_formula("(= x3 0)").unwrap(), &[]), Err(FologError::UnboundVariable(_))));
        assert!(matches!(eval(&s, &parse_formula("(frob x1)").unwrap(), &[]), Err(FologError::UnknownSymbol(_))));
    }

    #[test]
    fn rational_ranges_are_partial() {
        let q = FieldSpec::rationals();
        let s = PolyStructure::sampled(q, 1, vec![]);
        let f = parse_formula("(forall (b :field) (= b b))").unwrap();
        assert_eq!(eval(&s, &f, &[]).unwrap(), TriBool::Unknown);
        let g = parse_formula("(exists (b :field) (= (+ b b) 4))").unwrap();
        assert_eq!(eval(&s, &g, &[]).unwrap(), TriBool::True);
    }
}
