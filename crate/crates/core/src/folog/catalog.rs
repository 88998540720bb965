//! Named defining formulas over polynomial rings.
//!
//! Every entry is a fixed formula whose free variables are listed in
//! [`Entry::free`]; numeric parameters (rank, exponents, widths) are baked in
//! when the formula is built. Quantifiers carry range annotations wherever a
//! divisor or field bound exists, so evaluation over a finite field slice is
//! exact for the annotated parts.

use super::{parse_formula, FologError, Formula, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CatalogParams {
    /// Number of generators `x1..xr` (KMX).
    pub rank: usize,
    /// Power of the ideal (width entries).
    pub n: usize,
    /// Number of summands (width entries).
    pub k: usize,
    /// Exponent (NatP) or marker index (markerpair).
    pub m: usize,
    /// NatP: largest multiplicity of a prime factor of P the formula handles.
    pub mult: usize,
}

impl Default for CatalogParams {
    fn default() -> Self {
        CatalogParams { rank: 1, n: 1, k: 1, m: 1, mult: 4 }
    }
}

#[derive(Debug, Clone, Copy)]
pub struct Entry {
    pub name: &'static str,
    pub free: &'static [&'static str],
    pub params: &'static [&'static str],
    pub doc: &'static str,
}

pub const ENTRIES: &[Entry] = &[
    Entry { name: "unit", free: &["x"], params: &[], doc: "x is invertible" },
    Entry { name: "Irr", free: &["x"], params: &[], doc: "x is irreducible" },
    Entry { name: "FPmember", free: &["Q", "P"], params: &[], doc: "Q lies in K[P]" },
    Entry { name: "NatChar0", free: &["a"], params: &[], doc: "a is a natural number inside K (characteristic 0)" },
    Entry { name: "Nat", free: &["x", "a"], params: &[], doc: "x = a^n for some n, a irreducible" },
    Entry { name: "pow_add", free: &["x", "y", "z", "a"], params: &[], doc: "x = a^n, y = a^m, z = a^(n+m)" },
    Entry { name: "pow_div", free: &["x", "y", "a"], params: &[], doc: "x = a^n, y = a^m and n divides m" },
    Entry { name: "NatP", free: &["x", "P"], params: &["m", "mult"], doc: "x = P^m" },
    Entry { name: "KMX", free: &["a"], params: &["rank"], doc: "a is a scalar multiple of a monomial in x1..xr" },
    Entry { name: "markerpair", free: &["x"], params: &["m"], doc: "x is a scalar multiple of the marker a_m" },
    Entry { name: "width", free: &["y"], params: &["n", "k"], doc: "y is a sum of k products of n factors" },
    Entry { name: "W", free: &[], params: &["n", "k"], doc: "the n-th power of the ring has width exactly k" },
];

pub fn entry(name: &str) -> Result<&'static Entry> {
    ENTRIES.iter().find(|e| e.name == name).ok_or_else(|| FologError::UnknownName(name.to_string()))
}

fn bad(msg: impl Into<String>) -> FologError {
    FologError::BadParams(msg.into())
}

fn unit(v: &str) -> String {
    format!("(exists (inv :divides 1) (= (* {v} inv) 1))")
}

fn irr(v: &str) -> String {
    format!(
        "(and (forall (u1 u2 :divides {v}) (implies (= {v} (* u1 u2)) (or {} {}))) (not {}))",
        unit("u1"),
        unit("u2"),
        unit(v)
    )
}

/// `v^e` as a term; `1` for e = 0.
fn power(v: &str, e: usize) -> String {
    match e {
        0 => "1".to_string(),
        1 => v.to_string(),
        _ => format!("(* {})", vec![v; e].join(" ")),
    }
}

/// A product of generators, e.g. `x1 x2^2` as `(* x1 x2 x2)`.
fn word(letters: &[usize]) -> String {
    power_list(&letters.iter().map(|i| format!("x{i}")).collect::<Vec<_>>())
}

fn power_list(fs: &[String]) -> String {
    match fs.len() {
        0 => "1".to_string(),
        1 => fs[0].clone(),
        _ => format!("(* {})", fs.join(" ")),
    }
}

fn nat(x: &str, a: &str) -> String {
    format!("(and (forall (d :divisor-class {x}) (or {} (divides {a} d))) (divides (- {a} 1) (- {x} 1)))", unit("d"))
}

fn kmx(v: &str, gens: &[usize]) -> String {
    let alts: Vec<String> = gens.iter().map(|i| format!("(divides x{i} b)")).collect();
    format!("(or (= {v} 0) (forall (b :divisor-class {v}) (or {} {})))", unit("b"), alts.join(" "))
}

fn width(n: usize, k: usize, y: &str) -> String {
    let mut vars = Vec::new();
    let mut sum = Vec::new();
    for j in 0..k {
        let mut prod = Vec::new();
        for i in 0..n {
            let w = format!("w{}_{}", j + 1, i + 1);
            vars.push(format!("(exists ({w} :hint (augfactor:{n}:{j}:{i} {y}))"));
            prod.push(w);
        }
        sum.push(power_list(&prod));
    }
    let total = match sum.len() {
        0 => "0".to_string(),
        1 => sum.remove(0),
        _ => format!("(+ {})", sum.join(" ")),
    };
    format!("{} (= {y} {total}){}", vars.join(" "), ")".repeat(vars.len()))
}

/// `x` is `w1 · block · w2` for divisors w1, w2; `then` is evaluated with
/// `w1`, `w2` bound (under the given names).
fn occurs(block: &str, w1: &str, w2: &str, then: &str) -> String {
    format!("(forall ({w1} {w2} :divides x) (implies (= x (* {w1} {block} {w2})) {then}))")
}

fn assoc(u: &str, v: &str) -> String {
    format!("(exists (c :field) (= {u} (* c {v})))")
}

/// The marker `a_m = x1 x2 x1 x2^2 … x1 x2^m` as the unique scalar multiple
/// of a monomial in x1, x2 with the right ends whose blocks `x1 x2^j x1`
/// are each followed as in `a_m`, and in which each block occurs once.
fn markerpair(m: usize) -> Result<String> {
    if m == 0 {
        return Err(bad("markerpair needs m >= 1"));
    }
    let x2 = |j: usize| vec![2; j];
    let block = |j: usize| [vec![1], x2(j), vec![1]].concat();
    let prefix = if m == 1 { vec![1, 2] } else { vec![1, 2, 1] };
    let last = [vec![1], x2(m)].concat();
    let mut parts = vec![
        "(not (= x 0))".to_string(),
        kmx("x", &[1, 2]),
        format!("(exists (w :divides x) (= x (* {} w)))", word(&prefix)),
        format!("(exists (w :divides x) (= x (* w {})))", word(&last)),
    ];
    for j in 0..m {
        let then = if j + 1 < m {
            format!("(exists (w3 :divides x) (= w2 (* {} w3)))", word(&[x2(j + 1), vec![1]].concat()))
        } else {
            format!("(exists (c :field) (= w2 (* c {})))", word(&x2(m)))
        };
        parts.push(occurs(&word(&block(j)), "w1", "w2", &then));
    }
    for j in 1..=m {
        let b = word(&if j < m { block(j) } else { last.clone() });
        let same = format!("(and {} {})", assoc("w1", "v1"), assoc("w2", "v2"));
        parts.push(occurs(&b, "w1", "w2", &occurs(&b, "v1", "v2", &same)));
    }
    Ok(format!("(and {})", parts.join(" ")))
}

fn nat_p(m: usize, mult: usize) -> Result<String> {
    if mult == 0 {
        return Err(bad("NatP needs mult >= 1"));
    }
    // a prime b with b^e || P must satisfy b^(m e) || x
    let exact = |v: &str, e: usize| format!("(and (divides {} {v}) (not (divides {} {v})))", power("b", e), power("b", e + 1));
    let mut clauses: Vec<String> =
        (1..=mult).map(|e| format!("(implies {} {})", exact("P", e), exact("x", m * e))).collect();
    clauses.push(format!("(not (divides {} P))", power("b", mult + 1)));
    clauses.push("(implies (divides b x) (divides b P))".into());
    Ok(format!(
        "(and (forall (b :divisor-class (* x P)) (implies {} (and {}))) (divides (- P 1) (- x 1)))",
        irr("b"),
        clauses.join(" ")
    ))
}

fn text(name: &str, p: &CatalogParams) -> Result<String> {
    Ok(match name {
        "unit" => unit("x"),
        "Irr" => irr("x"),
        "FPmember" => "(forall (al :field) (exists (be :field) (divides (- P al) (- Q be))))".into(),
        "NatChar0" => format!(
            "(forall (u) (implies (not {}) (exists (v) (and (divides u v) (forall (b :field) (implies (divides (+ u b) v) (or (divides (+ u b 1) v) (= b a))))))))",
            unit("u")
        ),
        "Nat" => nat("x", "a"),
        "pow_add" => format!("(and {} {} {} (= (* x y) z))", nat("x", "a"), nat("y", "a"), nat("z", "a")),
        "pow_div" => format!("(and {} {} (divides (- x 1) (- y 1)))", nat("x", "a"), nat("y", "a")),
        "NatP" => nat_p(p.m, p.mult)?,
        "KMX" => {
            if p.rank == 0 {
                return Err(bad("KMX needs rank >= 1"));
            }
            kmx("a", &(1..=p.rank).collect::<Vec<_>>())
        }
        "markerpair" => markerpair(p.m)?,
        "width" => {
            if p.n == 0 {
                return Err(bad("width needs n >= 1"));
            }
            width(p.n, p.k, "y")
        }
        "W" => {
            if p.n == 0 || p.k == 0 {
                return Err(bad("W needs n, k >= 1"));
            }
            let psi = |k: usize| format!("(forall (y) (implies {} {}))", width(p.n, k + 1, "y"), width(p.n, k, "y"));
            format!("(and {} (not {}))", psi(p.k), psi(p.k - 1))
        }
        other => return Err(FologError::UnknownName(other.to_string())),
    })
}

/// Build a catalog formula. Free variables are those of [`Entry::free`].
pub fn catalog(name: &str, p: &CatalogParams) -> Result<Formula> {
    entry(name)?;
    parse_formula(&text(name, p)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::BTreeSet;

    #[test]
    fn free_variables_match_entries() {
        let p = CatalogParams { rank: 2, n: 2, k: 2, m: 2, mult: 2 };
        for e in ENTRIES {
            let f = catalog(e.name, &p).unwrap();
            let mut free: BTreeSet<String> = f.free_vars().into_iter().collect();
            // generator constants are symbols of the language, not variables
            free.retain(|v| !(v.starts_with('x') && v[1..].parse::<u32>().is_ok()) && v.parse::<i64>().is_err());
            let want: BTreeSet<String> = e.free.iter().map(|s| s.to_string()).collect();
            assert_eq!(free, want, "{}", e.name);
        }
    }

    #[test]
    fn errors() {
        let p = CatalogParams::default();
        assert!(matches!(catalog("Prime", &p), Err(FologError::UnknownName(_))));
        assert!(matches!(catalog("markerpair", &CatalogParams { m: 0, ..p }), Err(FologError::BadParams(_))));
        assert!(matches!(catalog("W", &CatalogParams { k: 0, ..p }), Err(FologError::BadParams(_))));
    }

    #[test]
    fn shapes() {
        let p = CatalogParams::default();
        assert_eq!(
            catalog("FPmember", &p).unwrap().to_string(),
            "(forall (al :field) (exists (be :field) (divides (- P al) (- Q be))))"
        );
        let w = catalog("width", &CatalogParams { n: 2, k: 2, ..p }).unwrap();
        assert_eq!(w.quantifier_depth(), 4);
    }
}
