use freealg::folog::catalog::{catalog, CatalogParams};
use freealg::folog::oracle::oracle;
use freealg::folog::{eval, parse_formula, PolyStructure, TriBool};
use freealg::ncpoly::{parse, DegreeSlice};
use freealg::{FieldSpec, NcPoly};

fn fp(p: u64) -> FieldSpec {
    FieldSpec::prime(p).unwrap()
}

fn poly(s: &str, spec: FieldSpec, rank: usize) -> NcPoly {
    parse(s, spec, rank).unwrap()
}

fn all_deg(spec: FieldSpec, rank: usize, d: usize) -> Vec<NcPoly> {
    DegreeSlice::new(spec, rank, d).unwrap().elements().unwrap()
}

/// Evaluate a catalog entry and require a definite value equal to the oracle.
fn agree(s: &PolyStructure, name: &str, p: &CatalogParams, args: &[(&str, NcPoly)]) {
    let f = catalog(name, p).unwrap();
    let got = eval(s, &f, args).unwrap();
    let want = oracle(name, p, args).unwrap();
    assert_eq!(got, TriBool::from(want), "{name} {args:?}");
}

#[test]
fn examples() {
    let f2 = fp(2);
    let s = PolyStructure::slice(f2, 1, 4).unwrap();
    let d = CatalogParams::default();
    let irr = catalog("Irr", &d).unwrap();
    assert_eq!(eval(&s, &irr, &[("x", poly("t^2 + t + 1", f2, 1))]).unwrap(), TriBool::True);
    assert_eq!(eval(&s, &irr, &[("x", poly("t^2", f2, 1))]).unwrap(), TriBool::False);

    let unit = catalog("unit", &d).unwrap();
    assert_eq!(eval(&s, &unit, &[("x", poly("t", f2, 1))]).unwrap(), TriBool::False);
    let bare = parse_formula("(exists (y) (= (* x y) 1))").unwrap();
    assert_eq!(eval(&s, &bare, &[("x", poly("1", f2, 1))]).unwrap(), TriBool::True);

    let fpm = catalog("FPmember", &d).unwrap();
    let p = poly("t^2", f2, 1);
    assert_eq!(eval(&s, &fpm, &[("Q", poly("t^4 + t^2 + 1", f2, 1)), ("P", p.clone())]).unwrap(), TriBool::True);
    assert_eq!(eval(&s, &fpm, &[("Q", poly("t^3", f2, 1)), ("P", p)]).unwrap(), TriBool::False);

    let nat = catalog("Nat", &d).unwrap();
    let t = poly("t", f2, 1);
    let mut members: Vec<NcPoly> = s
        .carrier()
        .iter()
        .filter(|x| eval(&s, &nat, &[("x", (*x).clone()), ("a", t.clone())]).unwrap() == TriBool::True)
        .cloned()
        .collect();
    members.sort_by_key(|x| x.degree());
    assert_eq!(members, (0..=4).map(|n| t.pow(n)).collect::<Vec<_>>());

    let aug = PolyStructure::augmentation_slice(f2, 2, 2).unwrap();
    let w = catalog("width", &CatalogParams { n: 2, k: 5, ..d }).unwrap();
    assert_eq!(eval(&aug, &w, &[("y", poly("x1*x2", f2, 2))]).unwrap(), TriBool::True);
}

#[test]
fn char0_entry_is_unknown_over_q() {
    let q = FieldSpec::rationals();
    let sample = ["t", "t + 1", "t^2", "2", "0"].iter().map(|s| poly(s, q, 1)).collect();
    let s = PolyStructure::sampled(q, 1, sample);
    let f = catalog("NatChar0", &CatalogParams::default()).unwrap();
    for a in ["0", "3", "1/2", "-1"] {
        assert_eq!(eval(&s, &f, &[("a", poly(a, q, 1))]).unwrap(), TriBool::Unknown, "{a}");
    }
}

#[test]
fn univariate_entries_match_oracles() {
    let d = CatalogParams::default();
    for p in [2, 3] {
        let spec = fp(p);
        let s = PolyStructure::slice(spec, 1, 4).unwrap();
        let bases = [poly("t", spec, 1), poly("t + 1", spec, 1)];
        let subrings = [poly("t^2", spec, 1), poly("t^2 + t", spec, 1), poly("t", spec, 1)];
        for x in s.carrier() {
            agree(&s, "unit", &d, &[("x", x.clone())]);
            agree(&s, "Irr", &d, &[("x", x.clone())]);
            for a in &bases {
                agree(&s, "Nat", &d, &[("x", x.clone()), ("a", a.clone())]);
            }
            for pp in &subrings {
                agree(&s, "FPmember", &d, &[("Q", x.clone()), ("P", pp.clone())]);
            }
        }
    }
}

#[test]
fn power_entries_match_oracles() {
    let d = CatalogParams::default();
    for p in [2, 3] {
        let spec = fp(p);
        let s = PolyStructure::slice(spec, 1, 4).unwrap();
        let t = poly("t", spec, 1);
        let small = all_deg(spec, 1, 2);
        for x in &small {
            for y in &small {
                agree(&s, "pow_div", &d, &[("x", x.clone()), ("y", y.clone()), ("a", t.clone())]);
                let z = x * y;
                agree(&s, "pow_add", &d, &[("x", x.clone()), ("y", y.clone()), ("z", z), ("a", t.clone())]);
            }
        }
        // P squarefree, a prime power, and a mixed product
        for pp in ["t", "t^2 + 1", "t^2", "t^3 + t^2"] {
            let pp = poly(pp, spec, 1);
            for m in 0..=2 {
                let params = CatalogParams { m, mult: 3, ..d };
                for x in s.carrier() {
                    agree(&s, "NatP", &params, &[("x", x.clone()), ("P", pp.clone())]);
                }
            }
        }
    }
}

#[test]
fn monomial_entries_match_oracles() {
    let f2 = fp(2);
    let s = PolyStructure::slice(f2, 2, 2).unwrap();
    let r2 = CatalogParams { rank: 2, ..CatalogParams::default() };
    for a in s.carrier() {
        agree(&s, "KMX", &r2, &[("a", a.clone())]);
    }
    let f3 = fp(3);
    let s3 = PolyStructure::slice(f3, 2, 1).unwrap();
    for a in s3.carrier() {
        agree(&s3, "KMX", &r2, &[("a", a.clone())]);
    }
}

fn words(max: usize) -> Vec<Vec<u32>> {
    let mut out = vec![vec![]];
    let mut layer = vec![vec![]];
    for _ in 0..max {
        layer = layer.iter().flat_map(|w: &Vec<u32>| [1, 2].map(|c| [w.clone(), vec![c]].concat())).collect();
        out.extend(layer.iter().cloned());
    }
    out
}

#[test]
fn marker_formula_matches_recognizer() {
    let f2 = fp(2);
    let s = PolyStructure::slice(f2, 2, 0).unwrap();
    let mut checked = 0;
    for m in 1..=3 {
        let params = CatalogParams { m, ..CatalogParams::default() };
        let mut cases: Vec<NcPoly> =
            words(if m < 3 { 7 } else { 5 }).into_iter().map(|w| NcPoly::word(f2, 2, freealg::Word::new(w))).collect();
        for k in 1..=4 {
            cases.push(freealg::bigpowers::marker(k).unwrap().poly(f2, 2));
        }
        cases.push(poly("x1*x2 + x2", f2, 2));
        cases.push(poly("0", f2, 2));
        for x in cases {
            agree(&s, "markerpair", &params, &[("x", x)]);
            checked += 1;
        }
    }
    assert!(checked > 400);
}
