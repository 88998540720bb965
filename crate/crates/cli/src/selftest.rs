//! The acceptance battery. Every criterion checks library output against an
//! oracle written here, independently of the code under test.

use std::collections::BTreeMap;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};

use freealg::arithmetization::{
    component_code, decode_nested, decode_tuple, length_code, nested_tuple_code, rect_index, rect_unindex,
    tuple_code, Nested,
};
use freealg::basis::{is_basis, verify_certificate, verify_yes, BasisVerdict, Certificate};
use freealg::bigpowers::{choose_marker, decode_seq, encode_seq, Marker};
use freealg::centralizers::{centralizer_window, generator, map_centralizer};
use freealg::folog::catalog::{catalog, CatalogParams};
use freealg::folog::{eval, PolyStructure, TriBool};
use freealg::interp::{compose, sentences, InterpScheme, Verifier};
use freealg::ncpoly::{parse, DegreeSlice};
use freealg::superstructure::{decode_pair, encode_poly, odot, oplus, pair_equiv, TuplePair};
use freealg::words::{is_primitive, is_unbordered};
use freealg::{FieldElem, FieldSpec, NcPoly, Word};
use num_bigint::BigUint;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;


type Outcome = Result<String, String>;

macro_rules! ensure {
    ($cond:expr, $($fmt:tt)+) => {
        if !$cond {
            return Err(format!($($fmt)+));
        }
    };
}

fn q() -> FieldSpec {
    FieldSpec::rationals()
}

fn fp(p: u64) -> FieldSpec {
    FieldSpec::prime(p).unwrap()
}

fn poly(s: &str, spec: FieldSpec, rank: usize) -> NcPoly {
    parse(s, spec, rank).unwrap()
}

fn within(start: Instant, limit: Duration) -> Result<Duration, String> {
    let t = start.elapsed();
    if t > limit {
        return Err(format!("took {t:.2?}, limit {limit:?}"));
    }
    Ok(t)
}

// ---------------------------------------------------------------------------
// test-side polynomial arithmetic: monomial → coefficient maps

type Map = BTreeMap<Vec<u32>, FieldElem>;

fn to_map(f: &NcPoly) -> Map {
    f.terms().map(|(w, c)| (w.letters().to_vec(), c.clone())).collect()
}

fn accumulate(m: &mut Map, k: Vec<u32>, c: FieldElem) {
    let s = match m.remove(&k) {
        Some(old) => &old + &c,
        None => c,
    };
    if !s.is_zero() {
        m.insert(k, s);
    }
}

fn map_add(a: &Map, b: &Map) -> Map {
    let mut out = a.clone();
    for (k, c) in b {
        accumulate(&mut out, k.clone(), c.clone());
    }
    out
}

fn map_mul(a: &Map, b: &Map) -> Map {
    let mut out = Map::new();
    for (u, c) in a {
        for (v, d) in b {
            accumulate(&mut out, [u.as_slice(), v].concat(), c * d);
        }
    }
    out
}

fn pair_map(coeffs: &[FieldElem], mons: &[Vec<u32>]) -> Map {
    let mut out = Map::new();
    for (c, m) in coeffs.iter().zip(mons) {
        accumulate(&mut out, m.clone(), c.clone());
    }
    out
}

fn random_scalar(rng: &mut ChaCha8Rng, spec: FieldSpec) -> FieldElem {
    match spec.modulus() {
        Some(p) => spec.from_i64(rng.gen_range(0..p as i64)),
        None => {
            let n = spec.from_i64(rng.gen_range(-9..=9));
            n.checked_div(&spec.from_i64(rng.gen_range(1..=4))).unwrap()
        }
    }
}

fn random_word(rng: &mut ChaCha8Rng, rank: usize, max_len: usize) -> Vec<u32> {
    let len = rng.gen_range(0..=max_len);
    (0..len).map(|_| rng.gen_range(1..=rank as u32)).collect()
}

fn random_poly(rng: &mut ChaCha8Rng, spec: FieldSpec, rank: usize, deg: usize, terms: usize) -> NcPoly {
    let n = rng.gen_range(0..=terms);
    let ts: Vec<(Word, FieldElem)> =
        (0..n).map(|_| (Word::new(random_word(rng, rank, deg)), random_scalar(rng, spec))).collect();
    NcPoly::from_terms(spec, rank, ts).unwrap()
}

fn random_nonzero(rng: &mut ChaCha8Rng, spec: FieldSpec, rank: usize, deg: usize, terms: usize) -> NcPoly {
    loop {
        let f = random_poly(rng, spec, rank, deg, terms);
        if !f.is_zero() {
            return f;
        }
    }
}

fn shapes(rng: &mut ChaCha8Rng) -> (FieldSpec, usize) {
    let spec = if rng.gen_bool(0.5) { q() } else { fp(5) };
    (spec, rng.gen_range(2..=3))
}

// ---------------------------------------------------------------------------

fn c1_encoding_roundtrip(s: &Settings) -> Outcome {
    let start = Instant::now();
    let mut rng = s.rng(1);
    for _ in 0..s.count(1000) {
        let (spec, rank) = shapes(&mut rng);
        let f = random_poly(&mut rng, spec, rank, 6, 8);
        let back = decode_pair(&encode_poly(&f), rank).map_err(|e| e.to_string())?;
        ensure!(back == f, "decode(encode({f})) = {back}");
    }
    let t = within(start, Duration::from_secs(5))?;
    Ok(format!("{} polynomials over Q and F_5 in {t:.2?}", s.count(1000)))
}

fn c2_homomorphism(s: &Settings) -> Outcome {
    let start = Instant::now();
    let mut rng = s.rng(2);
    for _ in 0..s.count(500) {
        let (spec, rank) = shapes(&mut rng);
        let f = random_poly(&mut rng, spec, rank, 6, 8);
        let g = random_poly(&mut rng, spec, rank, 6, 8);
        let (ef, eg) = (encode_poly(&f), encode_poly(&g));
        let sum = decode_pair(&oplus(&ef, &eg).unwrap(), rank).map_err(|e| e.to_string())?;
        let prod = decode_pair(&odot(&ef, &eg).unwrap(), rank).map_err(|e| e.to_string())?;
        ensure!(to_map(&sum) == map_add(&to_map(&f), &to_map(&g)), "sum of {f} and {g}: {sum}");
        ensure!(to_map(&prod) == map_mul(&to_map(&f), &to_map(&g)), "product of {f} and {g}: {prod}");
    }
    let t = within(start, Duration::from_secs(10))?;
    Ok(format!("{} pairs in {t:.2?}", s.count(500)))
}

/// Split coefficients, add zero entries and cancelling pairs, shuffle.
fn dereduce(rng: &mut ChaCha8Rng, f: &NcPoly) -> (Vec<FieldElem>, Vec<Vec<u32>>) {
    let spec = f.spec();
    let mut entries: Vec<(FieldElem, Vec<u32>)> = Vec::new();
    for (w, c) in f.terms() {
        let pieces = rng.gen_range(1..=3);
        let mut rest = c.clone();
        for _ in 1..pieces {
            let a = random_scalar(rng, spec);
            rest = &rest - &a;
            entries.push((a, w.letters().to_vec()));
        }
        entries.push((rest, w.letters().to_vec()));
    }
    for _ in 0..rng.gen_range(0..=2) {
        entries.push((spec.zero(), random_word(rng, f.rank(), 4)));
    }
    for _ in 0..rng.gen_range(0..=2) {
        let (m, d) = (random_word(rng, f.rank(), 4), random_scalar(rng, spec));
        entries.push((-&d, m.clone()));
        entries.push((d, m));
    }
    entries.shuffle(rng);
    entries.into_iter().unzip()
}

fn c3_equivalence(s: &Settings) -> Outcome {
    let mut rng = s.rng(3);
    let mut equal = 0;
    for i in 0..s.count(500) {
        let (spec, rank) = shapes(&mut rng);
        let f = random_poly(&mut rng, spec, rank, 4, 5);
        let g = match i % 3 {
            0 => f.clone(),
            1 => &f + &NcPoly::monomial(random_scalar(&mut rng, spec), Word::new(random_word(&mut rng, rank, 4)), rank),
            _ => random_poly(&mut rng, spec, rank, 4, 5),
        };
        let (c1, m1) = dereduce(&mut rng, &f);
        let (c2, m2) = dereduce(&mut rng, &g);
        let want = pair_map(&c1, &m1) == pair_map(&c2, &m2);
        let q1 = TuplePair::new(spec, c1, m1).unwrap();
        let q2 = TuplePair::new(spec, c2, m2).unwrap();
        let by_decode = decode_pair(&q1, rank).unwrap() == decode_pair(&q2, rank).unwrap();
        ensure!(pair_equiv(&q1, &q2) == want, "pair_equiv({q1}, {q2}) should be {want}");
        ensure!(by_decode == want, "decoding {q1} and {q2}");
        equal += want as usize;
    }
    Ok(format!("{} de-reduced pairs, {equal} equivalent", s.count(500)))
}

fn product_with(fs: &[NcPoly], exps: &[usize], a: &Marker) -> NcPoly {
    let mut out = fs[0].clone();
    for (f, &k) in fs[1..].iter().zip(exps) {
        out = &out.mul_word_right(&a.word().pow(k)) * f;
    }
    out
}

fn c4_big_powers(s: &Settings) -> Outcome {
    let start = Instant::now();
    let mut rng = s.rng(4);
    let e = 3;
    let mut tampered = 0;
    for _ in 0..s.count(300) {
        let spec = if rng.gen_bool(0.5) { q() } else { fp(5) };
        let s = rng.gen_range(0..=4);
        let fs: Vec<NcPoly> = (0..s + 2).map(|_| random_nonzero(&mut rng, spec, 2, 3, 4)).collect();
        let a = choose_marker(&fs);
        let f = encode_seq(&fs, e, &a).map_err(|e| e.to_string())?;
        let exps: Vec<usize> = (0..=s).map(|i| e + i).collect();
        ensure!(product_with(&fs, &exps, &a) == f, "encoding of {fs:?}");
        let back = decode_seq(&f, &a, e).map_err(|err| format!("decoding {f}: {err}"))?;
        ensure!(back.len() == fs.len(), "decoded {} factors from {}", back.len(), fs.len());
        // every factor but the last is monic and proportional to the input
        let mut lead = spec.one();
        for (g, h) in fs.iter().zip(&back).take(fs.len() - 1) {
            let (_, c) = g.leading().unwrap();
            lead = &lead * &c;
            ensure!(*h == g.scale(&c.inv().unwrap()), "factor {g} came back as {h}");
        }
        ensure!(back[s + 1] == fs[s + 1].scale(&lead), "last factor came back as {}", back[s + 1]);
        for i in 0..=s {
            for delta in [1usize, usize::MAX] {
                let mut bad = exps.clone();
                bad[i] = bad[i].wrapping_add(delta);
                let g = product_with(&fs, &bad, &a);
                ensure!(decode_seq(&g, &a, e).is_err(), "run {i} changed to {} still decodes", bad[i]);
                tampered += 1;
            }
        }
    }
    let t = within(start, Duration::from_secs(30))?;
    Ok(format!("{} sequences, {tampered} tampered encodings rejected, {t:.2?}", s.count(300)))
}

fn brute_unbordered(w: &[u32]) -> bool {
    (1..w.len()).all(|k| w[..k] != w[w.len() - k..])
}

fn brute_primitive(w: &[u32]) -> bool {
    let n = w.len();
    (1..n).filter(|d| n % d == 0).all(|d| w.chunks(d).any(|c| c != &w[..d]))
}

fn has_pmp_split(w: &[u32]) -> bool {
    let n = w.len();
    (1..n).any(|p| 2 * p < n && w[..p] == w[n - p..])
}

fn c5_words(_s: &Settings) -> Outcome {
    let mut count = 0;
    for len in 1..=10u32 {
        for bits in 0..1u32 << len {
            let w: Vec<u32> = (0..len).map(|i| 1 + (bits >> i & 1)).collect();
            let word = Word::new(w.clone());
            let unb = brute_unbordered(&w);
            ensure!(is_unbordered(&word).unwrap() == unb, "is_unbordered({w:?})");
            ensure!(is_primitive(&word).unwrap() == brute_primitive(&w), "is_primitive({w:?})");
            ensure!(unb == (brute_primitive(&w) && !has_pmp_split(&w)), "equivalence fails at {w:?}");
            count += 1;
        }
    }
    ensure!(count == 2046, "enumerated {count} words");
    Ok(format!("{count} words"))
}

/// Words over {1, 2} of length at most d.
fn words_upto(d: usize) -> Vec<Vec<u32>> {
    let mut out = vec![vec![]];
    let mut layer = vec![vec![]];
    for _ in 0..d {
        layer = layer.iter().flat_map(|w: &Vec<u32>| [1, 2].map(|c| [w.clone(), vec![c]].concat())).collect();
        out.extend(layer.iter().cloned());
    }
    out
}

/// Dimension of the commutant of P in degree ≤ d over F_2, by elimination.
fn f2_commutant_dim(p: &[Vec<u32>], d: usize) -> usize {
    let cols = words_upto(d + p.iter().map(Vec::len).max().unwrap_or(0));
    let index: BTreeMap<&Vec<u32>, usize> = cols.iter().enumerate().map(|(i, w)| (w, i)).collect();
    let mut rows: Vec<Vec<u64>> = Vec::new();
    let width = cols.len().div_ceil(64);
    for w in words_upto(d) {
        let mut row = vec![0u64; width];
        for m in p {
            for prod in [[m.as_slice(), &w].concat(), [w.as_slice(), m].concat()] {
                let i = index[&prod];
                row[i / 64] ^= 1 << (i % 64);
            }
        }
        rows.push(row);
    }
    let mut rank = 0;
    for col in 0..cols.len() {
        let bit = |r: &Vec<u64>| r[col / 64] >> (col % 64) & 1 == 1;
        if let Some(pivot) = (rank..rows.len()).find(|&r| bit(&rows[r])) {
            rows.swap(rank, pivot);
            let pr = rows[rank].clone();
            for (r, row) in rows.iter_mut().enumerate() {
                if r != rank && bit(row) {
                    row.iter_mut().zip(&pr).for_each(|(a, b)| *a ^= b);
                }
            }
            rank += 1;
        }
    }
    words_upto(d).len() - rank
}

/// Count elements of degree ≤ d over F_2 commuting with P, by enumeration.
fn f2_commutant_count(p: &[Vec<u32>], d: usize) -> usize {
    let basis = words_upto(d);
    let f2 = fp(2);
    let pm: Map = p.iter().map(|m| (m.clone(), f2.one())).collect();
    (0u64..1 << basis.len())
        .filter(|bits| {
            let f: Map = basis.iter().enumerate().filter(|(i, _)| bits >> i & 1 == 1).map(|(_, w)| (w.clone(), f2.one())).collect();
            map_mul(&pm, &f) == map_mul(&f, &pm)
        })
        .count()
}

const BATTERY: [(&str, &str); 5] =
    [("x1", "x1"), ("x1^2", "x1"), ("x1^3", "x1"), ("x1*x2", "x1*x2"), ("x1*x2*x1*x2", "x1*x2")];

fn c6_bergman(_s: &Settings) -> Outcome {
    let d = 6;
    for spec in [q(), fp(2)] {
        for (p, g) in BATTERY {
            let (p, g) = (poly(p, spec, 2), poly(g, spec, 2));
            let w = centralizer_window(&p, d).map_err(|e| format!("{p}: {e}"))?;
            ensure!(*w.generator() == g, "generator of {p} is {}, want {g}", w.generator());
            let want = d / g.degree().unwrap() + 1;
            ensure!(w.dim() == want, "window of {p} has dimension {}, want {want}", w.dim());
        }
    }
    let f2 = fp(2);
    let mut checked = 0;
    for (p, _) in BATTERY.iter().filter(|(p, _)| poly(p, f2, 2).degree() <= Some(2)) {
        let pp = poly(p, f2, 2);
        let mons: Vec<Vec<u32>> = pp.terms().map(|(w, _)| w.letters().to_vec()).collect();
        for d in 2..=4 {
            let dim = f2_commutant_dim(&mons, d);
            let w = centralizer_window(&pp, d).map_err(|e| e.to_string())?;
            ensure!(w.dim() == dim, "{p} at d = {d}: window {} vs brute force {dim}", w.dim());
            if d <= 3 {
                let count = f2_commutant_count(&mons, d);
                ensure!(count == 1 << dim, "{p} at d = {d}: {count} commuting elements, dimension {dim}");
            }
            checked += 1;
        }
    }
    Ok(format!("battery over Q and F_2 at d = 6, {checked} brute-force windows over F_2"))
}

fn c7_catalog(_s: &Settings) -> Outcome {
    let d = CatalogParams::default();
    let (irr, nat, fpm) = (catalog("Irr", &d).unwrap(), catalog("Nat", &d).unwrap(), catalog("FPmember", &d).unwrap());
    let mut n = 0;
    for p in [2u64, 3] {
        let spec = fp(p);
        let s = PolyStructure::slice(spec, 1, 4).unwrap();
        let t = poly("t", spec, 1);
        let t2 = poly("t^2", spec, 1);
        let mut nat_members = Vec::new();
        for x in DegreeSlice::new(spec, 1, 4).unwrap().elements().unwrap() {
            let coeffs = dense(&x, p);
            let v = eval(&s, &irr, &[("x", x.clone())]).map_err(|e| e.to_string())?;
            ensure!(v == TriBool::from(trial_division_irreducible(&coeffs, p)), "Irr({x}) over F_{p} is {v}");
            let v = eval(&s, &nat, &[("x", x.clone()), ("a", t.clone())]).map_err(|e| e.to_string())?;
            ensure!(v.is_definite(), "Nat({x}) undecided");
            if v == TriBool::True {
                nat_members.push(coeffs.clone());
            }
            let v = eval(&s, &fpm, &[("Q", x.clone()), ("P", t2.clone())]).map_err(|e| e.to_string())?;
            let even = coeffs.iter().enumerate().all(|(i, &c)| i % 2 == 0 || c == 0);
            ensure!(v == TriBool::from(even), "FPmember({x}; t^2) over F_{p} is {v}");
            n += 1;
        }
        let powers: Vec<Vec<u64>> = (0..=4).map(|k| [vec![0; k], vec![1]].concat()).collect();
        nat_members.sort();
        let mut want = powers.clone();
        want.sort();
        ensure!(nat_members == want, "Nat defines {nat_members:?} over F_{p}");
    }
    Ok(format!("{n} polynomials of degree ≤ 4 over F_2 and F_3"))
}

/// Coefficients of a polynomial in K[t], constant first.
fn dense(x: &NcPoly, p: u64) -> Vec<u64> {
    let mut out = vec![0; x.degree().map_or(0, |k| k + 1)];
    for (w, c) in x.terms() {
        out[w.len()] = c.residue().unwrap() % p;
    }
    out
}

fn rem_mod(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let mut r = a.to_vec();
    let lead_inv = (1..p).find(|i| i * b[b.len() - 1] % p == 1).unwrap();
    while r.len() >= b.len() {
        let c = r[r.len() - 1] * lead_inv % p;
        let shift = r.len() - b.len();
        for (i, &bi) in b.iter().enumerate() {
            r[shift + i] = (r[shift + i] + p * p - c * bi % p) % p;
        }
        while r.last() == Some(&0) {
            r.pop();
        }
    }
    r
}

fn trial_division_irreducible(f: &[u64], p: u64) -> bool {
    let deg = f.len().saturating_sub(1);
    if deg == 0 {
        return false;
    }
    for k in 1..=deg / 2 {
        for code in 0..p.pow(k as u32) {
            let mut g: Vec<u64> = (0..k).map(|i| code / p.pow(i as u32) % p).collect();
            g.push(1);
            if rem_mod(f, &g, p).is_empty() {
                return false;
            }
        }
    }
    true
}

fn c8_translation(s: &Settings) -> Outcome {
    let z2 = InterpScheme::fixture("z2_in_z4").map_err(|e| e.to_string())?;
    let composite = compose(&z2, &InterpScheme::fixture("z4_in_z8").unwrap()).map_err(|e| e.to_string())?;
    let mut total = 0;
    let mut rng = s.rng(8);
    let random: Vec<_> = (0..s.count(50)).map(|_| sentences::random_sentence(&mut rng, 3)).collect();
    // the composite's equivalence nests two witnesses, so quick runs stop at depth 2 there
    let depth = if s.quick { 2 } else { 3 };
    for (scheme, quants) in [(&z2, 3), (&composite, depth)] {
        let b = scheme.model().unwrap();
        let v = Verifier::new(scheme, &b).map_err(|e| e.to_string())?;
        ensure!(v.quotient().size() == 2, "{} has {} classes", scheme.name, v.quotient().size());
        for phi in random.iter().chain(&sentences::small_sentences(quants)) {
            let r = v.check(phi).map_err(|e| format!("{phi}: {e}"))?;
            ensure!(r.agree && r.source_value.is_definite(), "{}: {phi}: {r:?}", scheme.name);
            total += 1;
        }
    }
    Ok(format!("{total} sentences on two schemes, {} of them random", 2 * random.len()))
}

fn c9_centralizer_iso(s: &Settings) -> Outcome {
    let spec = q();
    let mut rng = s.rng(9);
    let battery: Vec<NcPoly> = BATTERY.iter().map(|(p, _)| poly(p, spec, 2)).collect();
    let one = NcPoly::one(spec, 2);
    let mut samples = 0;
    for p in &battery {
        for qq in &battery {
            let (gp, gq) = (generator(p).unwrap(), generator(qq).unwrap());
            let (dp, dq) = (gp.degree().unwrap(), gq.degree().unwrap());
            let map = |f: &NcPoly| map_centralizer(p, qq, f, 24).map_err(|e| e.to_string());
            let back = |f: &NcPoly| map_centralizer(qq, p, f, 24).map_err(|e| e.to_string());
            ensure!(map(&one)? == one, "map_{{{p},{qq}}}(1) ≠ 1");
            let k = 3;
            let wp = centralizer_window(p, k * dp).unwrap();
            let wq = centralizer_window(qq, k * dq).unwrap();
            for (b, c) in wp.basis().iter().zip(wq.basis()) {
                ensure!(map(b)? == *c, "basis element {b} of C({p}) maps to {}, want {c}", map(b)?);
            }
            let random = |rng: &mut ChaCha8Rng| {
                let alphas: Vec<FieldElem> = (0..=k).map(|_| random_scalar(rng, spec)).collect();
                alphas.iter().enumerate().fold(NcPoly::zero(spec, 2), |acc, (i, a)| &acc + &gp.pow(i).scale(a))
            };
            for _ in 0..s.count(8) {
                let (f, h) = (random(&mut rng), random(&mut rng));
                ensure!(&(p * &f) == &(&f * p), "sample {f} is not in C({p})");
                let (mf, mh) = (map(&f)?, map(&h)?);
                ensure!(qq * &mf == &mf * qq, "image {mf} does not commute with {qq}");
                ensure!(map(&(&f + &h))? == &mf + &mh, "not additive at {f}, {h}");
                ensure!(map(&(&f * &h))? == &mf * &mh, "not multiplicative at {f}, {h}");
                ensure!(back(&mf)? == f, "round trip of {f} through C({qq})");
                samples += 1;
            }
        }
    }
    Ok(format!("25 pairs, {samples} random elements"))
}

const N: usize = 3;
type Mat = [[u64; N]; N];

fn mat_mul(a: &Mat, b: &Mat) -> Mat {
    let mut c = [[0; N]; N];
    for i in 0..N {
        for j in 0..N {
            c[i][j] = (0..N).map(|k| a[i][k] * b[k][j]).sum::<u64>() % 5;
        }
    }
    c
}

/// Evaluate a polynomial over F_5 at 3×3 matrices.
fn mat_eval(p: &NcPoly, at: &[Mat]) -> Mat {
    let mut id = [[0; N]; N];
    (0..N).for_each(|i| id[i][i] = 1);
    let mut out = [[0; N]; N];
    for (w, c) in p.terms() {
        let c = c.residue().unwrap();
        let m = w.letters().iter().fold(id, |acc, &a| mat_mul(&acc, &at[a as usize - 1]));
        for i in 0..N {
            for j in 0..N {
                out[i][j] = (out[i][j] + c * m[i][j]) % 5;
            }
        }
    }
    out
}

fn random_mat(rng: &mut ChaCha8Rng) -> Mat {
    let mut m = [[0; N]; N];
    m.iter_mut().flatten().for_each(|x| *x = rng.gen_range(0..5));
    m
}

/// Inverse checked by evaluating both compositions at random matrices.
fn inverse_holds(rng: &mut ChaCha8Rng, v: &[NcPoly], inv: &[NcPoly]) -> bool {
    (0..4).all(|_| {
        let m = [random_mat(rng), random_mat(rng)];
        let vm: Vec<Mat> = v.iter().map(|p| mat_eval(p, &m)).collect();
        let gm: Vec<Mat> = inv.iter().map(|p| mat_eval(p, &m)).collect();
        (0..2).all(|i| mat_eval(&inv[i], &vm) == m[i] && mat_eval(&v[i], &gm) == m[i])
    })
}

fn certificate_holds(rng: &mut ChaCha8Rng, v: &[NcPoly], cert: &Certificate) -> bool {
    match cert {
        Certificate::Dependence { words, coeffs } => {
            if coeffs.iter().all(FieldElem::is_zero) {
                return false;
            }
            let rel = words.iter().zip(coeffs).fold(NcPoly::zero(v[0].spec(), 2), |acc, (w, c)| {
                let img = w.letters().iter().fold(NcPoly::one(v[0].spec(), 2), |a, &l| &a * &v[l as usize - 1]);
                &acc + &img.scale(c)
            });
            (0..4).all(|_| {
                let m = [random_mat(rng), random_mat(rng)];
                mat_eval(&rel, &m) == [[0; N]; N]
            })
        }
        Certificate::LinearPartSingular { rank, missing } => {
            // degree-1 coefficient rows of V over F_5
            let rows: Vec<[u64; 2]> = v
                .iter()
                .map(|p| [1u32, 2].map(|i| p.coeff(&Word::letter(i)).residue().unwrap()))
                .collect();
            let det = (rows[0][0] * rows[1][1] + 25 - rows[0][1] * rows[1][0] % 5) % 5;
            let lin_rank = if det != 0 { 2 } else if rows.iter().flatten().any(|&c| c != 0) { 1 } else { 0 };
            let m = *missing as usize - 1;
            // x_missing is outside the row span
            let spans = match lin_rank {
                0 => false,
                1 => {
                    let r = rows.iter().find(|r| r.iter().any(|&c| c != 0)).unwrap();
                    r[1 - m] == 0
                }
                _ => true,
            };
            *rank == lin_rank && !spans
        }
    }
}

fn random_automorphism(rng: &mut ChaCha8Rng, spec: FieldSpec) -> Vec<NcPoly> {
    let mut v: Vec<NcPoly> = (1..=2).map(|j| NcPoly::var(spec, 2, j)).collect();
    for _ in 0..rng.gen_range(1..=3) {
        let i = rng.gen_range(1..=2u32);
        let y = NcPoly::var(spec, 2, 3 - i);
        let alpha = spec.from_i64(rng.gen_range(1..5));
        let (c1, c2) = (spec.from_i64(rng.gen_range(0..5)), spec.from_i64(rng.gen_range(0..5)));
        let moved = &(&NcPoly::var(spec, 2, i).scale(&alpha) + &y.scale(&c1)) + &y.pow(2).scale(&c2);
        let e: Vec<NcPoly> = (1..=2u32).map(|j| if j == i { moved.clone() } else { NcPoly::var(spec, 2, j) }).collect();
        v = v.iter().map(|p| p.substitute(&e).unwrap()).collect();
    }
    v
}

fn c10_basis(s: &Settings) -> Outcome {
    let f5 = fp(5);
    let mut rng = s.rng(10);
    let tuple = |a: &str, b: &str| vec![poly(a, f5, 2), poly(b, f5, 2)];
    let mut cases: Vec<(Vec<NcPoly>, &str)> =
        vec![(tuple("x1", "x2"), "yes"), (tuple("x1 + x2^2", "x2"), "yes"), (tuple("x1*x2", "x2*x1"), "no"), (tuple("x1", "x1"), "no")];
    for _ in 0..s.count(100) {
        cases.push((random_automorphism(&mut rng, f5), "yes"));
    }
    for (v, want) in &cases {
        let verdict = is_basis(v, 8).map_err(|e| e.to_string())?;
        ensure!(verdict.label() == *want, "{v:?}: {verdict:?}");
        match &verdict {
            BasisVerdict::Yes { inverse, .. } => {
                ensure!(verify_yes(v, &verdict).unwrap(), "{v:?}: verdict fails its own check");
                ensure!(inverse_holds(&mut rng, v, inverse), "{v:?}: inverse {inverse:?} fails at matrices");
            }
            BasisVerdict::No(cert) => {
                ensure!(verify_certificate(v, cert).unwrap(), "{v:?}: certificate fails its own check");
                ensure!(certificate_holds(&mut rng, v, cert), "{v:?}: certificate {cert:?} fails independently");
            }
            BasisVerdict::Inconclusive { .. } => unreachable!(),
        }
    }
    Ok(format!("{} tuples over F_5", cases.len()))
}

fn c11_width(s: &Settings) -> Outcome {
    let mut rng = s.rng(11);
    let mut members = 0;
    let mut others = 0;
    while members < s.count(200) {
        let spec = if rng.gen_bool(0.5) { q() } else { fp(5) };
        let n = rng.gen_range(1..=4);
        // a member of (A⁰)ⁿ: a sum of products of n constant-free factors
        let mut f = NcPoly::zero(spec, 2);
        for _ in 0..rng.gen_range(1..=3) {
            let prod = (0..n).fold(NcPoly::one(spec, 2), |acc, _| &acc * &random_nonzero(&mut rng, spec, 2, 2, 3).without_constant());
            f = &f + &prod;
        }
        let parts = f.aug_power_decompose(n).map_err(|e| e.to_string())?;
        let Some(parts) = parts else { return Err(format!("{f} rejected for n = {n}")) };
        ensure!(parts.len() <= 1 << n, "{} summands for {f}, n = {n}", parts.len());
        let mut sum = Map::new();
        for factors in &parts {
            ensure!(factors.len() == n, "summand with {} factors", factors.len());
            ensure!(factors.iter().all(|g| g.constant_term().is_zero()), "factor with a constant term in {f}");
            let prod = factors.iter().fold(to_map(&NcPoly::one(spec, 2)), |acc, g| map_mul(&acc, &to_map(g)));
            sum = map_add(&sum, &prod);
        }
        ensure!(sum == to_map(&f), "summands of {f} do not re-sum");
        members += 1;
        // membership verdicts on arbitrary polynomials
        let g = random_poly(&mut rng, spec, 2, 5, 5);
        if !g.constant_term().is_zero() {
            ensure!(g.aug_power_decompose(n).is_err(), "{g} has a constant term");
            continue;
        }
        let min = g.terms().map(|(w, _)| w.len()).min();
        let inside = min.is_none_or(|m| m >= n);
        ensure!(g.aug_power_decompose(n).unwrap().is_some() == inside, "membership of {g} in power {n}");
        others += 1;
    }
    Ok(format!("{members} members decomposed, {others} membership verdicts"))
}

fn random_big(rng: &mut ChaCha8Rng) -> BigUint {
    match rng.gen_range(0..3) {
        0 => BigUint::from(rng.gen_range(0u32..5)),
        1 => BigUint::from(rng.gen::<u32>()),
        _ => BigUint::from(rng.gen::<u64>()) * BigUint::from(rng.gen::<u64>()),
    }
}

fn c12_arithmetization(s: &Settings) -> Outcome {
    for p in 1..=6 {
        for qq in 1..=6 {
            let mut seen = vec![false; p * qq + 1];
            for x in 1..=p {
                for y in 1..=qq {
                    let r = rect_index(p, qq, x, y).map_err(|e| e.to_string())?;
                    ensure!((1..=p * qq).contains(&r) && !seen[r], "rect_index({p},{qq},{x},{y}) = {r}");
                    seen[r] = true;
                    ensure!(rect_unindex(p, qq, r).unwrap() == (x, y), "rect_unindex({p},{qq},{r})");
                }
            }
        }
    }
    let mut rng = s.rng(12);
    let n = s.count(1000);
    for _ in 0..n {
        let s: Vec<BigUint> = (0..rng.gen_range(0..6)).map(|_| random_big(&mut rng)).collect();
        let c = tuple_code(&s);
        ensure!(decode_tuple(&c).map_err(|e| e.to_string())? == s, "tuple {s:?}");
        ensure!(length_code(&c).unwrap() == s.len(), "length of {s:?}");
        for (i, x) in s.iter().enumerate() {
            ensure!(component_code(&c, i + 1).unwrap() == *x, "component {} of {s:?}", i + 1);
        }
        let nested: Vec<Nested> = (0..rng.gen_range(0..5))
            .map(|_| {
                if rng.gen_bool(0.5) {
                    Nested::Atom(random_big(&mut rng))
                } else {
                    Nested::Tuple((0..rng.gen_range(0..4)).map(|_| random_big(&mut rng)).collect())
                }
            })
            .collect();
        ensure!(decode_nested(&nested_tuple_code(&nested)).map_err(|e| e.to_string())? == nested, "nested {nested:?}");
    }
    Ok(format!("rect_index on p, q ≤ 6; {n} tuples and {n} nested tuples"))
}


/// Seed and size of a battery run.
#[derive(Debug, Clone, Copy)]
pub struct Settings {
    pub seed: u64,
    /// Fifth-size samples and a shallower sweep on the composite scheme.
    pub quick: bool,
}

impl Default for Settings {
    fn default() -> Self {
        Settings { seed: 0, quick: false }
    }
}

impl Settings {
    fn rng(&self, criterion: u64) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(self.seed.wrapping_add(criterion))
    }

    fn count(&self, n: usize) -> usize {
        if self.quick {
            n.div_ceil(5)
        } else {
            n
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct CriterionReport {
    pub id: usize,
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
    pub millis: u128,
}

impl std::fmt::Display for CriterionReport {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let status = if self.passed { "PASS" } else { "FAIL" };
        write!(f, "criterion {:>2} {status}  {}: {} [{} ms]", self.id, self.name, self.detail, self.millis)
    }
}

type Criterion = (&'static str, fn(&Settings) -> Outcome);

const CRITERIA: [Criterion; 12] = [
    ("encoding roundtrip", c1_encoding_roundtrip),
    ("encoding homomorphism", c2_homomorphism),
    ("pair equivalence", c3_equivalence),
    ("big-powers roundtrip", c4_big_powers),
    ("unbordered words", c5_words),
    ("centralizer windows", c6_bergman),
    ("catalog vs oracles", c7_catalog),
    ("interpretation translation", c8_translation),
    ("centralizer isomorphism", c9_centralizer_iso),
    ("basis verdicts", c10_basis),
    ("width decomposition", c11_width),
    ("arithmetization", c12_arithmetization),
];

pub fn criterion_count() -> usize {
    CRITERIA.len()
}

/// Run one criterion (numbered from 1). Panics become failures.
pub fn run_one(id: usize, settings: &Settings) -> Option<CriterionReport> {
    let (name, check) = *CRITERIA.get(id.checked_sub(1)?)?;
    let start = Instant::now();
    let outcome = catch_unwind(AssertUnwindSafe(|| check(settings))).unwrap_or_else(|e| {
        let msg = e.downcast_ref::<String>().cloned().or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()));
        Err(format!("panicked: {}", msg.unwrap_or_default()))
    });
    let (passed, detail) = match outcome {
        Ok(d) => (true, d),
        Err(d) => (false, d),
    };
    Some(CriterionReport { id, name, passed, detail, millis: start.elapsed().as_millis() })
}

pub fn run_all(settings: &Settings) -> Vec<CriterionReport> {
    (1..=CRITERIA.len()).filter_map(|id| run_one(id, settings)).collect()
}
