//! Sequences of polynomials delimited by strictly increasing powers of an
//! unbordered marker word, and the codecs built on that idea.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use thiserror::Error;

use crate::ncpoly::{NcPoly, PolyError};
use crate::scalars::{FieldElem, FieldSpec};
use crate::words::{is_primitive, is_unbordered, maximal_runs, Word, WordError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BigPowersError {
    #[error("bad parameter: {0}")]
    BadParam(String),
    #[error("zero factor cannot be delimited")]
    ZeroFactor,
    #[error("base exponent must be at least 3, got {0}")]
    BadExponent(usize),
    #[error("marker occurs inside a factor or is bordered")]
    MarkerUnsafe,
    #[error("no marker run of the base exponent or longer")]
    NoMarkerRun,
    #[error("marker run exponents do not read e, e+1, …")]
    InconsistentExponents,
    #[error("coefficient tensor is not rank one")]
    NotRankOne,
    #[error("input is the zero polynomial")]
    ZeroInput,
    #[error("slot {0} is not a scalar multiple of P^i Q^i")]
    SyncMismatch(usize),
    #[error("chain broken at block {0}")]
    ChainBroken(usize),
    #[error("{0} distinct readings fit the input")]
    AmbiguousChain(usize),
    #[error(transparent)]
    Word(#[from] WordError),
    #[error(transparent)]
    Poly(#[from] PolyError),
}

type Result<T> = std::result::Result<T, BigPowersError>;

/// `a_m = x1 x2 x1 x2² … x1 x2^m`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Marker {
    m: usize,
    word: Word,
}

impl Marker {
    pub fn m(&self) -> usize {
        self.m
    }

    pub fn word(&self) -> &Word {
        &self.word
    }

    pub fn poly(&self, spec: FieldSpec, rank: usize) -> NcPoly {
        NcPoly::word(spec, rank, self.word.clone())
    }
}

pub fn marker(m: usize) -> Result<Marker> {
    if m == 0 {
        return Err(BigPowersError::BadParam("marker index must be at least 1".into()));
    }
    let mut letters = Vec::with_capacity(m * (m + 3) / 2);
    for j in 1..=m {
        letters.push(1);
        letters.extend(std::iter::repeat_n(2, j));
    }
    Ok(Marker { m, word: Word::new(letters) })
}

/// Block lengths of `x1 x2^{k1} x1 x2^{k2} …`, or None if the word has
/// another shape.
fn x2_blocks(w: &Word) -> Option<Vec<usize>> {
    let l = w.letters();
    if l.first() != Some(&1) {
        return None;
    }
    let mut blocks = Vec::new();
    for &c in l {
        match c {
            1 => blocks.push(0),
            2 => *blocks.last_mut()? += 1,
            _ => return None,
        }
    }
    Some(blocks)
}

/// `Some(m)` iff `f = α·a_m` with `α ≠ 0`.
pub fn recognize_marker(f: &NcPoly) -> Option<usize> {
    if f.num_terms() != 1 {
        return None;
    }
    let (w, _) = f.leading().ok()?;
    let blocks = x2_blocks(&w)?;
    // endpoints, recursion and uniqueness all collapse to block j having length j
    if blocks.iter().enumerate().all(|(i, &k)| k == i + 1) {
        Some(blocks.len())
    } else {
        None
    }
}

pub fn marker_ok(a: &Word, fs: &[NcPoly]) -> bool {
    if a.is_empty() || !is_primitive(a).unwrap_or(false) || !is_unbordered(a).unwrap_or(false) {
        return false;
    }
    fs.iter().all(|f| f.terms().all(|(w, _)| !a.is_subword_of(w)))
}

pub fn choose_marker(fs: &[NcPoly]) -> Marker {
    let mut m = 1;
    loop {
        let a = marker(m).expect("m ≥ 1");
        if marker_ok(&a.word, fs) {
            return a;
        }
        m += 1;
    }
}

fn check_rank(rank: usize) -> Result<()> {
    if rank < 2 {
        return Err(BigPowersError::BadParam("markers need at least two generators".into()));
    }
    Ok(())
}

/// `f_0 a^e f_1 a^{e+1} … a^{e+s} f_{s+1}`.
pub fn encode_seq(fs: &[NcPoly], e: usize, a: &Marker) -> Result<NcPoly> {
    if fs.len() < 2 {
        return Err(BigPowersError::BadParam("need at least the two outer factors".into()));
    }
    if e < 3 {
        return Err(BigPowersError::BadExponent(e));
    }
    let (spec, rank) = (fs[0].spec(), fs[0].rank());
    check_rank(rank)?;
    if fs.iter().any(|f| f.is_zero()) {
        return Err(BigPowersError::ZeroFactor);
    }
    if !marker_ok(&a.word, fs) {
        return Err(BigPowersError::MarkerUnsafe);
    }
    let mut out = fs[0].clone();
    for (i, f) in fs[1..].iter().enumerate() {
        out = out.mul_word_right(&a.word.pow(e + i)).checked_mul(f)?;
    }
    debug_assert_eq!(out.spec(), spec);
    Ok(out)
}

/// Monic factors except the last, which absorbs the product of the leading
/// coefficients.
pub fn normalize_factors(fs: &[NcPoly]) -> Result<Vec<NcPoly>> {
    let Some((last, init)) = fs.split_last() else {
        return Ok(Vec::new());
    };
    let mut out = Vec::with_capacity(fs.len());
    let mut lead = last.spec().one();
    for f in init {
        let (_, c) = f.leading().map_err(|_| BigPowersError::ZeroFactor)?;
        lead = &lead * &c;
        out.push(f.monic());
    }
    out.push(last.scale(&lead));
    Ok(out)
}

/// Split one monomial into its `s + 2` slot words. A run may be the merge of
/// several consecutive marker powers when the slots between them are empty.
fn split_monomial(w: &Word, a: &Word, e: usize) -> Result<Vec<Word>> {
    let runs = maximal_runs(a, w)?;
    if runs.exps.iter().all(|&r| r < e) {
        return Err(BigPowersError::NoMarkerRun);
    }
    let mut slots = vec![runs.gaps[0].clone()];
    let mut next = e;
    for (r, gap) in runs.exps.iter().zip(&runs.gaps[1..]) {
        let mut acc = 0;
        loop {
            acc += next;
            next += 1;
            if acc == *r {
                break;
            }
            if acc > *r {
                return Err(BigPowersError::InconsistentExponents);
            }
            slots.push(Word::empty());
        }
        slots.push(gap.clone());
    }
    Ok(slots)
}

pub fn decode_seq(f: &NcPoly, a: &Marker, e: usize) -> Result<Vec<NcPoly>> {
    if f.is_zero() {
        return Err(BigPowersError::ZeroInput);
    }
    if e < 3 {
        return Err(BigPowersError::BadExponent(e));
    }
    check_rank(f.rank())?;
    let (spec, rank) = (f.spec(), f.rank());
    let mut tensor: HashMap<Vec<Word>, FieldElem> = HashMap::new();
    let mut width = None;
    for (w, c) in f.terms() {
        let slots = split_monomial(w, &a.word, e)?;
        if *width.get_or_insert(slots.len()) != slots.len() {
            return Err(BigPowersError::InconsistentExponents);
        }
        tensor.insert(slots, c.clone());
    }
    let width = width.expect("f is nonzero");
    let supports: Vec<BTreeSet<Word>> =
        (0..width).map(|i| tensor.keys().map(|k| k[i].clone()).collect()).collect();
    let full: usize = supports.iter().map(|s| s.len()).product();
    if full != tensor.len() {
        return Err(BigPowersError::NotRankOne);
    }
    let pivot: Vec<Word> = supports.iter().map(|s| s.last().expect("nonempty").clone()).collect();
    let t_pivot = tensor[&pivot].clone();
    let inv = t_pivot.inv().expect("nonzero coefficient");
    let mut factors = Vec::with_capacity(width);
    for (i, support) in supports.iter().enumerate() {
        let mut terms = Vec::with_capacity(support.len());
        for u in support {
            let mut key = pivot.clone();
            key[i] = u.clone();
            let c = tensor[&key].clone();
            terms.push((u.clone(), if i + 1 < width { &c * &inv } else { c }));
        }
        factors.push(NcPoly::from_terms(spec, rank, terms)?);
    }
    for (key, c) in &tensor {
        let mut prod = spec.one();
        for (i, u) in key.iter().enumerate() {
            prod = &prod * &factors[i].coeff(u);
        }
        if prod != *c {
            return Err(BigPowersError::NotRankOne);
        }
    }
    Ok(factors)
}

/// `a^e PQ a^{e+1} P²Q² … PˢQˢ a^{e+s}` together with the marker it uses.
pub fn sync_gadget(p: &NcPoly, q: &NcPoly, s: usize, e: usize) -> Result<(NcPoly, Marker)> {
    for g in [p, q] {
        if g.is_zero() || g.is_constant() {
            return Err(BigPowersError::BadParam("P and Q must be non-units".into()));
        }
    }
    let fs = sync_factors(p, q, s)?;
    let a = choose_marker(&fs);
    Ok((encode_seq(&fs, e, &a)?, a))
}

fn sync_factors(p: &NcPoly, q: &NcPoly, s: usize) -> Result<Vec<NcPoly>> {
    let one = NcPoly::one(p.spec(), p.rank());
    let mut fs = vec![one.clone()];
    for i in 1..=s {
        fs.push(p.pow(i).checked_mul(&q.pow(i))?);
    }
    fs.push(one);
    Ok(fs)
}

/// Decode a synchronization gadget and return `s`.
pub fn read_sync(f: &NcPoly, p: &NcPoly, q: &NcPoly, a: &Marker, e: usize) -> Result<usize> {
    let got = decode_seq(f, a, e)?;
    let s = got.len() - 2;
    let want = sync_factors(p, q, s)?;
    for (i, (g, w)) in got.iter().zip(&want).enumerate() {
        if g.monic() != w.monic() {
            return Err(BigPowersError::SyncMismatch(i));
        }
    }
    Ok(s)
}

/// `a^p x_{t1} a^{p+1} x_{t1}x_{t2} a^{p+2} … x_{t1}…x_{tm} a^{p+m}` with
/// `a = a_m`, `m = ℓ(t)`.
pub fn encode_word_trace(t: &[u32], p: usize, spec: FieldSpec, rank: usize) -> Result<NcPoly> {
    check_rank(rank)?;
    if p < 3 {
        return Err(BigPowersError::BadExponent(p));
    }
    if t.is_empty() {
        return Err(BigPowersError::BadParam("empty tuple".into()));
    }
    if let Some(&bad) = t.iter().find(|&&x| x == 0 || x as usize > rank) {
        return Err(PolyError::BadGenerator { index: bad, rank }.into());
    }
    encode_seq(&word_trace_factors(t, spec, rank), p, &marker(t.len())?)
}

fn word_trace_factors(t: &[u32], spec: FieldSpec, rank: usize) -> Vec<NcPoly> {
    let mut fs = vec![NcPoly::one(spec, rank)];
    for k in 1..=t.len() {
        fs.push(NcPoly::word(spec, rank, Word::new(t[..k].to_vec())));
    }
    fs.push(NcPoly::one(spec, rank));
    fs
}

/// The tuple `t` and its final block `M_t`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WordTrace {
    pub t: Vec<u32>,
    pub block: Word,
}

pub fn decode_word_trace(f: &NcPoly, p: usize) -> Result<WordTrace> {
    if f.is_zero() {
        return Err(BigPowersError::ZeroInput);
    }
    if f.num_terms() != 1 {
        return Err(BigPowersError::ChainBroken(0));
    }
    let (w, _) = f.leading()?;
    let mut saw_run = false;
    let mut m = 1;
    loop {
        let a = marker(m)?;
        if a.word.len() > w.len() {
            break;
        }
        let runs = maximal_runs(&a.word, &w)?;
        if runs.exps.iter().any(|&r| r >= p) {
            saw_run = true;
        }
        let want: Vec<usize> = (p..=p + m).collect();
        if runs.exps == want && runs.gaps[0].is_empty() && runs.gaps[m + 1].is_empty() {
            return read_chain(&runs.gaps[1..=m]);
        }
        m += 1;
    }
    if saw_run {
        Err(BigPowersError::ChainBroken(0))
    } else {
        Err(BigPowersError::NoMarkerRun)
    }
}

fn read_chain(blocks: &[Word]) -> Result<WordTrace> {
    let mut prev = Word::empty();
    for (i, b) in blocks.iter().enumerate() {
        if b.len() != prev.len() + 1 || !prev.is_prefix_of(b) {
            return Err(BigPowersError::ChainBroken(i + 1));
        }
        prev = b.clone();
    }
    Ok(WordTrace { t: prev.letters().to_vec(), block: prev })
}

/// `a^{p+1} h_1 a^{p+2} h_2 … a^{p+e} h_e a^{p+e+1}` with `h_1 = α_1 M_1` and
/// `h_{i+1} = h_i + α_{i+1} M_{i+1}`.
pub fn encode_partial_sums(s: &[Vec<u32>], coeffs: &[FieldElem], p: usize, spec: FieldSpec, rank: usize) -> Result<NcPoly> {
    check_rank(rank)?;
    if p < 3 {
        return Err(BigPowersError::BadExponent(p));
    }
    if s.is_empty() || s.len() != coeffs.len() {
        return Err(BigPowersError::BadParam("need matching nonempty word and coefficient lists".into()));
    }
    let mut fs = vec![NcPoly::one(spec, rank)];
    let mut h = NcPoly::zero(spec, rank);
    for (word, c) in s.iter().zip(coeffs) {
        // a zero step leaves M_{i+1} unrecoverable
        if c.is_zero() {
            return Err(BigPowersError::ZeroFactor);
        }
        let w = Word::new(word.clone());
        if w.max_letter() as usize > rank {
            return Err(PolyError::BadGenerator { index: w.max_letter(), rank }.into());
        }
        h = h.checked_add(&NcPoly::monomial(c.clone(), w, rank))?;
        if h.is_zero() {
            return Err(BigPowersError::ZeroFactor);
        }
        fs.push(h.clone());
    }
    fs.push(NcPoly::one(spec, rank));
    let m = s.iter().map(|w| w.len()).max().unwrap_or(0).max(1);
    encode_seq(&fs, p + 1, &marker(m)?)
}

/// Recovered word sequence and the last partial sum, normalized monic: the
/// encoding fixes each block only up to a common rescaling.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PartialSums {
    pub s: Vec<Vec<u32>>,
    pub f: NcPoly,
}

pub fn decode_partial_sums(f: &NcPoly, p: usize) -> Result<PartialSums> {
    if f.is_zero() {
        return Err(BigPowersError::ZeroInput);
    }
    if p < 3 {
        return Err(BigPowersError::BadExponent(p));
    }
    let deg = f.degree().unwrap_or(0);
    let mut first_err = None;
    let mut m = 1;
    while marker(m)?.word.len() <= deg {
        match decode_partial_sums_with(f, p, m) {
            Ok(r) => return Ok(r),
            Err(err) => {
                first_err.get_or_insert(err);
            }
        }
        m += 1;
    }
    Err(first_err.unwrap_or(BigPowersError::NoMarkerRun))
}

fn decode_partial_sums_with(f: &NcPoly, p: usize, m: usize) -> Result<PartialSums> {
    let factors = decode_seq(f, &marker(m)?, p + 1)?;
    let n = factors.len();
    if n < 3 {
        return Err(BigPowersError::ChainBroken(0));
    }
    if !factors[0].is_constant() || !factors[n - 1].is_constant() {
        return Err(BigPowersError::ChainBroken(0));
    }
    let blocks = &factors[1..n - 1];
    if blocks[0].num_terms() != 1 {
        return Err(BigPowersError::ChainBroken(1));
    }
    let mut readings: Vec<Vec<Word>> = vec![vec![blocks[0].leading()?.0]];
    for (i, pair) in blocks.windows(2).enumerate() {
        let steps = step_words(&pair[0], &pair[1]);
        if steps.is_empty() {
            return Err(BigPowersError::ChainBroken(i + 2));
        }
        readings = readings
            .into_iter()
            .flat_map(|r| {
                steps.iter().map(move |w| {
                    let mut r = r.clone();
                    r.push(w.clone());
                    r
                })
            })
            .collect();
    }
    let readings: Vec<Vec<Word>> = readings
        .into_iter()
        .filter(|r| r.iter().map(|w| w.len()).max().unwrap_or(0).max(1) == m)
        .collect();
    match readings.len() {
        0 => Err(BigPowersError::ChainBroken(0)),
        1 => Ok(PartialSums {
            s: readings[0].iter().map(|w| w.letters().to_vec()).collect(),
            f: blocks[blocks.len() - 1].monic(),
        }),
        k => Err(BigPowersError::AmbiguousChain(k)),
    }
}

/// Words `M` for which `r·next − prev ∈ K^×·M` for some nonzero scalar `r`.
fn step_words(prev: &NcPoly, next: &NcPoly) -> Vec<Word> {
    let support: BTreeMap<Word, (FieldElem, FieldElem)> = prev
        .terms()
        .chain(next.terms())
        .map(|(w, _)| (w.clone(), (prev.coeff(w), next.coeff(w))))
        .collect();
    let mut out = Vec::new();
    for (cand, (cp, cn)) in &support {
        let mut ratio: Option<FieldElem> = None;
        let mut ok = true;
        for (w, (a, b)) in &support {
            if w == cand {
                continue;
            }
            // r·b = a with r ≠ 0 forces both nonzero
            if a.is_zero() || b.is_zero() {
                ok = false;
                break;
            }
            let r = a.checked_div(b).expect("nonzero");
            match &ratio {
                Some(prev_r) if *prev_r != r => {
                    ok = false;
                    break;
                }
                _ => ratio = Some(r),
            }
        }
        if !ok {
            continue;
        }
        let step_nonzero = match &ratio {
            Some(r) => !(&(r * cn) - cp).is_zero(),
            // free ratio: pick any r ≠ cp/cn
            None => true,
        };
        if step_nonzero {
            out.push(cand.clone());
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ncpoly::parse;

    fn q() -> FieldSpec {
        FieldSpec::rationals()
    }

    fn p2(s: &str) -> NcPoly {
        parse(s, q(), 2).unwrap()
    }

    #[test]
    fn markers() {
        assert_eq!(marker(1).unwrap().word().to_string(), "x1x2");
        assert_eq!(marker(2).unwrap().word().to_string(), "x1x2x1x2x2");
        assert!(marker(0).is_err());
        let a2 = marker(2).unwrap().poly(q(), 2).scale(&q().from_i64(3));
        assert_eq!(recognize_marker(&a2), Some(2));
        assert_eq!(recognize_marker(&p2("x1*x1")), None);
        assert_eq!(recognize_marker(&p2("x1*x2*x2")), None);
        for m in 1..=12 {
            assert_eq!(recognize_marker(&marker(m).unwrap().poly(q(), 2)), Some(m));
        }
    }

    #[test]
    fn marker_safety() {
        let a = marker(1).unwrap();
        assert!(marker_ok(a.word(), &[p2("x1+1")]));
        assert!(!marker_ok(a.word(), &[p2("x1*x2")]));
        assert!(!marker_ok(&Word::new(vec![1, 2, 1]), &[]));
        assert_eq!(choose_marker(&[p2("x1+1")]).m(), 1);
        assert_eq!(choose_marker(&[p2("x1*x2")]).m(), 2);
        assert_eq!(choose_marker(&[]).m(), 1);
    }

    #[test]
    fn seq_roundtrip() {
        let a = marker(1).unwrap();
        let fs = vec![p2("1"), p2("x1+1")];
        let f = encode_seq(&fs, 3, &a).unwrap();
        assert_eq!(f.num_terms(), 2);
        assert_eq!(decode_seq(&f, &a, 3).unwrap(), fs);
        let a3 = encode_seq(&[p2("1"), p2("1")], 3, &a).unwrap();
        assert_eq!(a3, a.poly(q(), 2).pow(3));
        assert_eq!(decode_seq(&a3, &a, 3).unwrap(), vec![p2("1"), p2("1")]);
        assert_eq!(decode_seq(&p2("x1"), &a, 3), Err(BigPowersError::NoMarkerRun));
        assert_eq!(encode_seq(&[p2("0"), p2("x1")], 3, &a), Err(BigPowersError::ZeroFactor));
    }

    #[test]
    fn merged_runs_in_interior() {
        // x1 + 1 in the middle puts an empty slot between a^3 and a^4
        let fs = vec![p2("2*x2"), p2("x1 + 1"), p2("x2*x2 - 1")];
        let a = choose_marker(&fs);
        let f = encode_seq(&fs, 3, &a).unwrap();
        assert_eq!(decode_seq(&f, &a, 3).unwrap(), normalize_factors(&fs).unwrap());
    }

    #[test]
    fn sync() {
        let (x1, x2) = (p2("x1"), p2("x2"));
        let (g, a) = sync_gadget(&x1, &x2, 1, 3).unwrap();
        assert_eq!(read_sync(&g, &x1, &x2, &a, 3).unwrap(), 1);
        let (g0, a0) = sync_gadget(&x1, &x2, 0, 3).unwrap();
        assert_eq!(g0, a0.poly(q(), 2).pow(3));
        assert_eq!(read_sync(&g0, &x1, &x2, &a0, 3).unwrap(), 0);
        // a^3 PQ a^5 instead of a^3 PQ a^4
        let w = a.poly(q(), 2);
        let bad = &(&w.pow(3) * &(&x1 * &x2)) * &w.pow(5);
        assert_eq!(read_sync(&bad, &x1, &x2, &a, 3), Err(BigPowersError::InconsistentExponents));
        // right shape, wrong slot content
        let fake = encode_seq(&[p2("1"), p2("x2*x1"), p2("1")], 3, &a).unwrap();
        assert_eq!(read_sync(&fake, &x1, &x2, &a, 3), Err(BigPowersError::SyncMismatch(1)));
    }

    #[test]
    fn word_trace() {
        let f = encode_word_trace(&[1], 3, q(), 2).unwrap();
        let a = marker(1).unwrap().poly(q(), 2);
        assert_eq!(f, &(&a.pow(3) * &p2("x1")) * &a.pow(4));
        assert_eq!(decode_word_trace(&f, 3).unwrap().t, vec![1]);
        let f = encode_word_trace(&[1, 2], 3, q(), 2).unwrap();
        let a = marker(2).unwrap().poly(q(), 2);
        let want = &(&(&(&a.pow(3) * &p2("x1")) * &a.pow(4)) * &p2("x1*x2")) * &a.pow(5);
        assert_eq!(f, want);
        let r = decode_word_trace(&f, 3).unwrap();
        assert_eq!(r.t, vec![1, 2]);
        assert_eq!(r.block.to_string(), "x1x2");
        let bad = &(&(&(&a.pow(3) * &p2("x1")) * &a.pow(4)) * &p2("x2*x2")) * &a.pow(5);
        assert!(matches!(decode_word_trace(&bad, 3), Err(BigPowersError::ChainBroken(_))));
        assert_eq!(decode_word_trace(&p2("x1"), 3), Err(BigPowersError::NoMarkerRun));
    }

    #[test]
    fn partial_sums() {
        let s = vec![vec![1], vec![2]];
        let c = vec![q().from_i64(2), q().from_i64(3)];
        let f = encode_partial_sums(&s, &c, 3, q(), 2).unwrap();
        let a = marker(1).unwrap().poly(q(), 2);
        let want = &(&(&(&a.pow(4) * &p2("2*x1")) * &a.pow(5)) * &p2("2*x1 + 3*x2")) * &a.pow(6);
        assert_eq!(f, want);
        let r = decode_partial_sums(&f, 3).unwrap();
        assert_eq!(r.s, s);
        assert_eq!(r.f, p2("2*x1 + 3*x2").monic());
        let one = encode_partial_sums(&[vec![2, 1]], &[q().from_i64(5)], 3, q(), 2).unwrap();
        assert_eq!(decode_partial_sums(&one, 3).unwrap().s, vec![vec![2, 1]]);
        let zero = encode_partial_sums(&s, &[q().zero(), q().one()], 3, q(), 2);
        assert_eq!(zero, Err(BigPowersError::ZeroFactor));
    }
}
