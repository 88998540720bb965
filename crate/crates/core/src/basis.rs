//! Rank witnesses and free-basis verdicts in a degree window.

use std::fmt;

use thiserror::Error;

use crate::linalg::{rref, solve, LinearSpan};
use crate::ncpoly::{NcPoly, PolyError};
use crate::scalars::{FieldElem, FieldSpec};
use crate::words::Word;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BasisError {
    #[error("tuple has {got} entries or mixed ranks, expected {expected}")]
    RankMismatch { expected: usize, got: usize },
    #[error("no split a = a' + α within degree {0}")]
    NoSplit(usize),
    #[error("split is not unique: 1 lies in the right ideal")]
    NotUnique,
    #[error(transparent)]
    Poly(#[from] PolyError),
}

type Result<T> = std::result::Result<T, BasisError>;

fn common_shape(v: &[NcPoly]) -> Result<(FieldSpec, usize)> {
    let first = v.first().ok_or(BasisError::RankMismatch { expected: 1, got: 0 })?;
    let (spec, rank) = (first.spec(), first.rank());
    if v.iter().any(|p| p.spec() != spec || p.rank() != rank) {
        return Err(BasisError::RankMismatch { expected: rank, got: v.len() });
    }
    Ok((spec, rank))
}

fn constant_free(v: &[NcPoly]) -> bool {
    v.iter().all(|p| p.constant_term().is_zero() && !p.is_zero())
}

/// `a = a' + α` with `a' = Σ v_i c_i`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Split {
    pub a_prime: NcPoly,
    pub alpha: FieldElem,
    pub cofactors: Vec<NcPoly>,
}

/// Polynomials `v_i·w` for every word `w` of degree at most `d`.
fn right_multiples(v: &[NcPoly], rank: usize, d: usize) -> Vec<(usize, Word, NcPoly)> {
    let words = Word::all_up_to(rank as u32, d);
    let mut out = Vec::with_capacity(v.len() * words.len());
    for (i, p) in v.iter().enumerate() {
        for w in &words {
            out.push((i, w.clone(), p.mul_word_right(w)));
        }
    }
    out
}

fn coordinates(polys: &[NcPoly], target: &NcPoly) -> (Vec<Vec<FieldElem>>, Vec<FieldElem>) {
    let mut words: Vec<Word> = polys.iter().chain([target]).flat_map(|p| p.terms().map(|(w, _)| w.clone())).collect();
    words.sort();
    words.dedup();
    let a = words.iter().map(|w| polys.iter().map(|p| p.coeff(w)).collect()).collect();
    let b = words.iter().map(|w| target.coeff(w)).collect();
    (a, b)
}

pub fn split_unit(a: &NcPoly, v: &[NcPoly], d: usize) -> Result<Split> {
    let (spec, rank) = common_shape(v)?;
    if a.rank() != rank || a.spec() != spec {
        return Err(BasisError::RankMismatch { expected: rank, got: a.rank() });
    }
    let gens = right_multiples(v, rank, d);
    let mut cols: Vec<NcPoly> = gens.iter().map(|(_, _, p)| p.clone()).collect();
    cols.push(NcPoly::one(spec, rank));
    let (m, b) = coordinates(&cols, a);
    let x = solve(spec, &m, &b, cols.len()).ok_or(BasisError::NoSplit(d))?;
    let one_cols = &cols[..cols.len() - 1];
    let (m1, b1) = coordinates(one_cols, &NcPoly::one(spec, rank));
    if solve(spec, &m1, &b1, one_cols.len()).is_some() {
        return Err(BasisError::NotUnique);
    }
    let mut cofactors = vec![NcPoly::zero(spec, rank); v.len()];
    for ((i, w, _), c) in gens.iter().zip(&x) {
        if !c.is_zero() {
            cofactors[*i] = &cofactors[*i] + &NcPoly::monomial(c.clone(), w.clone(), rank);
        }
    }
    let alpha = x.last().expect("constant column").clone();
    let a_prime = a - &NcPoly::constant(alpha.clone(), rank);
    Ok(Split { a_prime, alpha, cofactors })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Check {
    Pass,
    Fail(String),
    Inconclusive(String),
}

impl Check {
    pub fn is_pass(&self) -> bool {
        matches!(self, Check::Pass)
    }

    pub fn is_fail(&self) -> bool {
        matches!(self, Check::Fail(_))
    }
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Check::Pass => write!(f, "pass"),
            Check::Fail(why) => write!(f, "fail: {why}"),
            Check::Inconclusive(why) => write!(f, "inconclusive: {why}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RankWitnessReport {
    /// φ1..φ4 in order.
    pub checks: [Check; 4],
    /// Dimension of the degree-≤d truncation of `𝔸 / I_V²`.
    pub quotient_dim: usize,
    /// Dimension spanned there by `1, v_1, …, v_n`.
    pub span_dim: usize,
}

/// Membership in `span(gens·w : deg w ≤ d) (+ K)`. A miss is only a proof
/// of non-membership when the lowest-degree argument applies.
struct Ideal<'a> {
    gens: &'a [NcPoly],
    with_one: bool,
    d: usize,
    span: LinearSpan,
}

impl<'a> Ideal<'a> {
    fn new(gens: &'a [NcPoly], with_one: bool, d: usize) -> Option<Self> {
        let first = gens.first()?;
        let mut span = LinearSpan::new();
        for (_, _, p) in right_multiples(gens, first.rank(), d) {
            span.insert(&p);
        }
        if with_one {
            span.insert(&NcPoly::one(first.spec(), first.rank()));
        }
        Some(Ideal { gens, with_one, d, span })
    }

    fn check(&self, target: &NcPoly) -> Check {
        if self.span.contains(target) {
            return Check::Pass;
        }
        match graded_miss(target, self.gens, self.with_one) {
            Some(k) => Check::Fail(format!("{target} is unreachable in degrees ≤ {k}")),
            None => Check::Inconclusive(format!("{target} not reached with cofactors of degree ≤ {}", self.d)),
        }
    }
}

/// For constant-free generators, the degree-≤k part of `Σ g_i c_i` only sees
/// the degree-<k part of each `c_i`. Returns `k = deg target` when even the
/// truncated system has no solution.
fn graded_miss(target: &NcPoly, gens: &[NcPoly], with_one: bool) -> Option<usize> {
    if !constant_free(gens) {
        return None;
    }
    let k = target.degree()?;
    let rank = target.rank();
    let mut span = LinearSpan::new();
    if let Some(c) = k.checked_sub(1) {
        for (_, _, p) in right_multiples(gens, rank, c) {
            span.insert(&p.truncate(k));
        }
    }
    if with_one {
        span.insert(&NcPoly::one(target.spec(), rank));
    }
    (!span.contains(target)).then_some(k)
}

fn first_failure(checks: impl IntoIterator<Item = Check>) -> Check {
    let mut pending = None;
    for c in checks {
        match c {
            Check::Pass => {}
            Check::Fail(_) => return c,
            Check::Inconclusive(_) => {
                pending.get_or_insert(c);
            }
        }
    }
    pending.unwrap_or(Check::Pass)
}

pub fn rank_witness_check(v: &[NcPoly], d: usize) -> Result<RankWitnessReport> {
    let (spec, rank) = common_shape(v)?;
    let n = v.len();
    let letters: Vec<NcPoly> = (1..=rank as u32).map(|i| NcPoly::var(spec, rank, i)).collect();
    let words = Word::all_up_to(rank as u32, d);

    // φ1: every element splits, and the split is unique
    let mut uniq = Check::Pass;
    let mut span = LinearSpan::new();
    for (i, w, p) in right_multiples(v, rank, d).into_iter() {
        if !span.insert(&p) {
            uniq = Check::Fail(format!("v{}·{w} is a combination of the other cofactor images", i + 1));
            break;
        }
    }
    if uniq.is_pass() && !span.insert(&NcPoly::one(spec, rank)) {
        uniq = Check::Fail("1 lies in the right ideal".into());
    }
    let with_one = Ideal::new(v, true, d).expect("nonempty");
    let exist = first_failure(words.iter().map(|w| with_one.check(&NcPoly::word(spec, rank, w.clone()))));
    let phi1 = first_failure([uniq, exist]);

    // φ2: left multiplication by a generator stays in I_V
    let right = Ideal::new(v, false, d).expect("nonempty");
    let phi2 = first_failure(letters.iter().flat_map(|x| v.iter().map(move |p| x * p)).map(|t| right.check(&t)).collect::<Vec<_>>());

    // φ3: Σ v_i v_j 𝔸 is two-sided and contains v_i x v_j
    let squares: Vec<NcPoly> = v.iter().flat_map(|a| v.iter().map(move |b| a * b)).collect();
    let mut targets = Vec::new();
    for x in &letters {
        for s in &squares {
            targets.push(x * s);
        }
        for a in v {
            for b in v {
                targets.push(&(a * x) * b);
            }
        }
    }
    let d3 = d.saturating_sub(1);
    let sq = Ideal::new(&squares, false, d3).expect("nonempty");
    let phi3 = first_failure(targets.iter().map(|t| sq.check(t)));

    // φ4: 𝔸 / I_V² is spanned by 1, v_1, …, v_n and has dimension n + 1
    let mut ideal = LinearSpan::new();
    for (_, _, p) in right_multiples(&squares, rank, d) {
        ideal.insert(&p.truncate(d));
    }
    let quotient_dim = words.len() - ideal.dim();
    let mut with_v = ideal.clone();
    let mut span_dim = 0;
    for p in std::iter::once(NcPoly::one(spec, rank)).chain(v.iter().map(|p| p.truncate(d))) {
        if with_v.insert(&p) {
            span_dim += 1;
        }
    }
    let phi4 = if quotient_dim > n + 1 {
        // truncation maps 𝔸/I_V² onto this quotient, so the true dimension is at least as large
        Check::Fail(format!("quotient dimension {quotient_dim} > {}, images of 1 and V span {span_dim}", n + 1))
    } else if quotient_dim == n + 1 && span_dim == n + 1 {
        Check::Pass
    } else {
        Check::Inconclusive(format!("quotient dimension {quotient_dim} within degree {d}"))
    };
    Ok(RankWitnessReport { checks: [phi1, phi2, phi3, phi4], quotient_dim, span_dim })
}

/// Why a tuple is not a free basis.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Certificate {
    /// `Σ coeffs[k] · words[k](V) = 0` with some coefficient nonzero.
    Dependence { words: Vec<Word>, coeffs: Vec<FieldElem> },
    /// After removing constant terms the linear parts span only `rank`
    /// dimensions, so some generator is missing from the degree-1 part of the
    /// subalgebra generated by V.
    LinearPartSingular { rank: usize, missing: u32 },
}

/// One elementary reduction `v_target ← v_target − coeff · v_source^power`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Step {
    pub target: usize,
    pub source: usize,
    pub coeff: FieldElem,
    pub power: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum BasisVerdict {
    /// `g∘V` and `V∘g` are the identity. When `chain` is nonempty it takes
    /// V to an affine tuple, and both compositions were evaluated along it.
    Yes { inverse: Vec<NcPoly>, degree: usize, chain: Vec<Step> },
    No(Certificate),
    Inconclusive { cap: usize },
}

impl BasisVerdict {
    pub fn label(&self) -> &'static str {
        match self {
            BasisVerdict::Yes { .. } => "yes",
            BasisVerdict::No(_) => "no",
            BasisVerdict::Inconclusive { .. } => "inconclusive",
        }
    }
}

pub const DEFAULT_CAP: usize = 8;

/// Largest intermediate a direct substitution check may produce.
const DIRECT_BUDGET: f64 = 2.0e5;

fn identity(spec: FieldSpec, rank: usize) -> Vec<NcPoly> {
    (1..=rank as u32).map(|i| NcPoly::var(spec, rank, i)).collect()
}

fn eval_word(w: &Word, v: &[NcPoly], spec: FieldSpec, rank: usize) -> NcPoly {
    let mut p = NcPoly::one(spec, rank);
    for &a in w.letters() {
        p = &p * &v[a as usize - 1];
    }
    p
}

fn dependence(v: &[NcPoly], spec: FieldSpec, rank: usize, max_len: usize) -> Option<Certificate> {
    let words = Word::all_up_to(v.len() as u32, max_len);
    let images: Vec<NcPoly> = words.iter().map(|w| eval_word(w, v, spec, rank)).collect();
    let (m, _) = coordinates(&images, &NcPoly::zero(spec, rank));
    let kernel = rref(m, images.len()).nullspace(spec);
    let coeffs = kernel.into_iter().next()?;
    Some(Certificate::Dependence { words, coeffs })
}

fn linear_matrix(v: &[NcPoly], rank: usize) -> Vec<Vec<FieldElem>> {
    v.iter().map(|p| (1..=rank as u32).map(|j| p.coeff(&Word::letter(j))).collect()).collect()
}

fn combine(rows: &[Vec<FieldElem>], u: &[NcPoly], spec: FieldSpec, rank: usize) -> Vec<NcPoly> {
    rows.iter()
        .map(|row| row.iter().zip(u).fold(NcPoly::zero(spec, rank), |acc, (c, p)| &acc + &p.scale(c)))
        .collect()
}

fn apply_step(w: &mut [NcPoly], s: &Step, sign: &FieldElem) {
    let t = w[s.source].pow(s.power).scale(&(&s.coeff * sign));
    w[s.target] = &w[s.target] - &t;
}

/// The elementary tuple `x_target ↦ x_target − coeff · x_source^power`.
fn step_tuple(s: &Step, spec: FieldSpec, rank: usize) -> Vec<NcPoly> {
    let mut t = identity(spec, rank);
    apply_step(&mut t, s, &spec.one());
    t
}

/// Lower the degree of one entry at a time while its top homogeneous part is
/// a scalar multiple of a power of another entry's.
fn reduction_chain(v: &[NcPoly]) -> (Vec<Step>, Vec<NcPoly>) {
    let spec = v[0].spec();
    let mut w = v.to_vec();
    let mut steps = Vec::new();
    loop {
        let deg = |p: &NcPoly| p.degree().unwrap_or(0);
        let mut order: Vec<usize> = (0..w.len()).filter(|&i| deg(&w[i]) > 1).collect();
        order.sort_by_key(|&i| std::cmp::Reverse(deg(&w[i])));
        let found = order.iter().find_map(|&i| {
            let (di, top) = (deg(&w[i]), w[i].homogeneous_part(deg(&w[i])));
            let (_, lc) = top.leading().ok()?;
            (0..w.len()).filter(|&j| j != i).find_map(|j| {
                let dj = deg(&w[j]);
                if dj == 0 || di < dj || di % dj != 0 {
                    return None;
                }
                let power = di / dj;
                let base = w[j].homogeneous_part(dj).pow(power);
                let coeff = lc.checked_div(&base.leading().ok()?.1).ok()?;
                (base.scale(&coeff) == top).then_some(Step { target: i, source: j, coeff, power })
            })
        });
        match found {
            Some(s) => {
                apply_step(&mut w, &s, &spec.one());
                steps.push(s);
            }
            None => return (steps, w),
        }
    }
}

/// `A⁻¹` for an invertible affine tuple `A = Lx + c`.
fn affine_inverse(a: &[NcPoly]) -> Option<Vec<NcPoly>> {
    let (spec, rank) = (a[0].spec(), a[0].rank());
    if a.iter().any(|p| p.degree().unwrap_or(0) > 1) {
        return None;
    }
    let lin = linear_matrix(a, rank);
    if rref(lin.clone(), rank).pivots.len() < rank {
        return None;
    }
    let shifted: Vec<NcPoly> =
        identity(spec, rank).iter().zip(a).map(|(x, p)| x - &NcPoly::constant(p.constant_term(), rank)).collect();
    Some(combine(&invert(&lin, spec), &shifted, spec, rank))
}

/// `A⁻¹ ∘ T_m ∘ … ∘ T_1`.
fn compose_chain(ainv: &[NcPoly], steps: &[Step]) -> Result<Vec<NcPoly>> {
    let (spec, rank) = (ainv[0].spec(), ainv[0].rank());
    let mut h = ainv.to_vec();
    for s in steps.iter().rev() {
        let t = step_tuple(s, spec, rank);
        h = h.iter().map(|p| p.substitute(&t)).collect::<std::result::Result<_, _>>()?;
    }
    Ok(h)
}

/// Check `inverse` against V along an elementary chain. `V∘g` is evaluated
/// as `T_1⁻¹ ∘ … ∘ T_m⁻¹ ∘ (A∘g)`, which never expands `v_i(g)` directly.
pub fn verify_chain(v: &[NcPoly], chain: &[Step], inverse: &[NcPoly]) -> Result<bool> {
    let (spec, rank) = common_shape(v)?;
    if inverse.len() != rank || chain.iter().any(|s| s.target >= rank || s.source >= rank || s.target == s.source) {
        return Ok(false);
    }
    let mut a = v.to_vec();
    for s in chain {
        apply_step(&mut a, s, &spec.one());
    }
    let Some(ainv) = affine_inverse(&a) else {
        return Ok(false);
    };
    let x = identity(spec, rank);
    // g∘V = A⁻¹∘(T_m∘…∘T_1∘V) = A⁻¹∘A
    let back: Vec<NcPoly> = ainv.iter().map(|p| p.substitute(&a)).collect::<std::result::Result<_, _>>()?;
    if back != x || compose_chain(&ainv, chain)? != inverse {
        return Ok(false);
    }
    let mut w: Vec<NcPoly> = a.iter().map(|p| p.substitute(inverse)).collect::<std::result::Result<_, _>>()?;
    let minus = -&spec.one();
    for s in chain.iter().rev() {
        apply_step(&mut w, s, &minus);
    }
    Ok(w == x)
}

/// Power-series inverse of a constant-free tuple with invertible linear part,
/// truncated at degree `d`.
fn truncated_inverse(v: &[NcPoly], linv: &[Vec<FieldElem>], d: usize) -> Result<Vec<NcPoly>> {
    let (spec, rank) = (v[0].spec(), v[0].rank());
    let x = identity(spec, rank);
    let lin: Vec<NcPoly> = v.iter().map(|p| p.homogeneous_part(1)).collect();
    let high: Vec<NcPoly> = v.iter().zip(&lin).map(|(p, l)| p - l).collect();
    let mut g = combine(linv, &x, spec, rank);
    for _ in 1..d {
        let mut rhs = Vec::with_capacity(rank);
        for (xi, h) in x.iter().zip(&high) {
            rhs.push(xi - &h.substitute_truncated(&g, d)?);
        }
        g = combine(linv, &rhs, spec, rank);
    }
    Ok(g)
}

/// Upper bound on the terms built while substituting `images` into `f`.
fn substitution_cost(f: &[NcPoly], images: &[NcPoly]) -> f64 {
    let sizes: Vec<f64> = images.iter().map(|p| p.num_terms() as f64).collect();
    f.iter()
        .flat_map(|p| p.terms())
        .map(|(w, _)| w.letters().iter().map(|&a| sizes[a as usize - 1]).product::<f64>())
        .sum()
}

fn composes_to_identity(f: &[NcPoly], g: &[NcPoly]) -> Result<bool> {
    let (spec, rank) = (f[0].spec(), f[0].rank());
    for (i, p) in f.iter().enumerate() {
        if p.substitute(g)? != NcPoly::var(spec, rank, i as u32 + 1) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Both `g∘V` and `V∘g` are the identity, by direct substitution.
pub fn verify_inverse(v: &[NcPoly], inverse: &[NcPoly]) -> Result<bool> {
    common_shape(v)?;
    if inverse.len() != v.len() {
        return Ok(false);
    }
    Ok(composes_to_identity(inverse, v)? && composes_to_identity(v, inverse)?)
}

/// Re-check a Yes verdict: along its chain when it has one, directly otherwise.
pub fn verify_yes(v: &[NcPoly], verdict: &BasisVerdict) -> Result<bool> {
    match verdict {
        BasisVerdict::Yes { inverse, chain, .. } if chain.is_empty() => verify_inverse(v, inverse),
        BasisVerdict::Yes { inverse, chain, .. } => verify_chain(v, chain, inverse),
        _ => Ok(false),
    }
}

/// Re-check a No certificate by a route independent of the one that found it.
pub fn verify_certificate(v: &[NcPoly], cert: &Certificate) -> Result<bool> {
    let (spec, rank) = common_shape(v)?;
    match cert {
        Certificate::Dependence { words, coeffs } => {
            if coeffs.iter().all(|c| c.is_zero()) || words.len() != coeffs.len() {
                return Ok(false);
            }
            let mut sum = NcPoly::zero(spec, rank);
            for (w, c) in words.iter().zip(coeffs) {
                sum = &sum + &eval_word(w, v, spec, rank).scale(c);
            }
            Ok(sum.is_zero())
        }
        Certificate::LinearPartSingular { missing, .. } => {
            let lin: Vec<NcPoly> = v.iter().map(|p| p.homogeneous_part(1)).collect();
            let target = NcPoly::var(spec, rank, *missing);
            let (m, b) = coordinates(&lin, &target);
            Ok(solve(spec, &m, &b, lin.len()).is_none())
        }
    }
}

fn schedule(cap: usize) -> Vec<usize> {
    let mut out = Vec::new();
    let mut d = 1;
    while d < cap {
        out.push(d);
        d *= 2;
    }
    out.push(cap.max(1));
    out
}

fn max_degree(v: &[NcPoly]) -> usize {
    v.iter().filter_map(NcPoly::degree).max().unwrap_or(0)
}

/// Decide whether V is a free basis: an elementary reduction chain first,
/// then a deepening power-series search, with certificates for negative
/// answers.
pub fn is_basis(v: &[NcPoly], cap: usize) -> Result<BasisVerdict> {
    let (spec, rank) = common_shape(v)?;
    if v.len() != rank {
        return Err(BasisError::RankMismatch { expected: rank, got: v.len() });
    }
    let (chain, a) = reduction_chain(v);
    if let Some(ainv) = affine_inverse(&a) {
        let inverse = compose_chain(&ainv, &chain)?;
        let degree = max_degree(&inverse);
        if degree <= cap.max(1) {
            debug_assert!(verify_chain(v, &chain, &inverse)?);
            return Ok(BasisVerdict::Yes { inverse, degree, chain });
        }
    }
    if let Some(cert) = dependence(v, spec, rank, 2.min(cap.max(1))) {
        return Ok(BasisVerdict::No(cert));
    }
    // x ↦ x - c is an automorphism, so V is a basis iff V - V(0) is
    let shift: Vec<FieldElem> = v.iter().map(|p| p.constant_term()).collect();
    let v0: Vec<NcPoly> = v.iter().map(|p| p.without_constant()).collect();
    let lin = linear_matrix(&v0, rank);
    let red = rref(lin.clone(), rank);
    if red.pivots.len() < rank {
        let mut span = LinearSpan::new();
        for p in v0.iter().map(|p| p.homogeneous_part(1)) {
            span.insert(&p);
        }
        let missing = (1..=rank as u32).find(|&j| !span.contains(&NcPoly::var(spec, rank, j))).expect("rank deficient");
        return Ok(BasisVerdict::No(Certificate::LinearPartSingular { rank: red.pivots.len(), missing }));
    }
    let linv = invert(&lin, spec);
    for d in schedule(cap) {
        let g0 = truncated_inverse(&v0, &linv, d)?;
        if substitution_cost(&g0, &v0).max(substitution_cost(&v0, &g0)) > DIRECT_BUDGET {
            break;
        }
        if !verify_inverse(&v0, &g0)? {
            continue;
        }
        // g(y) = g0(y - c)
        let back: Vec<NcPoly> = identity(spec, rank)
            .into_iter()
            .zip(&shift)
            .map(|(x, c)| &x - &NcPoly::constant(c.clone(), rank))
            .collect();
        let inverse: Vec<NcPoly> = g0.iter().map(|g| g.substitute(&back)).collect::<std::result::Result<_, _>>()?;
        debug_assert!(verify_inverse(v, &inverse)?);
        return Ok(BasisVerdict::Yes { degree: max_degree(&inverse), inverse, chain: Vec::new() });
    }
    Ok(BasisVerdict::Inconclusive { cap })
}

fn invert(m: &[Vec<FieldElem>], spec: FieldSpec) -> Vec<Vec<FieldElem>> {
    let n = m.len();
    let aug: Vec<Vec<FieldElem>> = m
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..n).map(|j| if i == j { spec.one() } else { spec.zero() }));
            r
        })
        .collect();
    rref(aug, 2 * n).rows.into_iter().map(|r| r[n..].to_vec()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ncpoly::parse;

    fn q2(s: &str) -> NcPoly {
        parse(s, FieldSpec::rationals(), 2).unwrap()
    }

    fn tuple(s: &[&str]) -> Vec<NcPoly> {
        s.iter().map(|t| q2(t)).collect()
    }

    #[test]
    fn splits() {
        let s = split_unit(&q2("x1 + 3"), &tuple(&["x1", "x2"]), 2).unwrap();
        assert_eq!((s.a_prime, s.alpha.to_string()), (q2("x1"), "3".to_string()));
        let s = split_unit(&q2("x2*x1 + x2"), &tuple(&["x2"]), 2).unwrap();
        assert_eq!(s.cofactors, vec![q2("x1 + 1")]);
        assert!(s.alpha.is_zero());
        // right multiples of x2 all start with x2
        assert_eq!(split_unit(&q2("x1*x2 + x2"), &tuple(&["x2"]), 2), Err(BasisError::NoSplit(2)));
        assert_eq!(split_unit(&q2("x1"), &tuple(&["x1*x2", "x2*x1"]), 3), Err(BasisError::NoSplit(3)));
        assert_eq!(split_unit(&q2("x1"), &tuple(&["x1", "x1 + 1"]), 1), Err(BasisError::NotUnique));
    }

    #[test]
    fn rank_witnesses() {
        let r = rank_witness_check(&tuple(&["x1", "x2"]), 4).unwrap();
        assert!(r.checks.iter().all(Check::is_pass), "{r:?}");
        assert_eq!(r.quotient_dim, 3);
        let r = rank_witness_check(&tuple(&["x1*x2", "x2*x1"]), 4).unwrap();
        assert!(r.checks[0].is_fail());
        let r = rank_witness_check(&tuple(&["x1", "x1"]), 4).unwrap();
        assert!(r.checks[3].is_fail());
        assert_eq!(r.span_dim, 2);
    }

    #[test]
    fn verdicts() {
        let v = tuple(&["x1", "x2"]);
        assert_eq!(is_basis(&v, 8).unwrap(), BasisVerdict::Yes { inverse: v.clone(), degree: 1, chain: vec![] });
        let v = tuple(&["x1 + x2^2", "x2"]);
        match is_basis(&v, 8).unwrap() {
            BasisVerdict::Yes { inverse, .. } => {
                assert_eq!(inverse, tuple(&["x1 - x2^2", "x2"]));
                assert!(verify_inverse(&v, &inverse).unwrap());
            }
            other => panic!("{other:?}"),
        }
        for v in [tuple(&["x1*x2", "x2*x1"]), tuple(&["x1", "x1"]), tuple(&["x1", "5"])] {
            match is_basis(&v, 8).unwrap() {
                BasisVerdict::No(cert) => assert!(verify_certificate(&v, &cert).unwrap(), "{cert:?}"),
                other => panic!("{other:?}"),
            }
        }
        // translation is absorbed
        let v = tuple(&["x1 + 2", "x2 - x1^2"]);
        let got = is_basis(&v, 8).unwrap();
        assert!(verify_yes(&v, &got).unwrap());
        if let BasisVerdict::Yes { inverse, .. } = &got {
            assert_eq!(inverse, &tuple(&["x1 - 2", "x2 + x1^2 - 4*x1 + 4"]));
        }
    }

    #[test]
    fn chains() {
        // (x1 + x2^2, x2 + (x1 + x2^2)^2)
        let v = tuple(&["x1 + x2^2", "x2 + x1^2 + x1*x2^2 + x2^2*x1 + x2^4"]);
        let got = is_basis(&v, 8).unwrap();
        let BasisVerdict::Yes { inverse, degree, chain } = &got else { panic!("{got:?}") };
        assert_eq!(chain.len(), 2);
        assert_eq!(*degree, 4);
        assert!(verify_chain(&v, chain, inverse).unwrap());
        assert!(verify_inverse(&v, inverse).unwrap());
        let mut bad = inverse.clone();
        bad[0] = &bad[0] + &q2("x2");
        assert!(!verify_chain(&v, chain, &bad).unwrap());
        // degree above the cap is not reported
        assert_eq!(is_basis(&v, 2).unwrap().label(), "inconclusive");
    }
}
