//! Command surface for the `freealg` binary: argument types, dispatch to
//! the library, and JSON reports with stable error codes.

use std::fmt::Debug;
use std::fs;

use clap::{Args, Parser, Subcommand};
use freealg::basis::{is_basis, rank_witness_check, BasisVerdict, Certificate};
use freealg::bigpowers::{
    choose_marker, decode_partial_sums, decode_seq, decode_word_trace, encode_partial_sums, encode_seq,
    encode_word_trace, marker, read_sync, sync_gadget,
};
use freealg::centralizers::{centralizer_window, is_self_generating, map_centralizer};
use freealg::folog::catalog::{catalog, entry, CatalogParams, ENTRIES};
use freealg::folog::{eval, parse_formula, PolyStructure};
use freealg::interp::{compose, induced_structure, translate, verify_translation, InterpScheme};
use freealg::ncpoly::{parse, TermJson};
use freealg::superstructure::{decode_pair, encode_poly, TuplePair, TuplePairJson};
use freealg::{FieldSpec, NcPoly};
use serde_json::{json, Value};

pub mod selftest;

#[derive(Debug, Parser)]
#[command(name = "freealg", version, about = "Exact computations in free associative algebras")]
pub struct Cli {
    #[command(flatten)]
    pub global: Global,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Args)]
pub struct Global {
    /// Coefficient field: `q` or `fp:<p>`.
    #[arg(long, global = true, default_value = "q")]
    pub field: String,
    /// Number of generators x1..xr.
    #[arg(long, global = true, default_value_t = 2)]
    pub rank: usize,
    /// Seed for randomized runs.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Degree cap for searches.
    #[arg(long, global = true, default_value_t = 8)]
    pub cap: usize,
    /// Print polynomials as JSON term maps instead of expressions.
    #[arg(long, global = true)]
    pub json: bool,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Polynomial arithmetic: show, add, sub, mul, pow, degree.
    Poly {
        op: String,
        args: Vec<String>,
    },
    /// Polynomial to coefficient/monomial tuple pair.
    Encode { expr: String },
    /// Tuple pair (JSON `{"coeffs": [...], "mons": [[...]]}`) to polynomial.
    Decode { pair: String },
    #[command(subcommand)]
    Bigpowers(BigPowers),
    #[command(subcommand)]
    Centralizer(Centralizer),
    #[command(subcommand)]
    Basis(Basis),
    /// Evaluate a catalog entry or an S-expression formula on a finite slice.
    Formula(FormulaArgs),
    #[command(subcommand)]
    Interp(Interp),
    /// Run the acceptance battery.
    Selftest {
        /// Smaller samples.
        #[arg(long)]
        quick: bool,
        /// Only this criterion.
        #[arg(long)]
        only: Option<usize>,
    },
}

#[derive(Debug, Subcommand)]
pub enum BigPowers {
    /// Delimit factors f0 … f_{s+1} by marker powers.
    Encode {
        #[arg(long, default_value_t = 3)]
        e: usize,
        factors: Vec<String>,
    },
    Decode {
        #[arg(long, default_value_t = 3)]
        e: usize,
        #[arg(long)]
        marker: usize,
        expr: String,
    },
    /// Encode the synchronized sequence of P and Q with s inner blocks, or
    /// read s back with --read.
    Sync {
        #[arg(long, default_value_t = 3)]
        e: usize,
        #[arg(long, default_value_t = 1)]
        s: usize,
        p: String,
        q: String,
        /// An encoding to read back instead.
        #[arg(long)]
        read: Option<String>,
        #[arg(long)]
        marker: Option<usize>,
    },
    /// Word trace of a tuple like `1,2,1`, or decode one with --decode.
    Trace {
        #[arg(long, default_value_t = 3)]
        p: usize,
        #[arg(long)]
        decode: Option<String>,
        tuple: Option<String>,
    },
    /// Partial-sum encoding of words like `12,21` with coefficients, or
    /// decode one with --decode.
    Sums {
        #[arg(long, default_value_t = 3)]
        p: usize,
        #[arg(long)]
        words: Option<String>,
        #[arg(long)]
        coeffs: Option<String>,
        #[arg(long)]
        decode: Option<String>,
    },
}

#[derive(Debug, Subcommand)]
pub enum Centralizer {
    Window {
        #[arg(long, default_value_t = 6)]
        d: usize,
        p: String,
    },
    Selfgen {
        #[arg(long, default_value_t = 6)]
        d: usize,
        p: String,
    },
    /// Send f in C(P) to C(Q).
    Map {
        #[arg(long, default_value_t = 12)]
        d: usize,
        p: String,
        q: String,
        f: String,
    },
}

#[derive(Debug, Subcommand)]
pub enum Basis {
    /// Decide whether a comma-separated tuple is a free basis.
    Check { tuple: String },
    /// Rank-witness conditions for a tuple at degree d.
    Witness {
        #[arg(long, default_value_t = 4)]
        d: usize,
        tuple: String,
    },
}

#[derive(Debug, Clone, Args)]
pub struct FormulaArgs {
    /// Catalog entry name; `list` prints the catalog.
    #[arg(long)]
    pub formula: Option<String>,
    /// An S-expression formula, when no catalog entry is named.
    pub sexpr: Option<String>,
    /// Free variable bindings `name=expr`.
    #[arg(long = "arg")]
    pub args: Vec<String>,
    /// Catalog parameters `n=2`, `k=3`, `m=1`, `mult=4`.
    #[arg(long = "param")]
    pub params: Vec<String>,
    /// Degree bound of the slice quantifiers range over.
    #[arg(long)]
    pub degree: Option<usize>,
    /// Range over the augmentation ideal's slice (no constants).
    #[arg(long)]
    pub augmentation: bool,
}

#[derive(Debug, Subcommand)]
pub enum Interp {
    /// Translate a source sentence along a scheme.
    Translate { scheme: String, sentence: String },
    /// The structure a scheme defines in its finite target.
    Quotient { scheme: String },
    /// Compare a sentence in the quotient with its translation in the target.
    Verify { scheme: String, sentence: String },
    /// Compose a scheme of A in B with one of B in C.
    Compose { outer: String, inner: String },
}

impl Command {
    /// Verb and sub-verb, e.g. `interp verify`.
    pub fn name(&self) -> String {
        let sub = match self {
            Command::Poly { op, .. } => op.as_str(),
            Command::Bigpowers(b) => match b {
                BigPowers::Encode { .. } => "encode",
                BigPowers::Decode { .. } => "decode",
                BigPowers::Sync { .. } => "sync",
                BigPowers::Trace { .. } => "trace",
                BigPowers::Sums { .. } => "sums",
            },
            Command::Centralizer(c) => match c {
                Centralizer::Window { .. } => "window",
                Centralizer::Selfgen { .. } => "selfgen",
                Centralizer::Map { .. } => "map",
            },
            Command::Basis(b) => match b {
                Basis::Check { .. } => "check",
                Basis::Witness { .. } => "witness",
            },
            Command::Interp(i) => match i {
                Interp::Translate { .. } => "translate",
                Interp::Quotient { .. } => "quotient",
                Interp::Verify { .. } => "verify",
                Interp::Compose { .. } => "compose",
            },
            _ => "",
        };
        let verb = match self {
            Command::Poly { .. } => "poly",
            Command::Encode { .. } => "encode",
            Command::Decode { .. } => "decode",
            Command::Bigpowers(_) => "bigpowers",
            Command::Centralizer(_) => "centralizer",
            Command::Basis(_) => "basis",
            Command::Formula(_) => "formula",
            Command::Interp(_) => "interp",
            Command::Selftest { .. } => "selftest",
        };
        if sub.is_empty() { verb.to_string() } else { format!("{verb} {sub}") }
    }
}

/// A failed command: a stable code and a message.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CliError {
    pub code: String,
    pub message: String,
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}: {}", self.code, self.message)
    }
}

const WRAPPERS: [&str; 4] = ["Poly(", "Scalar(", "Folog(", "Word("];

/// Innermost variant name of a library error, e.g. `InconsistentExponents`.
pub fn error_code<E: Debug>(e: &E) -> String {
    let mut s = format!("{e:?}");
    while let Some(w) = WRAPPERS.iter().find(|w| s.starts_with(*w)) {
        s = s[w.len()..s.len() - 1].to_string();
    }
    s.chars().take_while(|c| c.is_alphanumeric() || *c == '_').collect()
}

fn lib_err<E: Debug + std::fmt::Display>(e: E) -> CliError {
    CliError { code: error_code(&e), message: e.to_string() }
}

fn usage(msg: impl Into<String>) -> CliError {
    CliError { code: "Usage".into(), message: msg.into() }
}

type Result<T> = std::result::Result<T, CliError>;

pub fn parse_field(text: &str) -> Result<FieldSpec> {
    match text {
        "q" | "Q" => Ok(FieldSpec::rationals()),
        _ => {
            let p = text.strip_prefix("fp:").and_then(|p| p.parse().ok()).ok_or_else(|| usage(format!("bad field {text}")))?;
            FieldSpec::prime(p).map_err(lib_err)
        }
    }
}

struct Ctx {
    spec: FieldSpec,
    rank: usize,
    json: bool,
    cap: usize,
    seed: u64,
}

impl Ctx {
    /// An expression, or a JSON term map when the text starts with `[`.
    fn poly(&self, text: &str) -> Result<NcPoly> {
        self.poly_at(text, self.rank)
    }

    fn poly_at(&self, text: &str, rank: usize) -> Result<NcPoly> {
        if text.trim_start().starts_with('[') {
            let terms: Vec<TermJson> = serde_json::from_str(text).map_err(|e| usage(e.to_string()))?;
            return NcPoly::from_json(self.spec, rank, &terms).map_err(lib_err);
        }
        parse(text, self.spec, rank).map_err(lib_err)
    }

    fn show(&self, f: &NcPoly) -> Value {
        if self.json {
            serde_json::to_value(f.to_json()).expect("term maps serialize")
        } else {
            json!(f.to_string())
        }
    }

    fn shows(&self, fs: &[NcPoly]) -> Value {
        Value::Array(fs.iter().map(|f| self.show(f)).collect())
    }

    fn tuple(&self, text: &str) -> Result<Vec<NcPoly>> {
        text.split(',').map(|s| self.poly(s.trim())).collect()
    }
}

/// Execute a command; the value is the `result` field of the report.
pub fn run(cli: &Cli) -> Result<Value> {
    let g = &cli.global;
    let ctx = Ctx { spec: parse_field(&g.field)?, rank: g.rank, json: g.json, cap: g.cap, seed: g.seed };
    match &cli.command {
        Command::Poly { op, args } => run_poly(&ctx, op, args),
        Command::Encode { expr } => {
            let pair = encode_poly(&ctx.poly(expr)?);
            Ok(json!({ "pair": pair.to_json(), "text": pair.to_string() }))
        }
        Command::Decode { pair } => {
            let j: TuplePairJson = serde_json::from_str(pair).map_err(|e| usage(e.to_string()))?;
            let q = TuplePair::from_json(ctx.spec, &j).map_err(lib_err)?;
            Ok(json!({ "poly": ctx.show(&decode_pair(&q, ctx.rank).map_err(lib_err)?) }))
        }
        Command::Bigpowers(b) => run_bigpowers(&ctx, b),
        Command::Centralizer(c) => run_centralizer(&ctx, c),
        Command::Basis(b) => run_basis(&ctx, b),
        Command::Formula(f) => run_formula(&ctx, f),
        Command::Interp(i) => run_interp(i),
        Command::Selftest { quick, only } => run_selftest(&ctx, *quick, *only),
    }
}

fn run_poly(ctx: &Ctx, op: &str, args: &[String]) -> Result<Value> {
    let arity = |n: usize| {
        if args.len() != n {
            return Err(usage(format!("poly {op} takes {n} arguments")));
        }
        Ok(())
    };
    let out = match op {
        "show" => {
            arity(1)?;
            ctx.poly(&args[0])?
        }
        "add" | "sub" | "mul" => {
            arity(2)?;
            let (a, b) = (ctx.poly(&args[0])?, ctx.poly(&args[1])?);
            match op {
                "add" => a.checked_add(&b),
                "sub" => a.checked_sub(&b),
                _ => a.checked_mul(&b),
            }
            .map_err(lib_err)?
        }
        "pow" => {
            arity(2)?;
            let k: usize = args[1].parse().map_err(|_| usage("exponent must be a natural number"))?;
            ctx.poly(&args[0])?.pow(k)
        }
        "degree" => {
            arity(1)?;
            let f = ctx.poly(&args[0])?;
            return Ok(json!({ "degree": f.degree(), "min_degree": f.min_degree(), "terms": f.num_terms() }));
        }
        _ => return Err(usage(format!("unknown poly operation {op}"))),
    };
    Ok(json!({ "poly": ctx.show(&out) }))
}

fn run_bigpowers(ctx: &Ctx, b: &BigPowers) -> Result<Value> {
    match b {
        BigPowers::Encode { e, factors } => {
            let fs = factors.iter().map(|f| ctx.poly(f)).collect::<Result<Vec<_>>>()?;
            let a = choose_marker(&fs);
            let f = encode_seq(&fs, *e, &a).map_err(lib_err)?;
            Ok(json!({ "poly": ctx.show(&f), "marker": a.m(), "e": e }))
        }
        BigPowers::Decode { e, marker: m, expr } => {
            let a = marker(*m).map_err(lib_err)?;
            let fs = decode_seq(&ctx.poly(expr)?, &a, *e).map_err(lib_err)?;
            Ok(json!({ "factors": ctx.shows(&fs) }))
        }
        BigPowers::Sync { e, s, p, q, read, marker: m } => {
            let (p, q) = (ctx.poly(p)?, ctx.poly(q)?);
            match read {
                None => {
                    let (f, a) = sync_gadget(&p, &q, *s, *e).map_err(lib_err)?;
                    Ok(json!({ "poly": ctx.show(&f), "marker": a.m(), "e": e }))
                }
                Some(text) => {
                    let a = marker(m.ok_or_else(|| usage("--read needs --marker"))?).map_err(lib_err)?;
                    let s = read_sync(&ctx.poly(text)?, &p, &q, &a, *e).map_err(lib_err)?;
                    Ok(json!({ "s": s }))
                }
            }
        }
        BigPowers::Trace { p, decode, tuple } => match (decode, tuple) {
            (Some(text), _) => {
                let t = decode_word_trace(&ctx.poly(text)?, *p).map_err(lib_err)?;
                Ok(json!({ "tuple": t.t, "block": t.block.letters() }))
            }
            (None, Some(t)) => {
                let t = t.split(',').map(|x| x.trim().parse::<u32>()).collect::<std::result::Result<Vec<_>, _>>();
                let t = t.map_err(|_| usage("tuple entries must be natural numbers"))?;
                Ok(json!({ "poly": ctx.show(&encode_word_trace(&t, *p, ctx.spec, ctx.rank).map_err(lib_err)?) }))
            }
            (None, None) => Err(usage("give a tuple or --decode")),
        },
        BigPowers::Sums { p, words, coeffs, decode } => {
            if let Some(text) = decode {
                let r = decode_partial_sums(&ctx.poly(text)?, *p).map_err(lib_err)?;
                return Ok(json!({ "words": r.s, "poly": ctx.show(&r.f) }));
            }
            let (Some(words), Some(coeffs)) = (words, coeffs) else {
                return Err(usage("give --words and --coeffs, or --decode"));
            };
            let ws: Vec<Vec<u32>> = words
                .split(',')
                .map(|w| w.trim().chars().map(|c| c.to_digit(10).ok_or_else(|| usage(format!("bad word {w}")))).collect())
                .collect::<Result<_>>()?;
            let cs = coeffs.split(',').map(|c| ctx.spec.parse_elem(c.trim()).map_err(lib_err)).collect::<Result<Vec<_>>>()?;
            let f = encode_partial_sums(&ws, &cs, *p, ctx.spec, ctx.rank).map_err(lib_err)?;
            Ok(json!({ "poly": ctx.show(&f) }))
        }
    }
}

fn run_centralizer(ctx: &Ctx, c: &Centralizer) -> Result<Value> {
    match c {
        Centralizer::Window { d, p } => {
            let w = centralizer_window(&ctx.poly(p)?, *d).map_err(lib_err)?;
            Ok(json!({ "generator": ctx.show(w.generator()), "dim": w.dim(), "basis": ctx.shows(w.basis()) }))
        }
        Centralizer::Selfgen { d, p } => {
            Ok(json!({ "self_generating": is_self_generating(&ctx.poly(p)?, *d).map_err(lib_err)? }))
        }
        Centralizer::Map { d, p, q, f } => {
            let img = map_centralizer(&ctx.poly(p)?, &ctx.poly(q)?, &ctx.poly(f)?, *d).map_err(lib_err)?;
            Ok(json!({ "poly": ctx.show(&img) }))
        }
    }
}

fn run_basis(ctx: &Ctx, b: &Basis) -> Result<Value> {
    match b {
        Basis::Check { tuple } => {
            let v = ctx.tuple(tuple)?;
            let verdict = is_basis(&v, ctx.cap).map_err(lib_err)?;
            let detail = match &verdict {
                BasisVerdict::Yes { inverse, degree, chain } => json!({
                    "inverse": ctx.shows(inverse),
                    "degree": degree,
                    "chain": chain.iter().map(|s| json!({
                        "target": s.target + 1, "source": s.source + 1, "coeff": s.coeff.to_string(), "power": s.power
                    })).collect::<Vec<_>>(),
                }),
                BasisVerdict::No(Certificate::Dependence { words, coeffs }) => json!({
                    "certificate": "dependence",
                    "words": words.iter().map(|w| w.letters().to_vec()).collect::<Vec<_>>(),
                    "coeffs": coeffs.iter().map(|c| c.to_string()).collect::<Vec<_>>(),
                }),
                BasisVerdict::No(Certificate::LinearPartSingular { rank, missing }) => json!({
                    "certificate": "linear-part-singular", "rank": rank, "missing": missing,
                }),
                BasisVerdict::Inconclusive { cap } => json!({ "cap": cap }),
            };
            Ok(json!({ "verdict": verdict.label(), "detail": detail }))
        }
        Basis::Witness { d, tuple } => {
            let r = rank_witness_check(&ctx.tuple(tuple)?, *d).map_err(lib_err)?;
            Ok(json!({
                "checks": r.checks.iter().map(|c| c.to_string()).collect::<Vec<_>>(),
                "quotient_dim": r.quotient_dim,
                "span_dim": r.span_dim,
            }))
        }
    }
}

fn binding(text: &str) -> Result<(&str, &str)> {
    text.split_once('=').map(|(k, v)| (k.trim(), v.trim())).ok_or_else(|| usage(format!("expected name=value, got {text}")))
}

fn run_formula(ctx: &Ctx, a: &FormulaArgs) -> Result<Value> {
    if a.formula.as_deref() == Some("list") {
        let list: Vec<Value> =
            ENTRIES.iter().map(|e| json!({ "name": e.name, "free": e.free, "params": e.params, "doc": e.doc })).collect();
        return Ok(Value::Array(list));
    }
    let mut params = CatalogParams { rank: ctx.rank, ..CatalogParams::default() };
    for p in &a.params {
        let (k, v) = binding(p)?;
        let v: usize = v.parse().map_err(|_| usage(format!("parameter {k} must be a natural number")))?;
        match k {
            "n" => params.n = v,
            "k" => params.k = v,
            "m" => params.m = v,
            "mult" => params.mult = v,
            "rank" => params.rank = v,
            _ => return Err(usage(format!("unknown parameter {k}"))),
        }
    }
    let f = match (&a.formula, &a.sexpr) {
        (Some(name), _) => {
            entry(name).map_err(lib_err)?;
            catalog(name, &params).map_err(lib_err)?
        }
        (None, Some(text)) => parse_formula(text).map_err(lib_err)?,
        (None, None) => return Err(usage("give --formula NAME or an S-expression")),
    };
    let mut env = Vec::new();
    for b in &a.args {
        let (k, v) = binding(b)?;
        env.push((k.to_string(), ctx.poly(v)?));
    }
    let top = env.iter().filter_map(|(_, p)| p.degree()).max().unwrap_or(0);
    let s = match ctx.spec.is_finite() {
        true if a.augmentation => PolyStructure::augmentation_slice(ctx.spec, ctx.rank, a.degree.unwrap_or(top.max(2))),
        true => PolyStructure::slice(ctx.spec, ctx.rank, a.degree.unwrap_or(top.max(2))),
        false => Ok(PolyStructure::sampled(ctx.spec, ctx.rank, env.iter().map(|(_, p)| p.clone()).collect())),
    }
    .map_err(lib_err)?;
    let env: Vec<(&str, NcPoly)> = env.iter().map(|(k, v)| (k.as_str(), v.clone())).collect();
    let value = eval(&s, &f, &env).map_err(lib_err)?;
    Ok(json!({ "formula": f.to_string(), "value": value.to_string() }))
}

/// A fixture name or a path to a scheme JSON file.
fn scheme(name: &str) -> Result<InterpScheme> {
    if InterpScheme::fixture_names().any(|n| n == name) {
        return InterpScheme::fixture(name).map_err(lib_err);
    }
    let text = fs::read_to_string(name).map_err(|e| CliError { code: "Io".into(), message: format!("{name}: {e}") })?;
    InterpScheme::from_json(&text).map_err(lib_err)
}

fn run_interp(i: &Interp) -> Result<Value> {
    match i {
        Interp::Translate { scheme: s, sentence } => {
            let f = translate(&scheme(s)?, &parse_formula(sentence).map_err(lib_err)?).map_err(lib_err)?;
            Ok(json!({ "formula": f.to_string() }))
        }
        Interp::Quotient { scheme: s } => {
            let s = scheme(s)?;
            let q = induced_structure(&s, &s.model().map_err(lib_err)?).map_err(lib_err)?;
            let st = &q.structure;
            let labels: Vec<&str> = (0..q.size()).map(|i| st.label(i)).collect();
            let ops: Vec<Value> = st
                .ops()
                .map(|(name, t)| {
                    let cells: Vec<Option<&str>> = t.cells.iter().map(|c| c.map(|i| st.label(i))).collect();
                    json!({ "name": name, "arity": t.arity, "cells": cells })
                })
                .collect();
            let constants: Vec<Value> = st.constants().map(|(n, i)| json!({ "name": n, "value": st.label(i) })).collect();
            Ok(json!({ "size": q.size(), "elements": labels, "ops": ops, "constants": constants }))
        }
        Interp::Verify { scheme: s, sentence } => {
            let s = scheme(s)?;
            let r = verify_translation(&s, &s.model().map_err(lib_err)?, &parse_formula(sentence).map_err(lib_err)?)
                .map_err(lib_err)?;
            Ok(json!({
                "source_value": r.source_value.to_string(),
                "target_value": r.target_value.to_string(),
                "agree": r.agree,
                "counterexample": r.counterexample,
                "quotient_warning": r.quotient_warning,
            }))
        }
        Interp::Compose { outer, inner } => {
            let c = compose(&scheme(outer)?, &scheme(inner)?).map_err(lib_err)?;
            serde_json::from_str(&c.to_json()).map_err(|e| usage(e.to_string()))
        }
    }
}

fn run_selftest(ctx: &Ctx, quick: bool, only: Option<usize>) -> Result<Value> {
    let settings = selftest::Settings { seed: ctx.seed, quick };
    let reports = match only {
        Some(id) => vec![selftest::run_one(id, &settings)
            .ok_or_else(|| usage(format!("criteria are numbered 1..={}", selftest::criterion_count())))?],
        None => selftest::run_all(&settings),
    };
    let failed = reports.iter().filter(|r| !r.passed).count();
    for r in &reports {
        eprintln!("{r}");
    }
    let summary = json!({ "criteria": reports, "passed": reports.len() - failed, "failed": failed });
    if failed > 0 {
        return Err(CliError { code: "SelftestFailed".into(), message: summary.to_string() });
    }
    Ok(summary)
}

/// The JSON document printed for a finished command.
pub fn report(command: &str, outcome: &Result<Value>) -> Value {
    match outcome {
        Ok(v) => json!({ "v": 1, "ok": true, "command": command, "result": v }),
        Err(e) => json!({ "v": 1, "ok": false, "command": command, "error": { "code": e.code, "message": e.message } }),
    }
}
