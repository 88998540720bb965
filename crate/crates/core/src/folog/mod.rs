//! Multi-sorted first-order formulas, a three-valued evaluator over finite
//! structures and degree slices, and a library of named defining formulas.

use std::collections::BTreeSet;
use std::fmt;
use std::ops::Not;

use thiserror::Error;

use crate::ncpoly::PolyError;

pub mod catalog;
mod eval;
mod fin;
pub mod oracle;
mod poly;
mod sexpr;

pub use eval::{eval, eval_with, Domain, Env, Evaluator, RangeVal, Structure, DEFAULT_BUDGET};
pub use fin::{FinStructure, OpTable};
pub use poly::PolyStructure;
pub use sexpr::{parse_formula, parse_term};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FologError {
    #[error("syntax error: {0}")]
    Syntax(String),
    #[error("sort error: {0}")]
    SortError(String),
    #[error("unbound variable {0}")]
    UnboundVariable(String),
    #[error("unknown symbol {0}")]
    UnknownSymbol(String),
    #[error("unknown catalog entry {0}")]
    UnknownName(String),
    #[error("bad parameters: {0}")]
    BadParams(String),
    #[error("unsupported: {0}")]
    UnsupportedDomain(String),
    #[error(transparent)]
    Poly(#[from] PolyError),
}

pub type Result<T> = std::result::Result<T, FologError>;

/// Kleene's strong three-valued logic.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize)]
pub enum TriBool {
    True,
    False,
    Unknown,
}

impl TriBool {
    pub fn and(self, other: TriBool) -> TriBool {
        match (self, other) {
            (TriBool::False, _) | (_, TriBool::False) => TriBool::False,
            (TriBool::True, TriBool::True) => TriBool::True,
            _ => TriBool::Unknown,
        }
    }

    pub fn or(self, other: TriBool) -> TriBool {
        !(!self).and(!other)
    }

    pub fn implies(self, other: TriBool) -> TriBool {
        (!self).or(other)
    }

    pub fn iff(self, other: TriBool) -> TriBool {
        self.implies(other).and(other.implies(self))
    }

    pub fn is_definite(self) -> bool {
        self != TriBool::Unknown
    }

    pub fn to_bool(self) -> Option<bool> {
        match self {
            TriBool::True => Some(true),
            TriBool::False => Some(false),
            TriBool::Unknown => None,
        }
    }
}

impl Not for TriBool {
    type Output = TriBool;
    fn not(self) -> TriBool {
        match self {
            TriBool::True => TriBool::False,
            TriBool::False => TriBool::True,
            TriBool::Unknown => TriBool::Unknown,
        }
    }
}

impl From<bool> for TriBool {
    fn from(b: bool) -> Self {
        if b {
            TriBool::True
        } else {
            TriBool::False
        }
    }
}

impl fmt::Display for TriBool {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            TriBool::True => "true",
            TriBool::False => "false",
            TriBool::Unknown => "unknown",
        })
    }
}

/// A symbol is a variable when bound by a quantifier or the environment, and
/// a structure constant otherwise. `Lit` holds text the structure parses,
/// such as a polynomial.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Term {
    Sym(String),
    Lit(String),
    App(String, Vec<Term>),
}

impl Term {
    pub fn sym(s: &str) -> Term {
        Term::Sym(s.to_string())
    }

    pub fn lit(s: &str) -> Term {
        Term::Lit(s.to_string())
    }

    pub fn app(op: &str, args: Vec<Term>) -> Term {
        Term::App(op.to_string(), args)
    }

    pub fn add(a: Term, b: Term) -> Term {
        Term::app("+", vec![a, b])
    }

    pub fn sub(a: Term, b: Term) -> Term {
        Term::app("-", vec![a, b])
    }

    pub fn mul(args: Vec<Term>) -> Term {
        Term::app("*", args)
    }

    fn symbols(&self, out: &mut BTreeSet<String>) {
        match self {
            Term::Sym(s) => {
                out.insert(s.clone());
            }
            Term::Lit(_) => {}
            Term::App(_, args) => args.iter().for_each(|a| a.symbols(out)),
        }
    }

    /// Replace free occurrences of symbols.
    pub fn rename(&self, from: &str, to: &Term) -> Term {
        match self {
            Term::Sym(s) if s == from => to.clone(),
            Term::App(op, args) => Term::App(op.clone(), args.iter().map(|a| a.rename(from, to)).collect()),
            other => other.clone(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Quantifier {
    Forall,
    Exists,
}

/// What a quantified variable ranges over. Anything other than `All` is a
/// relativization: `∀(u :divides x) φ` reads `∀u (u ∣ x → φ)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Range {
    All,
    /// Every divisor of the term.
    Divides(Term),
    /// One representative per class of associate divisors; sound only when
    /// the body is invariant under scaling the variable.
    DivisorClass(Term),
    DegreeAtMost(usize),
    /// The scalar field inside the ring.
    Field,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Binder {
    pub var: String,
    pub sort: Option<String>,
    pub range: Range,
    /// A value tried first. Changes search order only, never the meaning.
    pub hint: Option<Term>,
}

impl Binder {
    pub fn new(var: &str) -> Binder {
        Binder { var: var.to_string(), sort: None, range: Range::All, hint: None }
    }

    pub fn ranged(var: &str, range: Range) -> Binder {
        Binder { range, ..Binder::new(var) }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Formula {
    Const(bool),
    Eq(Term, Term),
    Rel(String, Vec<Term>),
    Not(Box<Formula>),
    And(Vec<Formula>),
    Or(Vec<Formula>),
    Implies(Box<Formula>, Box<Formula>),
    Iff(Box<Formula>, Box<Formula>),
    Quant(Quantifier, Binder, Box<Formula>),
}

impl Formula {
    pub fn eq(a: Term, b: Term) -> Formula {
        Formula::Eq(a, b)
    }

    pub fn rel(name: &str, args: Vec<Term>) -> Formula {
        Formula::Rel(name.to_string(), args)
    }

    pub fn not(f: Formula) -> Formula {
        Formula::Not(Box::new(f))
    }

    pub fn implies(a: Formula, b: Formula) -> Formula {
        Formula::Implies(Box::new(a), Box::new(b))
    }

    pub fn iff(a: Formula, b: Formula) -> Formula {
        Formula::Iff(Box::new(a), Box::new(b))
    }

    pub fn forall(b: Binder, body: Formula) -> Formula {
        Formula::Quant(Quantifier::Forall, b, Box::new(body))
    }

    pub fn exists(b: Binder, body: Formula) -> Formula {
        Formula::Quant(Quantifier::Exists, b, Box::new(body))
    }

    pub fn free_vars(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_free(&mut Vec::new(), &mut out);
        out
    }

    fn collect_free(&self, bound: &mut Vec<String>, out: &mut BTreeSet<String>) {
        let add_term = |t: &Term, bound: &Vec<String>, out: &mut BTreeSet<String>| {
            let mut s = BTreeSet::new();
            t.symbols(&mut s);
            out.extend(s.into_iter().filter(|v| !bound.contains(v)));
        };
        match self {
            Formula::Const(_) => {}
            Formula::Eq(a, b) => {
                add_term(a, bound, out);
                add_term(b, bound, out);
            }
            Formula::Rel(_, args) => args.iter().for_each(|a| add_term(a, bound, out)),
            Formula::Not(f) => f.collect_free(bound, out),
            Formula::And(fs) | Formula::Or(fs) => fs.iter().for_each(|f| f.collect_free(bound, out)),
            Formula::Implies(a, b) | Formula::Iff(a, b) => {
                a.collect_free(bound, out);
                b.collect_free(bound, out);
            }
            Formula::Quant(_, b, body) => {
                if let Range::Divides(t) | Range::DivisorClass(t) = &b.range {
                    add_term(t, bound, out);
                }
                bound.push(b.var.clone());
                if let Some(h) = &b.hint {
                    add_term(h, bound, out);
                }
                body.collect_free(bound, out);
                bound.pop();
            }
        }
    }

    /// Every symbol appearing anywhere, bound or free.
    pub fn all_symbols(&self) -> BTreeSet<String> {
        let (mut out, mut vars) = (BTreeSet::new(), BTreeSet::new());
        self.visit_terms(&mut |t| t.symbols(&mut out), &mut |b| {
            vars.insert(b.var.clone());
        });
        out.extend(vars);
        out
    }

    fn visit_terms(&self, on_term: &mut dyn FnMut(&Term), on_binder: &mut dyn FnMut(&Binder)) {
        match self {
            Formula::Const(_) => {}
            Formula::Eq(a, b) => {
                on_term(a);
                on_term(b);
            }
            Formula::Rel(_, args) => args.iter().for_each(&mut *on_term),
            Formula::Not(f) => f.visit_terms(on_term, on_binder),
            Formula::And(fs) | Formula::Or(fs) => fs.iter().for_each(|f| f.visit_terms(on_term, on_binder)),
            Formula::Implies(a, b) | Formula::Iff(a, b) => {
                a.visit_terms(on_term, on_binder);
                b.visit_terms(on_term, on_binder);
            }
            Formula::Quant(_, b, body) => {
                on_binder(b);
                if let Range::Divides(t) | Range::DivisorClass(t) = &b.range {
                    on_term(t);
                }
                if let Some(h) = &b.hint {
                    on_term(h);
                }
                body.visit_terms(on_term, on_binder);
            }
        }
    }

    /// Substitute `to` for free occurrences of `from`. Bound variables that
    /// would capture a symbol of `to` are renamed first.
    pub fn subst(&self, from: &str, to: &Term) -> Formula {
        let mut names = self.all_symbols();
        to.symbols(&mut names);
        self.subst_inner(from, to, &mut names)
    }

    fn subst_inner(&self, from: &str, to: &Term, names: &mut BTreeSet<String>) -> Formula {
        let t = |x: &Term| x.rename(from, to);
        match self {
            Formula::Const(b) => Formula::Const(*b),
            Formula::Eq(a, b) => Formula::Eq(t(a), t(b)),
            Formula::Rel(r, args) => Formula::Rel(r.clone(), args.iter().map(t).collect()),
            Formula::Not(f) => Formula::not(f.subst_inner(from, to, names)),
            Formula::And(fs) => Formula::And(fs.iter().map(|f| f.subst_inner(from, to, names)).collect()),
            Formula::Or(fs) => Formula::Or(fs.iter().map(|f| f.subst_inner(from, to, names)).collect()),
            Formula::Implies(a, b) => Formula::implies(a.subst_inner(from, to, names), b.subst_inner(from, to, names)),
            Formula::Iff(a, b) => Formula::iff(a.subst_inner(from, to, names), b.subst_inner(from, to, names)),
            Formula::Quant(q, b, body) => {
                let range = match &b.range {
                    Range::Divides(x) => Range::Divides(t(x)),
                    Range::DivisorClass(x) => Range::DivisorClass(t(x)),
                    r => r.clone(),
                };
                if b.var == from {
                    return Formula::Quant(*q, Binder { range, ..b.clone() }, body.clone());
                }
                let mut to_syms = BTreeSet::new();
                to.symbols(&mut to_syms);
                let (var, body) = if to_syms.contains(&b.var) {
                    let fresh = fresh_name(&b.var, names);
                    (fresh.clone(), body.subst_inner(&b.var, &Term::Sym(fresh), names))
                } else {
                    (b.var.clone(), (**body).clone())
                };
                let hint = b.hint.as_ref().map(|h| h.rename(&b.var, &Term::Sym(var.clone())).rename(from, to));
                let binder = Binder { var, sort: b.sort.clone(), range, hint };
                Formula::Quant(*q, binder, Box::new(body.subst_inner(from, to, names)))
            }
        }
    }

    /// Rename bound variables so that no binder shadows another binder or a
    /// free variable.
    pub fn normalize(&self) -> Formula {
        let mut names = self.free_vars();
        self.normalize_inner(&mut names)
    }

    fn normalize_inner(&self, names: &mut BTreeSet<String>) -> Formula {
        match self {
            Formula::Not(f) => Formula::not(f.normalize_inner(names)),
            Formula::And(fs) => Formula::And(fs.iter().map(|f| f.normalize_inner(names)).collect()),
            Formula::Or(fs) => Formula::Or(fs.iter().map(|f| f.normalize_inner(names)).collect()),
            Formula::Implies(a, b) => Formula::implies(a.normalize_inner(names), b.normalize_inner(names)),
            Formula::Iff(a, b) => Formula::iff(a.normalize_inner(names), b.normalize_inner(names)),
            Formula::Quant(q, b, body) => {
                let var = if names.contains(&b.var) { fresh_name(&b.var, names) } else { b.var.clone() };
                names.insert(var.clone());
                let new_sym = Term::Sym(var.clone());
                let body = if var == b.var { (**body).clone() } else { body.subst(&b.var, &new_sym) };
                let hint = b.hint.as_ref().map(|h| h.rename(&b.var, &new_sym));
                let binder = Binder { var, hint, ..b.clone() };
                Formula::Quant(*q, binder, Box::new(body.normalize_inner(names)))
            }
            other => other.clone(),
        }
    }

    pub fn is_sentence(&self) -> bool {
        self.free_vars().is_empty()
    }

    /// Nesting depth of quantifiers.
    pub fn quantifier_depth(&self) -> usize {
        match self {
            Formula::Const(_) | Formula::Eq(..) | Formula::Rel(..) => 0,
            Formula::Not(f) => f.quantifier_depth(),
            Formula::And(fs) | Formula::Or(fs) => fs.iter().map(Formula::quantifier_depth).max().unwrap_or(0),
            Formula::Implies(a, b) | Formula::Iff(a, b) => a.quantifier_depth().max(b.quantifier_depth()),
            Formula::Quant(_, _, body) => 1 + body.quantifier_depth(),
        }
    }
}

/// A name based on `base` not in `taken`; the result is added to `taken`.
pub fn fresh_name(base: &str, taken: &mut BTreeSet<String>) -> String {
    let stem = base.split('\'').next().unwrap_or(base);
    let mut i = 1;
    loop {
        let cand = format!("{stem}'{i}");
        if !taken.contains(&cand) {
            taken.insert(cand.clone());
            return cand;
        }
        i += 1;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> Formula {
        parse_formula(s).unwrap()
    }

    #[test]
    fn kleene_tables() {
        use TriBool::*;
        assert_eq!(Unknown.and(False), False);
        assert_eq!(Unknown.or(True), True);
        assert_eq!(Unknown.implies(True), True);
        assert_eq!(False.implies(Unknown), True);
        assert_eq!(Unknown.iff(True), Unknown);
        assert_eq!(!Unknown, Unknown);
    }

    #[test]
    fn variables() {
        let f = p("(forall (u :divides x) (or (unit u) (divides a u)))");
        assert_eq!(f.free_vars(), ["a", "x"].iter().map(|s| s.to_string()).collect());
        assert!(p("(forall (x) (= x x))").is_sentence());
        assert_eq!(p("(exists (x) (forall (y) (= x y)))").quantifier_depth(), 2);
    }

    #[test]
    fn substitution_avoids_capture() {
        let f = p("(exists (y) (= x (* y y)))");
        let g = f.subst("x", &Term::sym("y"));
        assert_eq!(g.free_vars(), ["y".to_string()].into_iter().collect());
        assert_eq!(g.to_string(), "(exists (y'1) (= y (* y'1 y'1)))");
        // bound occurrences are untouched
        assert_eq!(f.subst("y", &Term::sym("z")), f);
    }

    #[test]
    fn normalization_removes_shadowing() {
        let f = p("(and (exists (x) (= x 0)) (forall (x) (exists (x) (= x 1))) (= x 1))");
        let n = f.normalize();
        assert_eq!(n.to_string(), "(and (exists (x'1) (= x'1 0)) (forall (x'2) (exists (x'3) (= x'3 1))) (= x 1))");
        assert_eq!(n.free_vars(), f.free_vars());
    }
}
