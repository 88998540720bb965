use std::cell::Cell;
use std::fmt;

use super::{FologError, Formula, Quantifier, Range, Result, Term, TriBool};

/// A range annotation with its term already evaluated.
#[derive(Debug, Clone, PartialEq)]
pub enum RangeVal<V> {
    All,
    Divides(V),
    DivisorClass(V),
    DegreeAtMost(usize),
    Field,
}

/// The values a quantifier enumerates.
#[derive(Debug, Clone, PartialEq)]
pub struct Domain<V> {
    pub values: Vec<V>,
    /// Every element of the range is listed, so universal and existential
    /// quantifiers may return definite answers either way.
    pub exhaustive: bool,
    /// The range is the whole sort, so any value (e.g. a hint) is a member.
    pub open: bool,
}

impl<V> Domain<V> {
    pub fn complete(values: Vec<V>) -> Self {
        Domain { values, exhaustive: true, open: false }
    }

    pub fn partial(values: Vec<V>) -> Self {
        Domain { values, exhaustive: false, open: false }
    }
}

pub trait Structure {
    type Val: Clone + PartialEq + fmt::Debug;

    fn default_sort(&self) -> &str;

    /// A named constant or numeral. Unknown names are `UnknownSymbol`.
    fn constant(&self, name: &str) -> Result<Self::Val>;

    /// A quoted literal, e.g. a polynomial in the parser's syntax.
    fn literal(&self, text: &str) -> Result<Self::Val>;

    /// `None` marks an undefined cell of a partial operation.
    fn apply(&self, op: &str, args: &[Self::Val]) -> Result<Option<Self::Val>>;

    fn relation(&self, name: &str, args: &[Self::Val]) -> Result<TriBool>;

    fn domain(&self, sort: &str, range: &RangeVal<Self::Val>) -> Result<Domain<Self::Val>>;
}

pub type Env<V> = Vec<(String, V)>;

pub const DEFAULT_BUDGET: u64 = 20_000_000;

/// Evaluation state: a cap on atom evaluations. Once spent, every pending
/// quantifier answers `Unknown`, which is always sound.
#[derive(Debug)]
pub struct Evaluator {
    budget: Cell<u64>,
}

impl Default for Evaluator {
    fn default() -> Self {
        Evaluator::new(DEFAULT_BUDGET)
    }
}

impl Evaluator {
    pub fn new(budget: u64) -> Self {
        Evaluator { budget: Cell::new(budget) }
    }

    pub fn remaining(&self) -> u64 {
        self.budget.get()
    }

    fn spend(&self) -> bool {
        let b = self.budget.get();
        if b == 0 {
            return false;
        }
        self.budget.set(b - 1);
        true
    }

    fn term<S: Structure>(&self, s: &S, t: &Term, env: &Env<S::Val>) -> Result<Option<S::Val>> {
        match t {
            Term::Sym(name) => match env.iter().rev().find(|(n, _)| n == name) {
                Some((_, v)) => Ok(Some(v.clone())),
                None => match s.constant(name) {
                    Err(FologError::UnknownSymbol(_)) => Err(FologError::UnboundVariable(name.clone())),
                    other => other.map(Some),
                },
            },
            Term::Lit(text) => s.literal(text).map(Some),
            Term::App(op, args) => {
                let mut vals = Vec::with_capacity(args.len());
                for a in args {
                    match self.term(s, a, env)? {
                        Some(v) => vals.push(v),
                        None => return Ok(None),
                    }
                }
                s.apply(op, &vals)
            }
        }
    }

    pub fn eval<S: Structure>(&self, s: &S, f: &Formula, env: &mut Env<S::Val>) -> Result<TriBool> {
        Ok(match f {
            Formula::Const(b) => TriBool::from(*b),
            Formula::Eq(a, b) => {
                if !self.spend() {
                    return Ok(TriBool::Unknown);
                }
                match (self.term(s, a, env)?, self.term(s, b, env)?) {
                    (Some(x), Some(y)) => TriBool::from(x == y),
                    _ => TriBool::Unknown,
                }
            }
            Formula::Rel(name, args) => {
                if !self.spend() {
                    return Ok(TriBool::Unknown);
                }
                let mut vals = Vec::with_capacity(args.len());
                for a in args {
                    match self.term(s, a, env)? {
                        Some(v) => vals.push(v),
                        None => return Ok(TriBool::Unknown),
                    }
                }
                s.relation(name, &vals)?
            }
            Formula::Not(x) => !self.eval(s, x, env)?,
            Formula::And(xs) => {
                let mut acc = TriBool::True;
                for x in xs {
                    acc = acc.and(self.eval(s, x, env)?);
                    if acc == TriBool::False {
                        break;
                    }
                }
                acc
            }
            Formula::Or(xs) => {
                let mut acc = TriBool::False;
                for x in xs {
                    acc = acc.or(self.eval(s, x, env)?);
                    if acc == TriBool::True {
                        break;
                    }
                }
                acc
            }
            Formula::Implies(a, b) => {
                let l = self.eval(s, a, env)?;
                if l == TriBool::False {
                    TriBool::True
                } else {
                    l.implies(self.eval(s, b, env)?)
                }
            }
            Formula::Iff(a, b) => self.eval(s, a, env)?.iff(self.eval(s, b, env)?),
            Formula::Quant(q, binder, body) => {
                let range = match &binder.range {
                    Range::All => RangeVal::All,
                    Range::Field => RangeVal::Field,
                    Range::DegreeAtMost(d) => RangeVal::DegreeAtMost(*d),
                    Range::Divides(t) | Range::DivisorClass(t) => {
                        let Some(v) = self.term(s, t, env)? else {
                            return Ok(TriBool::Unknown);
                        };
                        if matches!(binder.range, Range::Divides(_)) {
                            RangeVal::Divides(v)
                        } else {
                            RangeVal::DivisorClass(v)
                        }
                    }
                };
                let sort = binder.sort.as_deref().unwrap_or(s.default_sort()).to_string();
                let mut dom = s.domain(&sort, &range)?;
                if let Some(h) = &binder.hint {
                    if let Some(hv) = self.term(s, h, env)? {
                        if let Some(i) = dom.values.iter().position(|v| *v == hv) {
                            let v = dom.values.remove(i);
                            dom.values.insert(0, v);
                        } else if dom.open {
                            dom.values.insert(0, hv);
                        }
                    }
                }
                let (stop, mut acc) = match q {
                    Quantifier::Forall => (TriBool::False, TriBool::True),
                    Quantifier::Exists => (TriBool::True, TriBool::False),
                };
                let mut finished = true;
                for v in dom.values {
                    if self.budget.get() == 0 {
                        finished = false;
                        break;
                    }
                    env.push((binder.var.clone(), v));
                    let r = self.eval(s, body, env);
                    env.pop();
                    let r = r?;
                    if r == stop {
                        return Ok(stop);
                    }
                    if r == TriBool::Unknown {
                        acc = TriBool::Unknown;
                    }
                }
                if !finished || !dom.exhaustive {
                    acc = TriBool::Unknown;
                }
                acc
            }
        })
    }
}

/// Evaluate with the default budget.
pub fn eval<S: Structure>(s: &S, f: &Formula, env: &[(&str, S::Val)]) -> Result<TriBool> {
    eval_with(&Evaluator::default(), s, f, env)
}

pub fn eval_with<S: Structure>(ev: &Evaluator, s: &S, f: &Formula, env: &[(&str, S::Val)]) -> Result<TriBool> {
    let mut env: Env<S::Val> = env.iter().map(|(n, v)| (n.to_string(), v.clone())).collect();
    for v in f.free_vars() {
        if !env.iter().any(|(n, _)| *n == v) && s.constant(&v).is_err() {
            return Err(FologError::UnboundVariable(v));
        }
    }
    ev.eval(s, f, &mut env)
}
