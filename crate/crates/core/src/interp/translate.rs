use std::collections::BTreeSet;

use super::{ConstDef, Def, InterpError, InterpScheme, OpDef, Result, Signature};
use crate::folog::{fresh_name, Binder, Formula, Quantifier, Range, Term};

fn mismatch(msg: impl Into<String>) -> InterpError {
    InterpError::SignatureMismatch(msg.into())
}

/// Coordinate names of the tuple standing for source variable `v`.
pub(super) fn coords(v: &str, n: usize) -> Vec<String> {
    (1..=n).map(|j| format!("{v}.{j}")).collect()
}

fn syms(names: &[String]) -> Vec<Term> {
    names.iter().map(|s| Term::Sym(s.clone())).collect()
}

fn conj(parts: Vec<Formula>) -> Formula {
    let mut parts: Vec<Formula> = parts.into_iter().filter(|f| *f != Formula::Const(true)).collect();
    match parts.len() {
        0 => Formula::Const(true),
        1 => parts.remove(0),
        _ => Formula::And(parts),
    }
}

fn quantify(q: Quantifier, vars: &[String], body: Formula) -> Formula {
    vars.iter().rev().fold(body, |f, v| Formula::Quant(q, Binder::new(v), Box::new(f)))
}

fn mentions(t: &Term, names: &[String]) -> bool {
    match t {
        Term::Sym(s) => names.contains(s),
        Term::Lit(_) => false,
        Term::App(_, args) => args.iter().any(|a| mentions(a, names)),
    }
}

/// Simultaneous substitution of terms for variables in a term.
fn rename_all(t: &Term, vars: &[String], to: &[Term]) -> Term {
    match t {
        Term::Sym(s) => match vars.iter().position(|v| v == s) {
            Some(i) => to[i].clone(),
            None => t.clone(),
        },
        Term::Lit(_) => t.clone(),
        Term::App(op, args) => Term::App(op.clone(), args.iter().map(|a| rename_all(a, vars, to)).collect()),
    }
}

/// `r_j = T_j` for every result coordinate, with no `T_j` mentioning a
/// result coordinate: the definition is a term and needs no witness.
fn explicit(def: &Def, results: usize) -> Option<Vec<Term>> {
    let rs = &def.vars[def.vars.len() - results..];
    let parts = match &def.formula {
        Formula::And(xs) => xs.iter().collect::<Vec<_>>(),
        f => vec![f],
    };
    if parts.len() != results {
        return None;
    }
    rs.iter()
        .zip(parts)
        .map(|(r, f)| match f {
            Formula::Eq(Term::Sym(a), t) | Formula::Eq(t, Term::Sym(a)) if a == r && !mentions(t, rs) => Some(t.clone()),
            _ => None,
        })
        .collect()
}

/// A witness tuple and the constraints fixing it.
type Step = (Vec<String>, Vec<Formula>);

struct Translator<'a> {
    s: &'a InterpScheme,
    n: usize,
    taken: BTreeSet<String>,
}

impl<'a> Translator<'a> {
    fn new(s: &'a InterpScheme, f: &Formula) -> Self {
        let mut taken = f.all_symbols();
        for d in s.defs() {
            taken.extend(d.formula.all_symbols());
            taken.extend(d.vars.iter().cloned());
        }
        Translator { s, n: s.dimension, taken }
    }

    fn fresh(&mut self, base: &str) -> String {
        loop {
            let v = fresh_name(base, &mut self.taken);
            let cs = coords(&v, self.n);
            if cs.iter().all(|c| !self.taken.contains(c)) {
                self.taken.extend(cs);
                return v;
            }
        }
    }

    /// The definition with its variables replaced by `args`, avoiding capture.
    fn inst(&mut self, def: &Def, args: &[Term]) -> Formula {
        let holes: Vec<String> = def.vars.iter().map(|_| fresh_name("_h", &mut self.taken)).collect();
        let mut f = def.formula.clone();
        for (v, h) in def.vars.iter().zip(&holes) {
            f = f.subst(v, &Term::Sym(h.clone()));
        }
        for (h, a) in holes.iter().zip(args) {
            f = f.subst(h, a);
        }
        f
    }

    fn domain(&mut self, tuple: &[Term]) -> Formula {
        let d = self.s.domain.clone();
        self.inst(&d, tuple)
    }

    /// Apply a definition of arity k to argument tuples: returns the result
    /// tuple, adding witnesses and constraints when the definition is not a
    /// term.
    fn apply(&mut self, def: &Def, args: Vec<Term>, steps: &mut Vec<Step>) -> Vec<Term> {
        let n = self.n;
        if let Some(ts) = explicit(def, n) {
            let params = &def.vars[..def.vars.len() - n];
            return ts.iter().map(|t| rename_all(t, params, &args)).collect();
        }
        let r = self.fresh("_t");
        let rs = coords(&r, n);
        let all: Vec<Term> = args.into_iter().chain(syms(&rs)).collect();
        let phi = self.inst(def, &all);
        let dom = self.domain(&syms(&rs));
        steps.push((rs.clone(), vec![dom, phi]));
        syms(&rs)
    }

    fn term(&mut self, t: &Term, scope: &[String], steps: &mut Vec<Step>) -> Result<Vec<Term>> {
        match t {
            Term::Sym(v) if scope.contains(v) => Ok(syms(&coords(v, self.n))),
            Term::Sym(c) => {
                if let Some(ConstDef { def, .. }) = self.s.constant(c) {
                    let def = def.clone();
                    return Ok(self.apply(&def, vec![], steps));
                }
                // numerals are sums of 1
                match c.parse::<u64>() {
                    Ok(k) if k >= 2 && self.s.source.has_op("+", 2) && self.s.constant("1").is_some() => {
                        let sum = (1..k).fold(Term::sym("1"), |acc, _| Term::add(acc, Term::sym("1")));
                        self.term(&sum, scope, steps)
                    }
                    _ => Err(mismatch(format!("unknown symbol {c}"))),
                }
            }
            Term::Lit(l) => Err(mismatch(format!("literal \"{l}\" has no meaning in an interpreted structure"))),
            Term::App(op, args) => {
                let k = args.len();
                if let Some(OpDef { def, .. }) = self.s.op(op, k) {
                    let def = def.clone();
                    let mut flat = Vec::with_capacity(k * self.n);
                    for a in args {
                        flat.extend(self.term(a, scope, steps)?);
                    }
                    return Ok(self.apply(&def, flat, steps));
                }
                if k > 2 && self.s.op(op, 2).is_some() {
                    let folded = args[1..].iter().fold(args[0].clone(), |acc, a| Term::app(op, vec![acc, a.clone()]));
                    return self.term(&folded, scope, steps);
                }
                Err(mismatch(format!("no operation {op}/{k}")))
            }
        }
    }

    /// Translate an atom: witnesses for compound subterms, then the atom's
    /// own definition.
    fn atom(&mut self, terms: &[Term], scope: &[String], def: &Def) -> Result<Formula> {
        let mut steps = Vec::new();
        let mut flat = Vec::new();
        for t in terms {
            flat.extend(self.term(t, scope, &mut steps)?);
        }
        // each witness is bound just outside its own constraints, so a wrong
        // choice is rejected before later witnesses are tried
        let atom = self.inst(def, &flat);
        Ok(steps.into_iter().rev().fold(atom, |body, (rs, mut cs)| {
            cs.push(body);
            quantify(Quantifier::Exists, &rs, conj(cs))
        }))
    }

    fn formula(&mut self, f: &Formula, scope: &mut Vec<String>) -> Result<Formula> {
        Ok(match f {
            Formula::Const(b) => Formula::Const(*b),
            Formula::Eq(a, b) => {
                let e = self.s.equiv.clone();
                self.atom(&[a.clone(), b.clone()], scope, &e)?
            }
            Formula::Rel(name, args) => match self.s.relation(name, args.len()) {
                Some(OpDef { def, .. }) => {
                    let def = def.clone();
                    self.atom(args, scope, &def)?
                }
                None if name == "divides" && args.len() == 2 && self.s.source.has_op("*", 2) => {
                    let w = fresh_name("_w", &mut self.taken);
                    let prod = Term::mul(vec![args[0].clone(), Term::Sym(w.clone())]);
                    let ex = Formula::exists(Binder::new(&w), Formula::eq(args[1].clone(), prod));
                    self.formula(&ex, scope)?
                }
                None => return Err(mismatch(format!("no relation {name}/{}", args.len()))),
            },
            Formula::Not(x) => Formula::not(self.formula(x, scope)?),
            Formula::And(xs) => Formula::And(xs.iter().map(|x| self.formula(x, scope)).collect::<Result<_>>()?),
            Formula::Or(xs) => Formula::Or(xs.iter().map(|x| self.formula(x, scope)).collect::<Result<_>>()?),
            Formula::Implies(a, b) => Formula::implies(self.formula(a, scope)?, self.formula(b, scope)?),
            Formula::Iff(a, b) => Formula::iff(self.formula(a, scope)?, self.formula(b, scope)?),
            Formula::Quant(q, binder, body) => {
                if let Some(sort) = &binder.sort {
                    if *sort != self.s.source.sort {
                        return Err(mismatch(format!("no sort {sort}")));
                    }
                }
                let v = binder.var.clone();
                let guard = match &binder.range {
                    Range::All => None,
                    Range::Divides(t) | Range::DivisorClass(t) => Some(Formula::rel("divides", vec![Term::Sym(v.clone()), t.clone()])),
                    Range::Field | Range::DegreeAtMost(_) => {
                        return Err(mismatch("field and degree ranges have no counterpart in the source signature"))
                    }
                };
                scope.push(v.clone());
                let inner = guard.map(|g| self.formula(&g, scope)).transpose()?;
                let body = self.formula(body, scope)?;
                scope.pop();
                let cs = coords(&v, self.n);
                let dom = self.domain(&syms(&cs));
                let guard = conj(std::iter::once(dom).chain(inner).collect());
                let body = match (q, guard) {
                    (_, Formula::Const(true)) => body,
                    (Quantifier::Forall, g) => Formula::implies(g, body),
                    (Quantifier::Exists, g) => conj(vec![g, body]),
                };
                quantify(*q, &cs, body)
            }
        })
    }
}

impl InterpScheme {
    fn defs(&self) -> impl Iterator<Item = &Def> {
        [&self.domain, &self.equiv]
            .into_iter()
            .chain(self.ops.iter().map(|o| &o.def))
            .chain(self.relations.iter().map(|r| &r.def))
            .chain(self.constants.iter().map(|c| &c.def))
    }
}

/// Translate a source sentence into a target sentence true in the target
/// exactly when the source sentence holds in the interpreted structure.
pub fn translate(s: &InterpScheme, f: &Formula) -> Result<Formula> {
    translate_open(s, f, &[])
}

/// As [`translate`], with `free` naming free source variables; variable `v`
/// becomes the coordinates `v.1 … v.n`.
pub fn translate_open(s: &InterpScheme, f: &Formula, free: &[String]) -> Result<Formula> {
    let f = f.normalize();
    let mut tr = Translator::new(s, &f);
    for v in free {
        tr.taken.extend(coords(v, s.dimension));
    }
    tr.formula(&f, &mut free.to_vec())
}

fn same_signature(a: &Signature, b: &Signature) -> bool {
    let set = |xs: &[(String, usize)]| xs.iter().cloned().collect::<BTreeSet<_>>();
    a.sort == b.sort
        && set(&a.ops) == set(&b.ops)
        && set(&a.relations) == set(&b.relations)
        && a.constants.iter().collect::<BTreeSet<_>>() == b.constants.iter().collect::<BTreeSet<_>>()
}

/// `outer` interprets A in B and `inner` interprets B in C; the result
/// interprets A in C with dimension the product of the two.
pub fn compose(outer: &InterpScheme, inner: &InterpScheme) -> Result<InterpScheme> {
    if !same_signature(&outer.target, &inner.source) {
        return Err(mismatch(format!("{} does not interpret the target of {}", inner.name, outer.name)));
    }
    let m = inner.dimension;
    let lift = |d: &Def| -> Result<Def> {
        let formula = translate_open(inner, &d.formula, &d.vars)?;
        Ok(Def { vars: d.vars.iter().flat_map(|v| coords(v, m)).collect(), formula })
    };
    let mut domain = lift(&outer.domain)?;
    let mut tr = Translator::new(inner, &domain.formula);
    let guards: Vec<Formula> =
        outer.domain.vars.iter().map(|v| tr.domain(&syms(&coords(v, m)))).chain([domain.formula]).collect();
    domain.formula = conj(guards);
    Ok(InterpScheme {
        name: format!("{}+{}", outer.name, inner.name),
        dimension: outer.dimension * m,
        source: outer.source.clone(),
        target: inner.target.clone(),
        target_model: inner.target_model.clone(),
        domain,
        equiv: lift(&outer.equiv)?,
        ops: outer
            .ops
            .iter()
            .map(|o| Ok(OpDef { name: o.name.clone(), arity: o.arity, def: lift(&o.def)? }))
            .collect::<Result<_>>()?,
        relations: outer
            .relations
            .iter()
            .map(|o| Ok(OpDef { name: o.name.clone(), arity: o.arity, def: lift(&o.def)? }))
            .collect::<Result<_>>()?,
        constants: outer
            .constants
            .iter()
            .map(|c| Ok(ConstDef { name: c.name.clone(), def: lift(&c.def)? }))
            .collect::<Result<_>>()?,
        params: inner.params.clone(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::folog::parse_formula;

    fn f(s: &str) -> Formula {
        parse_formula(s).unwrap()
    }

    #[test]
    fn identity_only_renames() {
        let id = InterpScheme::fixture("id").unwrap();
        for src in [
            "(forall (x) (= x x))",
            "(exists (x) (and (= (+ x x) 0) (not (= x 0))))",
            "(forall (x y) (implies (= (* x y) 1) (= (* y x) 1)))",
        ] {
            let got = translate(&id, &f(src)).unwrap().to_string();
            assert_eq!(f(&got.replace(".1", "")), f(src));
        }
    }

    #[test]
    fn relativizes_and_replaces_equality() {
        let s = InterpScheme::fixture("z2_in_z4").unwrap();
        assert_eq!(
            translate(&s, &f("(forall (x) (= x x))")).unwrap().to_string(),
            "(forall (x.1) (exists (z) (= x.1 (+ x.1 z z))))"
        );
        let mut guarded = s.clone();
        guarded.domain.formula = f("(= (* x x x) x)");
        assert_eq!(
            translate(&guarded, &f("(exists (y) (= y 1))")).unwrap().to_string(),
            "(exists (y.1) (and (= (* y.1 y.1 y.1) y.1) (exists (z) (= y.1 (+ 1 z z)))))"
        );
    }

    #[test]
    fn implicit_definitions_get_witnesses() {
        let mut s = InterpScheme::fixture("id").unwrap();
        s.ops[0].def.formula = f("(= (- r a) b)");
        let got = translate(&s, &f("(forall (x) (= (+ x x) 0))")).unwrap().to_string();
        assert_eq!(got, "(forall (x.1) (exists (_t'1.1) (and (= (- _t'1.1 x.1) x.1) (= _t'1.1 0))))");
    }

    #[test]
    fn errors() {
        let s = InterpScheme::fixture("z2_in_z4").unwrap();
        for bad in ["(forall (x :field) true)", "(exists (x) (= (f x) x))", "(R 0)", "(= \"t\" 0)", "(= q 0)"] {
            assert!(matches!(translate(&s, &f(bad)), Err(InterpError::SignatureMismatch(_))), "{bad}");
        }
        let mut other = s.clone();
        other.source.ops.pop();
        assert!(matches!(compose(&s, &other), Err(InterpError::SignatureMismatch(_))));
    }

    #[test]
    fn composition_multiplies_dimensions() {
        let pairs = InterpScheme::fixture("pairs_in_z2").unwrap();
        let z = InterpScheme::fixture("z2_in_z4").unwrap();
        let id = InterpScheme::fixture("id").unwrap();
        assert_eq!(compose(&pairs, &z).unwrap().dimension, 2);
        assert_eq!(compose(&id, &pairs).unwrap().dimension, 2);
        let c = compose(&pairs, &z).unwrap();
        c.check().unwrap();
        assert_eq!(InterpScheme::from_json(&c.to_json()).unwrap(), c);
    }
}
