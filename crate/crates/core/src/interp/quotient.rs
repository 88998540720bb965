use std::collections::{BTreeMap, BTreeSet};

use super::translate::coords;
use super::{translate_open, Def, InterpError, InterpScheme, Result};
use crate::folog::{eval, FinStructure, Formula, Quantifier, Range, Term, TriBool};

/// The structure a scheme defines inside a finite target: classes of domain
/// tuples under the equivalence.
#[derive(Debug, Clone)]
pub struct Quotient {
    pub structure: FinStructure,
    /// A representative tuple per class, in class order.
    pub reps: Vec<Vec<usize>>,
    /// Class of every domain tuple.
    pub class_of: BTreeMap<Vec<usize>, usize>,
}

impl Quotient {
    pub fn size(&self) -> usize {
        self.reps.len()
    }

    fn members(&self, class: usize) -> Vec<&Vec<usize>> {
        self.class_of.iter().filter(|(_, &c)| c == class).map(|(t, _)| t).collect()
    }
}

fn product(n: usize, k: usize) -> Vec<Vec<usize>> {
    (0..k).fold(vec![vec![]], |acc, _| {
        acc.into_iter().flat_map(|t| (0..n).map(move |i| [t.clone(), vec![i]].concat())).collect()
    })
}

struct Target<'a> {
    s: &'a InterpScheme,
    b: &'a FinStructure,
}

impl Target<'_> {
    fn holds(&self, def: &Def, vals: &[usize]) -> Result<bool> {
        let env: Vec<(&str, usize)> = def.vars.iter().map(String::as_str).zip(vals.iter().copied()).collect();
        match eval(self.b, &def.formula, &env)?.to_bool() {
            Some(v) => Ok(v),
            None => Err(InterpError::NotWellDefined(format!("{} has no definite value at {vals:?}", def.formula))),
        }
    }

    fn label(&self, t: &[usize]) -> String {
        let parts: Vec<&str> = t.iter().map(|&i| self.b.label(i)).collect();
        if parts.len() == 1 {
            parts[0].to_string()
        } else {
            format!("({})", parts.join(","))
        }
    }

    fn classes_where(&self, def: &Def, prefix: &[usize], q: &Quotient) -> Result<BTreeSet<usize>> {
        let mut out = BTreeSet::new();
        for (t, &c) in &q.class_of {
            if !out.contains(&c) && self.holds(def, &[prefix, t].concat())? {
                out.insert(c);
            }
        }
        Ok(out)
    }

    /// Classes of the result over every choice of argument representatives
    /// (only the canonical ones unless `strict`).
    fn results(&self, def: &Def, args: &[usize], q: &Quotient, strict: bool, what: &str) -> Result<Option<usize>> {
        let choices: Vec<Vec<&Vec<usize>>> =
            args.iter().map(|&c| if strict { q.members(c) } else { vec![&q.reps[c]] }).collect();
        let mut seen: Option<usize> = None;
        let mut picks = vec![0; args.len()];
        loop {
            let flat: Vec<usize> = picks.iter().enumerate().flat_map(|(i, &p)| choices[i][p].iter().copied()).collect();
            let got = self.classes_where(def, &flat, q)?;
            let one = match (got.len(), strict) {
                (1, _) => *got.iter().next().unwrap(),
                (0, false) => return Ok(None),
                (_, false) => *got.iter().next().unwrap(),
                (k, true) => {
                    return Err(InterpError::NotWellDefined(format!("{what} has {k} values at {}", self.label(&flat))))
                }
            };
            match seen {
                Some(c) if c != one => {
                    return Err(InterpError::NotWellDefined(format!("{what} depends on representatives")));
                }
                _ => seen = Some(one),
            }
            // next representative choice
            let mut i = 0;
            while i < picks.len() {
                picks[i] += 1;
                if picks[i] < choices[i].len() {
                    break;
                }
                picks[i] = 0;
                i += 1;
            }
            if i == picks.len() {
                return Ok(seen);
            }
        }
    }

    fn build(&self, strict: bool) -> Result<Quotient> {
        let s = self.s;
        let n = s.dimension;
        for p in &s.params {
            if !self.b.constants().any(|(c, _)| c == p) {
                return Err(InterpError::SignatureMismatch(format!("target has no constant {p}")));
            }
        }
        let carrier = self.b.carrier(&s.target.sort);
        let mut dom = Vec::new();
        for t in product(carrier.len(), n) {
            let t: Vec<usize> = t.into_iter().map(|i| carrier[i]).collect();
            if self.holds(&s.domain, &t)? {
                dom.push(t);
            }
        }
        if dom.is_empty() {
            return Err(InterpError::NotWellDefined("the domain is empty".into()));
        }
        let k = dom.len();
        let mut eq = vec![false; k * k];
        for i in 0..k {
            for j in 0..k {
                eq[i * k + j] = self.holds(&s.equiv, &[dom[i].as_slice(), &dom[j]].concat())?;
            }
        }
        let (d, e) = (&dom, &eq);
        let show = |i: usize| self.label(&d[i]);
        for i in 0..k {
            if !e[i * k + i] {
                return Err(InterpError::NotEquivalence(format!("not reflexive at {}", show(i))));
            }
            for j in 0..k {
                if e[i * k + j] != e[j * k + i] {
                    return Err(InterpError::NotEquivalence(format!("not symmetric at {}, {}", show(i), show(j))));
                }
                for l in 0..k {
                    if e[i * k + j] && e[j * k + l] && !e[i * k + l] {
                        return Err(InterpError::NotEquivalence(format!(
                            "not transitive at {}, {}, {}",
                            show(i),
                            show(j),
                            show(l)
                        )));
                    }
                }
            }
        }
        let mut reps: Vec<usize> = Vec::new();
        let mut class_of = BTreeMap::new();
        for i in 0..k {
            let c = match reps.iter().position(|&r| e[r * k + i]) {
                Some(c) => c,
                None => {
                    reps.push(i);
                    reps.len() - 1
                }
            };
            class_of.insert(dom[i].clone(), c);
        }
        let mut q = Quotient {
            structure: FinStructure::new(&s.source.sort),
            reps: reps.iter().map(|&r| dom[r].clone()).collect(),
            class_of,
        };
        for r in &q.reps {
            let l = self.label(r);
            q.structure.add_element(&l, &s.source.sort);
        }
        let m = q.size();
        let mut built = FinStructure::new(&s.source.sort);
        std::mem::swap(&mut built, &mut q.structure);
        for op in &s.ops {
            let what = format!("operation {}/{}", op.name, op.arity);
            let mut cells = BTreeMap::new();
            for args in product(m, op.arity) {
                cells.insert(args.clone(), self.results(&op.def, &args, &q, strict, &what)?);
            }
            built.set_op_fn(&op.name, op.arity, move |a| cells[a]);
        }
        for rel in &s.relations {
            let mut tuples = BTreeSet::new();
            for args in product(m, rel.arity) {
                let mut value = None;
                let choices: Vec<Vec<&Vec<usize>>> =
                    args.iter().map(|&c| if strict { q.members(c) } else { vec![&q.reps[c]] }).collect();
                for pick in product_of(&choices) {
                    let v = self.holds(&rel.def, &pick)?;
                    if value.is_some_and(|w| w != v) {
                        return Err(InterpError::NotWellDefined(format!(
                            "relation {}/{} depends on representatives",
                            rel.name, rel.arity
                        )));
                    }
                    value = Some(v);
                }
                if value == Some(true) {
                    tuples.insert(args);
                }
            }
            built.set_relation(&rel.name, rel.arity, tuples);
        }
        for c in &s.constants {
            let got = self.classes_where(&c.def, &[], &q)?;
            match (got.len(), strict) {
                (1, _) | (2.., false) => built.set_constant(&c.name, *got.iter().next().unwrap()),
                (k, _) => {
                    return Err(InterpError::NotWellDefined(format!("constant {} has {k} values", c.name)));
                }
            }
        }
        q.structure = built;
        Ok(q)
    }
}

fn product_of(choices: &[Vec<&Vec<usize>>]) -> Vec<Vec<usize>> {
    choices.iter().fold(vec![vec![]], |acc, opts| {
        acc.into_iter().flat_map(|t| opts.iter().map(move |o| [t.clone(), o.to_vec()].concat())).collect()
    })
}

/// The interpreted structure on the finite target `b`. Fails unless the
/// equivalence is one and every definition respects it.
pub fn induced_structure(s: &InterpScheme, b: &FinStructure) -> Result<Quotient> {
    Target { s, b }.build(true)
}

/// Outcome of checking one sentence along a scheme.
#[derive(Debug, Clone, PartialEq)]
pub struct Report {
    /// Value in the interpreted structure.
    pub source_value: TriBool,
    /// Value of the translation in the target.
    pub target_value: TriBool,
    pub agree: bool,
    /// On disagreement: source variables and the target tuples where a
    /// smallest disagreeing subformula fails.
    pub counterexample: Option<Vec<(String, String)>>,
    /// Why the strict quotient failed, when it did; the values were then
    /// computed on canonical representatives.
    pub quotient_warning: Option<String>,
}

/// Checks many sentences along one scheme, building the quotient once.
pub struct Verifier<'a> {
    t: Target<'a>,
    q: Quotient,
    dom: Vec<Vec<usize>>,
    warning: Option<String>,
}

impl<'a> Verifier<'a> {
    /// Definitions that ignore the equivalence still produce a structure,
    /// built on canonical representatives, so that the mismatch shows up as
    /// a disagreement with a counterexample.
    pub fn new(s: &'a InterpScheme, b: &'a FinStructure) -> Result<Self> {
        let t = Target { s, b };
        let warning = t.build(true).err().map(|e| e.to_string());
        let q = t.build(false)?;
        let dom = q.class_of.keys().cloned().collect();
        Ok(Verifier { t, q, dom, warning })
    }

    pub fn quotient(&self) -> &Quotient {
        &self.q
    }

    pub fn check(&self, f: &Formula) -> Result<Report> {
        let (source_value, target_value) = self.values(f, &[])?;
        let agree = source_value == target_value;
        let counterexample = if agree { None } else { Some(self.descend(f, &mut Vec::new())?) };
        Ok(Report { source_value, target_value, agree, counterexample, quotient_warning: self.warning.clone() })
    }

    fn values(&self, f: &Formula, env: &[(String, Vec<usize>)]) -> Result<(TriBool, TriBool)> {
        let src: Vec<(&str, usize)> = env.iter().map(|(v, t)| (v.as_str(), self.q.class_of[t])).collect();
        let a = eval(&self.q.structure, f, &src)?;
        let names: Vec<String> = env.iter().map(|(v, _)| v.clone()).collect();
        let g = translate_open(self.t.s, f, &names)?;
        let n = self.t.s.dimension;
        let tgt: Vec<(String, usize)> =
            env.iter().flat_map(|(v, t)| coords(v, n).into_iter().zip(t.iter().copied())).collect();
        let tgt: Vec<(&str, usize)> = tgt.iter().map(|(v, x)| (v.as_str(), *x)).collect();
        let b = eval(self.t.b, &g, &tgt)?;
        Ok((a, b))
    }

    fn differs(&self, f: &Formula, env: &[(String, Vec<usize>)]) -> Result<bool> {
        let (a, b) = self.values(f, env)?;
        Ok(a != b)
    }

    /// Walk down to a disagreeing atom, assuming `f` disagrees under `env`.
    fn descend(&self, f: &Formula, env: &mut Vec<(String, Vec<usize>)>) -> Result<Vec<(String, String)>> {
        let parts: Vec<&Formula> = match f {
            Formula::Not(x) => vec![x],
            Formula::And(xs) | Formula::Or(xs) => xs.iter().collect(),
            Formula::Implies(a, b) | Formula::Iff(a, b) => vec![a, b],
            Formula::Quant(q, binder, body) => {
                let inner = match &binder.range {
                    Range::Divides(t) | Range::DivisorClass(t) => {
                        let g = Formula::rel("divides", vec![Term::Sym(binder.var.clone()), t.clone()]);
                        match q {
                            Quantifier::Forall => Formula::implies(g, (**body).clone()),
                            Quantifier::Exists => Formula::And(vec![g, (**body).clone()]),
                        }
                    }
                    _ => (**body).clone(),
                };
                let saved = env.clone();
                env.retain(|(v, _)| *v != binder.var);
                for t in &self.dom {
                    env.push((binder.var.clone(), t.clone()));
                    if self.differs(&inner, env)? {
                        return self.descend(&inner, env);
                    }
                    env.pop();
                }
                *env = saved;
                return Ok(self.render(env));
            }
            _ => return Ok(self.render(env)),
        };
        for p in parts {
            if self.differs(p, env)? {
                return self.descend(p, env);
            }
        }
        Ok(self.render(env))
    }

    fn render(&self, env: &[(String, Vec<usize>)]) -> Vec<(String, String)> {
        env.iter().map(|(v, t)| (v.clone(), self.t.label(t))).collect()
    }
}

/// Evaluate `f` in the interpreted structure and its translation in `b`.
pub fn verify_translation(s: &InterpScheme, b: &FinStructure, f: &Formula) -> Result<Report> {
    Verifier::new(s, b)?.check(f)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::folog::parse_formula;

    #[test]
    fn z2_inside_z4() {
        let s = InterpScheme::fixture("z2_in_z4").unwrap();
        let q = induced_structure(&s, &s.model().unwrap()).unwrap();
        assert_eq!(q.size(), 2);
        assert!(q.structure.isomorphism(&FinStructure::zmod(2)).is_some());
        let f = parse_formula("(exists (x) (and (= (+ x x) 0) (not (= x 0))))").unwrap();
        let r = verify_translation(&s, &s.model().unwrap(), &f).unwrap();
        // 1 + 1 = 0 in ℤ/2, and 1 + 1 ≡ 0 mod 2 in ℤ/4
        assert_eq!(r.source_value, TriBool::True, "{r:?}");
        assert!(r.agree && r.quotient_warning.is_none());
    }

    #[test]
    fn bad_equivalences() {
        let b = FinStructure::zmod(4);
        let mut s = InterpScheme::fixture("z2_in_z4").unwrap();
        s.equiv.formula = Formula::Const(true);
        assert_eq!(induced_structure(&s, &b).unwrap().size(), 1);
        // x - y ∈ {-1, 0, 1}
        s.equiv.formula = parse_formula("(or (= x y) (= x (+ y 1)) (= y (+ x 1)))").unwrap();
        assert!(matches!(induced_structure(&s, &b), Err(InterpError::NotEquivalence(_))));
    }
}
