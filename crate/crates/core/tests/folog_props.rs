use std::collections::BTreeSet;

use freealg::folog::{
    eval, parse_formula, Binder, FinStructure, Formula, PolyStructure, Quantifier, Range, Term, TriBool,
};
use freealg::ncpoly::parse;
use freealg::FieldSpec;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const VARS: [&str; 3] = ["p", "q", "s"];

fn term(rng: &mut ChaCha8Rng, scope: &[&str], depth: usize) -> Term {
    if depth == 0 || rng.gen_bool(0.5) {
        if scope.is_empty() || rng.gen_bool(0.25) {
            return Term::sym("c");
        }
        return Term::sym(scope[rng.gen_range(0..scope.len())]);
    }
    let op = if rng.gen_bool(0.5) { "+" } else { "*" };
    Term::app(op, vec![term(rng, scope, depth - 1), term(rng, scope, depth - 1)])
}

/// Random formula over `+ * c R`, quantifier depth at most `depth`.
fn formula(rng: &mut ChaCha8Rng, scope: &mut Vec<&'static str>, depth: usize) -> Formula {
    let pick = rng.gen_range(0..if depth == 0 { 2 } else { 8 });
    match pick {
        0 => Formula::Eq(term(rng, scope, 2), term(rng, scope, 2)),
        1 => Formula::Rel("R".into(), vec![term(rng, scope, 1)]),
        2 => Formula::not(formula(rng, scope, depth - 1)),
        3 => Formula::And(vec![formula(rng, scope, depth - 1), formula(rng, scope, depth - 1)]),
        4 => Formula::Or(vec![formula(rng, scope, depth - 1), formula(rng, scope, depth - 1)]),
        5 => Formula::implies(formula(rng, scope, depth - 1), formula(rng, scope, depth - 1)),
        _ => {
            let v = VARS[rng.gen_range(0..VARS.len())];
            scope.push(v);
            let body = formula(rng, scope, depth - 1);
            scope.pop();
            let q = if rng.gen_bool(0.5) { Quantifier::Forall } else { Quantifier::Exists };
            Formula::Quant(q, Binder::new(v), Box::new(body))
        }
    }
}

/// Test-side tables: `None` cells are undefined.
#[derive(Debug, Clone)]
struct Tables {
    n: usize,
    add: Vec<Option<usize>>,
    mul: Vec<Option<usize>>,
    rel: Vec<bool>,
    c: usize,
}

impl Tables {
    fn random(rng: &mut ChaCha8Rng) -> Self {
        let n = rng.gen_range(2..=3);
        let cell = |rng: &mut ChaCha8Rng| Some(rng.gen_range(0..n));
        let mut add: Vec<_> = (0..n * n).map(|_| cell(rng)).collect();
        let mut mul: Vec<_> = (0..n * n).map(|_| cell(rng)).collect();
        for _ in 0..rng.gen_range(0..=2) {
            let i = rng.gen_range(0..n * n);
            if rng.gen_bool(0.5) {
                add[i] = None;
            } else {
                mul[i] = None;
            }
        }
        let rel = (0..n).map(|_| rng.gen_bool(0.5)).collect();
        Tables { n, add, mul, rel, c: rng.gen_range(0..n) }
    }

    fn structure(&self) -> FinStructure {
        let mut s = FinStructure::new("e");
        for i in 0..self.n {
            s.add_element(&format!("e{i}"), "e");
        }
        let n = self.n;
        let (add, mul) = (self.add.clone(), self.mul.clone());
        s.set_op_fn("+", 2, move |a| add[a[0] + a[1] * n]);
        s.set_op_fn("*", 2, move |a| mul[a[0] + a[1] * n]);
        s.set_relation("R", 1, (0..n).filter(|&i| self.rel[i]).map(|i| vec![i]).collect());
        s.set_constant("c", self.c);
        s
    }

    /// Every way of filling the undefined cells.
    fn completions(&self) -> Vec<Tables> {
        let holes: Vec<(bool, usize)> = (0..self.n * self.n)
            .flat_map(|i| [(true, i), (false, i)])
            .filter(|&(is_add, i)| if is_add { self.add[i].is_none() } else { self.mul[i].is_none() })
            .collect();
        let mut out = vec![self.clone()];
        for (is_add, i) in holes {
            out = out
                .into_iter()
                .flat_map(|t| {
                    (0..self.n).map(move |v| {
                        let mut t = t.clone();
                        if is_add {
                            t.add[i] = Some(v);
                        } else {
                            t.mul[i] = Some(v);
                        }
                        t
                    })
                })
                .collect();
        }
        out
    }

    fn value(&self, t: &Term, env: &mut Vec<(String, usize)>) -> usize {
        match t {
            Term::Sym(s) if s == "c" => self.c,
            Term::Sym(s) => env.iter().rev().find(|(n, _)| n == s).unwrap().1,
            Term::App(op, args) => {
                let (a, b) = (self.value(&args[0], env), self.value(&args[1], env));
                let table = if op == "+" { &self.add } else { &self.mul };
                table[a + b * self.n].unwrap()
            }
            Term::Lit(_) => unreachable!(),
        }
    }

    /// Plain two-valued truth in a total structure.
    fn truth(&self, f: &Formula, env: &mut Vec<(String, usize)>) -> bool {
        match f {
            Formula::Const(b) => *b,
            Formula::Eq(a, b) => self.value(a, env) == self.value(b, env),
            Formula::Rel(_, args) => self.rel[self.value(&args[0], env)],
            Formula::Not(x) => !self.truth(x, env),
            Formula::And(xs) => xs.iter().all(|x| self.truth(x, env)),
            Formula::Or(xs) => xs.iter().any(|x| self.truth(x, env)),
            Formula::Implies(a, b) => !self.truth(a, env) || self.truth(b, env),
            Formula::Iff(a, b) => self.truth(a, env) == self.truth(b, env),
            Formula::Quant(q, b, body) => {
                let mut hits = (0..self.n).map(|v| {
                    env.push((b.var.clone(), v));
                    let r = self.truth(body, env);
                    env.pop();
                    r
                });
                match q {
                    Quantifier::Forall => hits.all(|r| r),
                    Quantifier::Exists => hits.any(|r| r),
                }
            }
        }
    }
}

fn binders(f: &Formula) -> Vec<String> {
    match f {
        Formula::Not(x) => binders(x),
        Formula::And(xs) | Formula::Or(xs) => xs.iter().flat_map(binders).collect(),
        Formula::Implies(a, b) | Formula::Iff(a, b) => [binders(a), binders(b)].concat(),
        Formula::Quant(_, b, body) => [vec![b.var.clone()], binders(body)].concat(),
        _ => vec![],
    }
}

fn sentence(seed: u64) -> (Tables, Formula) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let t = Tables::random(&mut rng);
    let f = formula(&mut rng, &mut Vec::new(), 3);
    (t, f)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(400))]

    #[test]
    fn definite_values_hold_in_every_completion(seed in any::<u64>()) {
        let (t, f) = sentence(seed);
        let got = eval(&t.structure(), &f, &[]).unwrap();
        let truths: BTreeSet<bool> = t.completions().iter().map(|c| c.truth(&f, &mut Vec::new())).collect();
        match got.to_bool() {
            Some(b) => prop_assert_eq!(truths, BTreeSet::from([b]), "{}", f),
            None => prop_assert!(!t.add.iter().chain(&t.mul).all(Option::is_some), "Unknown on a total structure: {}", f),
        }
    }

    #[test]
    fn negation_is_dual(seed in any::<u64>()) {
        let (t, f) = sentence(seed);
        let s = t.structure();
        prop_assert_eq!(eval(&s, &Formula::not(f.clone()), &[]).unwrap(), !eval(&s, &f, &[]).unwrap());
    }

    #[test]
    fn printing_round_trips(seed in any::<u64>()) {
        let (_, f) = sentence(seed);
        prop_assert_eq!(parse_formula(&f.to_string()).unwrap(), f);
    }

    #[test]
    fn normalization_keeps_meaning(seed in any::<u64>()) {
        let (t, f) = sentence(seed);
        let s = t.structure();
        let g = f.normalize();
        prop_assert_eq!(eval(&s, &g, &[]).unwrap(), eval(&s, &f, &[]).unwrap());
        prop_assert_eq!(g.free_vars(), f.free_vars());
        let names = binders(&g);
        let distinct: BTreeSet<&String> = names.iter().collect();
        prop_assert_eq!(distinct.len(), names.len(), "{}", g);
    }
}

/// Formulas over K[t] with one free variable x and constants t, 0, 1.
fn poly_formula(rng: &mut ChaCha8Rng, scope: &mut Vec<&'static str>, depth: usize) -> Formula {
    let atom = |rng: &mut ChaCha8Rng, scope: &[&str]| {
        let mut names: Vec<&str> = scope.to_vec();
        names.extend(["x", "t", "1"]);
        let pick = |rng: &mut ChaCha8Rng| Term::sym(names[rng.gen_range(0..names.len())]);
        let a = Term::app(if rng.gen_bool(0.5) { "+" } else { "*" }, vec![pick(rng), pick(rng)]);
        let b = pick(rng);
        if rng.gen_bool(0.5) {
            Formula::Eq(a, b)
        } else {
            Formula::rel("divides", vec![b, a])
        }
    };
    match rng.gen_range(0..if depth == 0 { 1 } else { 5 }) {
        0 => atom(rng, scope),
        1 => Formula::not(poly_formula(rng, scope, depth - 1)),
        2 => Formula::And(vec![poly_formula(rng, scope, depth - 1), poly_formula(rng, scope, depth - 1)]),
        _ => {
            let v = ["u", "v"][scope.len() % 2];
            let range = match rng.gen_range(0..4) {
                0 => Range::All,
                1 => Range::Field,
                2 => Range::Divides(Term::sym("x")),
                _ => Range::DegreeAtMost(1),
            };
            scope.push(v);
            let body = poly_formula(rng, scope, depth - 1);
            scope.pop();
            let q = if rng.gen_bool(0.5) { Quantifier::Forall } else { Quantifier::Exists };
            Formula::Quant(q, Binder::ranged(v, range), Box::new(body))
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(150))]

    /// A larger slice never contradicts a definite answer from a smaller one.
    #[test]
    fn slices_agree_on_definite_values(seed in any::<u64>()) {
        let f2 = FieldSpec::prime(2).unwrap();
        let small = PolyStructure::slice(f2, 1, 1).unwrap();
        let big = PolyStructure::slice(f2, 1, 2).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let f = poly_formula(&mut rng, &mut Vec::new(), 2);
        for x in small.carrier() {
            let a = eval(&small, &f, &[("x", x.clone())]).unwrap();
            let b = eval(&big, &f, &[("x", x.clone())]).unwrap();
            if a.is_definite() && b.is_definite() {
                prop_assert_eq!(a, b, "{} at x = {}", f, x);
            }
        }
    }
}

#[test]
fn associates_do_not_change_truth_values() {
    let f3 = FieldSpec::prime(3).unwrap();
    let s = PolyStructure::slice(f3, 1, 3).unwrap();
    let unit = "(exists (i :divides 1) (= (* d i) 1))";
    let all = parse_formula(&format!("(forall (d :divides x) (or {unit} (divides a d)))")).unwrap();
    let classes = parse_formula(&format!("(forall (d :divisor-class x) (or {unit} (divides a d)))")).unwrap();
    for a in ["t", "t + 1", "t^2 + 1"] {
        let a = parse(a, f3, 1).unwrap();
        for x in s.carrier().iter().filter(|x| !x.is_zero()) {
            let env = [("x", x.clone()), ("a", a.clone())];
            let (u, v) = (eval(&s, &all, &env).unwrap(), eval(&s, &classes, &env).unwrap());
            assert!(u.is_definite());
            assert_eq!(u, v, "x = {x}");
        }
    }
    assert_eq!(TriBool::Unknown, !TriBool::Unknown);
}
