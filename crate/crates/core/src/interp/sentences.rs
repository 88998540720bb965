//! Generators of ring sentences for checking translations: random ones and
//! an exhaustive family of small prenex sentences.

use rand::Rng;

use crate::folog::{Binder, Formula, Quantifier, Term};

const NAMES: [&str; 3] = ["x", "y", "z"];

fn ring_term(rng: &mut impl Rng, scope: &[&str], depth: usize) -> Term {
    if depth == 0 || rng.gen_bool(0.4) {
        if scope.is_empty() || rng.gen_bool(0.3) {
            return Term::sym(["0", "1"][rng.gen_range(0..2)]);
        }
        return Term::sym(scope[rng.gen_range(0..scope.len())]);
    }
    match rng.gen_range(0..4) {
        0 => Term::add(ring_term(rng, scope, depth - 1), ring_term(rng, scope, depth - 1)),
        1 => Term::mul(vec![ring_term(rng, scope, depth - 1), ring_term(rng, scope, depth - 1)]),
        2 => Term::sub(ring_term(rng, scope, depth - 1), ring_term(rng, scope, depth - 1)),
        _ => Term::app("-", vec![ring_term(rng, scope, depth - 1)]),
    }
}

fn ring_formula(rng: &mut impl Rng, scope: &mut Vec<&'static str>, quants: usize) -> Formula {
    let pick = rng.gen_range(0..if quants == 0 { 2 } else { 8 });
    match pick {
        0 | 1 => Formula::Eq(ring_term(rng, scope, 2), ring_term(rng, scope, 2)),
        2 => Formula::not(ring_formula(rng, scope, quants)),
        3 => Formula::And(vec![ring_formula(rng, scope, quants - 1), ring_formula(rng, scope, quants - 1)]),
        4 => Formula::Or(vec![ring_formula(rng, scope, quants - 1), ring_formula(rng, scope, quants - 1)]),
        5 => Formula::implies(ring_formula(rng, scope, quants - 1), ring_formula(rng, scope, quants - 1)),
        _ => {
            let v = NAMES[scope.len() % NAMES.len()];
            scope.push(v);
            let body = ring_formula(rng, scope, quants - 1);
            scope.pop();
            let q = if rng.gen_bool(0.5) { Quantifier::Forall } else { Quantifier::Exists };
            Formula::Quant(q, Binder::new(v), Box::new(body))
        }
    }
}

/// A random ring sentence of quantifier depth at most `depth`.
pub fn random_sentence(rng: &mut impl Rng, depth: usize) -> Formula {
    ring_formula(rng, &mut Vec::new(), depth)
}

/// Terms over `vars`, the constant and `op` with at most one application.
fn small_terms(vars: &[&str], op: &str, constant: &str) -> Vec<Term> {
    let leaves: Vec<Term> = vars.iter().map(|v| Term::sym(v)).chain([Term::sym(constant)]).collect();
    let mut out = leaves.clone();
    for a in &leaves {
        for b in &leaves {
            out.push(Term::app(op, vec![a.clone(), b.clone()]));
        }
    }
    out
}

/// Every prenex sentence with at most `max_quants` quantifiers whose matrix
/// is one atom or negated atom over `{+, 0}` or `{*, 1}`, with terms of at
/// most one operation.
pub fn small_sentences(max_quants: usize) -> Vec<Formula> {
    let mut out = Vec::new();
    for k in 1..=max_quants {
        let vars = &NAMES[..k];
        for (op, c) in [("+", "0"), ("*", "1")] {
            let terms = small_terms(vars, op, c);
            let mut matrices = Vec::new();
            for (i, a) in terms.iter().enumerate() {
                for b in &terms[i + 1..] {
                    let atom = Formula::Eq(a.clone(), b.clone());
                    matrices.push(Formula::not(atom.clone()));
                    matrices.push(atom);
                }
            }
            for mask in 0..1u32 << k {
                for m in &matrices {
                    let f = vars.iter().enumerate().rev().fold(m.clone(), |f, (i, v)| {
                        let q = if mask >> i & 1 == 1 { Quantifier::Exists } else { Quantifier::Forall };
                        Formula::Quant(q, Binder::new(v), Box::new(f))
                    });
                    out.push(f);
                }
            }
        }
    }
    out
}
