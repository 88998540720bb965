//! S-expression syntax for formulas.
//!
//! ```text
//! (forall (u v :divides x) (implies (= x (* u v)) (or (unit u) (unit v))))
//! (exists (y :deg 3 :sort r :hint "t+1") (= (* x y) 1))
//! ```
//! Numbers are structure constants, strings are literals the structure
//! parses, and a list in formula position whose head is not a connective is
//! a relation.

use std::fmt;

use lexpr::Value;

use super::{Binder, FologError, Formula, Quantifier, Range, Result, Term};

fn syntax(msg: impl Into<String>) -> FologError {
    FologError::Syntax(msg.into())
}

pub fn parse_formula(text: &str) -> Result<Formula> {
    let v = lexpr::from_str(text).map_err(|e| syntax(e.to_string()))?;
    formula(&v)
}

pub fn parse_term(text: &str) -> Result<Term> {
    let v = lexpr::from_str(text).map_err(|e| syntax(e.to_string()))?;
    term(&v)
}

fn list(v: &Value) -> Option<Vec<&Value>> {
    if v.is_null() {
        return Some(Vec::new());
    }
    let iter = v.list_iter()?;
    Some(iter.collect())
}

fn atom_text(v: &Value) -> Option<String> {
    match v {
        Value::Symbol(s) => Some(s.to_string()),
        Value::Number(n) => Some(n.to_string()),
        _ => None,
    }
}

fn term(v: &Value) -> Result<Term> {
    if let Some(s) = atom_text(v) {
        return Ok(Term::Sym(s));
    }
    if let Value::String(s) = v {
        return Ok(Term::Lit(s.to_string()));
    }
    let items = list(v).ok_or_else(|| syntax(format!("not a term: {v}")))?;
    let (head, args) = items.split_first().ok_or_else(|| syntax("empty application"))?;
    let op = atom_text(head).ok_or_else(|| syntax(format!("bad operator {head}")))?;
    Ok(Term::App(op, args.iter().map(|a| term(a)).collect::<Result<_>>()?))
}

fn arity(items: &[&Value], n: usize, what: &str) -> Result<()> {
    if items.len() != n + 1 {
        return Err(syntax(format!("{what} takes {n} argument(s)")));
    }
    Ok(())
}

fn formula(v: &Value) -> Result<Formula> {
    match v {
        Value::Bool(b) => return Ok(Formula::Const(*b)),
        Value::Symbol(s) if &**s == "true" => return Ok(Formula::Const(true)),
        Value::Symbol(s) if &**s == "false" => return Ok(Formula::Const(false)),
        _ => {}
    }
    let items = list(v).ok_or_else(|| syntax(format!("not a formula: {v}")))?;
    let head = items.first().and_then(|h| h.as_symbol()).ok_or_else(|| syntax(format!("bad formula head in {v}")))?;
    let rest = &items[1..];
    let sub = |i: usize| formula(rest[i]);
    Ok(match head {
        "=" => {
            arity(&items, 2, "=")?;
            Formula::Eq(term(rest[0])?, term(rest[1])?)
        }
        "not" => {
            arity(&items, 1, "not")?;
            Formula::not(sub(0)?)
        }
        "and" => Formula::And(rest.iter().map(|f| formula(f)).collect::<Result<_>>()?),
        "or" => Formula::Or(rest.iter().map(|f| formula(f)).collect::<Result<_>>()?),
        "implies" | "->" => {
            arity(&items, 2, head)?;
            Formula::implies(sub(0)?, sub(1)?)
        }
        "iff" | "<->" => {
            arity(&items, 2, head)?;
            Formula::iff(sub(0)?, sub(1)?)
        }
        "forall" | "exists" => {
            arity(&items, 2, head)?;
            let q = if head == "forall" { Quantifier::Forall } else { Quantifier::Exists };
            let binders = binders(rest[0])?;
            let mut body = sub(1)?;
            for b in binders.into_iter().rev() {
                body = Formula::Quant(q, b, Box::new(body));
            }
            body
        }
        name => Formula::Rel(name.to_string(), rest.iter().map(|t| term(t)).collect::<Result<_>>()?),
    })
}

/// `(u v :divides x :sort r)`: variables first, then options shared by all.
fn binders(v: &Value) -> Result<Vec<Binder>> {
    let items = list(v).ok_or_else(|| syntax(format!("bad binder list {v}")))?;
    let mut vars = Vec::new();
    let mut i = 0;
    while i < items.len() {
        match items[i].as_symbol() {
            Some(s) if !s.starts_with(':') => vars.push(s.to_string()),
            _ => break,
        }
        i += 1;
    }
    if vars.is_empty() {
        return Err(syntax(format!("no variables in {v}")));
    }
    let (mut sort, mut range, mut hint) = (None, Range::All, None);
    while i < items.len() {
        let key = items[i].as_symbol().ok_or_else(|| syntax(format!("expected option in {v}")))?;
        let arg = || items.get(i + 1).copied().ok_or_else(|| syntax(format!("{key} needs an argument")));
        i += match key {
            ":field" => {
                range = Range::Field;
                1
            }
            ":divides" => {
                range = Range::Divides(term(arg()?)?);
                2
            }
            ":divisor-class" => {
                range = Range::DivisorClass(term(arg()?)?);
                2
            }
            ":deg" => {
                let d = arg()?.as_u64().ok_or_else(|| syntax(":deg needs a number"))?;
                range = Range::DegreeAtMost(d as usize);
                2
            }
            ":sort" => {
                sort = Some(atom_text(arg()?).ok_or_else(|| syntax(":sort needs a name"))?);
                2
            }
            ":hint" => {
                hint = Some(term(arg()?)?);
                2
            }
            other => return Err(syntax(format!("unknown binder option {other}"))),
        };
    }
    Ok(vars.into_iter().map(|var| Binder { var, sort: sort.clone(), range: range.clone(), hint: hint.clone() }).collect())
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Sym(s) => f.write_str(s),
            Term::Lit(s) => write!(f, "\"{}\"", s.replace('\\', "\\\\").replace('"', "\\\"")),
            Term::App(op, args) => {
                write!(f, "({op}")?;
                for a in args {
                    write!(f, " {a}")?;
                }
                f.write_str(")")
            }
        }
    }
}

impl fmt::Display for Binder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}", self.var)?;
        match &self.range {
            Range::All => {}
            Range::Divides(t) => write!(f, " :divides {t}")?,
            Range::DivisorClass(t) => write!(f, " :divisor-class {t}")?,
            Range::DegreeAtMost(d) => write!(f, " :deg {d}")?,
            Range::Field => f.write_str(" :field")?,
        }
        if let Some(s) = &self.sort {
            write!(f, " :sort {s}")?;
        }
        if let Some(h) = &self.hint {
            write!(f, " :hint {h}")?;
        }
        f.write_str(")")
    }
}

fn write_all(f: &mut fmt::Formatter<'_>, head: &str, items: &[Formula]) -> fmt::Result {
    write!(f, "({head}")?;
    for x in items {
        write!(f, " {x}")?;
    }
    f.write_str(")")
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Formula::Const(b) => f.write_str(if *b { "true" } else { "false" }),
            Formula::Eq(a, b) => write!(f, "(= {a} {b})"),
            Formula::Rel(r, args) => {
                write!(f, "({r}")?;
                for a in args {
                    write!(f, " {a}")?;
                }
                f.write_str(")")
            }
            Formula::Not(x) => write!(f, "(not {x})"),
            Formula::And(xs) => write_all(f, "and", xs),
            Formula::Or(xs) => write_all(f, "or", xs),
            Formula::Implies(a, b) => write!(f, "(implies {a} {b})"),
            Formula::Iff(a, b) => write!(f, "(iff {a} {b})"),
            Formula::Quant(q, b, body) => {
                let name = if *q == Quantifier::Forall { "forall" } else { "exists" };
                write!(f, "({name} {b} {body})")
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn roundtrip() {
        for s in [
            "(forall (u :divides x) (or (in-K u) (divides a u)))",
            "(exists (y :deg 3 :sort r :hint \"t+1\") (= (* x y) 1))",
            "(and true false (not (= (- 3 x1) (+ 1 2))))",
            "(iff (implies (P x) (Q)) (exists (z :field) (= z z)))",
            "(forall (b :divisor-class (* x P)) true)",
        ] {
            let f = parse_formula(s).unwrap();
            assert_eq!(f.to_string(), s);
            assert_eq!(parse_formula(&f.to_string()).unwrap(), f);
        }
    }

    #[test]
    fn sugar() {
        let f = parse_formula("(forall (u v :divides x) (-> #t (<-> #f true)))").unwrap();
        assert_eq!(
            f.to_string(),
            "(forall (u :divides x) (forall (v :divides x) (implies true (iff false true))))"
        );
    }

    #[test]
    fn errors() {
        for s in ["(forall () true)", "(= x)", "(forall (x :bogus) true)", "(not)", "((a) b)", "(forall (x :deg y) true)"] {
            assert!(matches!(parse_formula(s), Err(FologError::Syntax(_))), "{s}");
        }
    }
}
