//! Interpretation schemes: one structure defined inside another by a domain
//! formula on n-tuples, an equivalence on them, and formulas defining the
//! operations, relations and constants. Formulas are translated along a
//! scheme, schemes compose, and on a finite target the interpreted structure
//! is built as an explicit quotient.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::folog::{parse_formula, FinStructure, FologError, Formula};

mod quotient;
pub mod sentences;
mod translate;

pub use quotient::{induced_structure, verify_translation, Quotient, Report, Verifier};
pub use translate::{compose, translate, translate_open};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum InterpError {
    #[error("signature mismatch: {0}")]
    SignatureMismatch(String),
    #[error("not an equivalence: {0}")]
    NotEquivalence(String),
    #[error("not well defined: {0}")]
    NotWellDefined(String),
    #[error("bad scheme: {0}")]
    BadScheme(String),
    #[error(transparent)]
    Folog(#[from] FologError),
}

pub type Result<T> = std::result::Result<T, InterpError>;

/// Single-sorted signature; operations and relations are keyed by name and
/// arity, so `-` may be both unary and binary.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize, Default)]
pub struct Signature {
    #[serde(default = "default_sort")]
    pub sort: String,
    #[serde(default)]
    pub ops: Vec<(String, usize)>,
    #[serde(default)]
    pub relations: Vec<(String, usize)>,
    #[serde(default)]
    pub constants: Vec<String>,
}

fn default_sort() -> String {
    "r".into()
}

impl Signature {
    pub fn ring() -> Self {
        Signature {
            sort: default_sort(),
            ops: vec![("+".into(), 2), ("*".into(), 2), ("-".into(), 1), ("-".into(), 2)],
            relations: vec![],
            constants: vec!["0".into(), "1".into()],
        }
    }

    pub fn has_op(&self, name: &str, arity: usize) -> bool {
        self.ops.iter().any(|(n, a)| n == name && *a == arity)
    }

    pub fn has_relation(&self, name: &str, arity: usize) -> bool {
        self.relations.iter().any(|(n, a)| n == name && *a == arity)
    }

    pub fn has_constant(&self, name: &str) -> bool {
        self.constants.iter().any(|c| c == name)
    }
}

/// A formula together with the names of its tuple variables, flattened:
/// for an operation of arity k in dimension n, `vars` holds k·n argument
/// coordinates followed by n result coordinates.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Def {
    pub vars: Vec<String>,
    #[serde(with = "formula_text")]
    pub formula: Formula,
}

impl Def {
    pub fn new(vars: &[&str], formula: &str) -> Result<Self> {
        Ok(Def { vars: vars.iter().map(|s| s.to_string()).collect(), formula: parse_formula(formula)? })
    }
}

mod formula_text {
    use serde::{Deserialize, Deserializer, Serializer};

    use crate::folog::{parse_formula, Formula};

    pub fn serialize<S: Serializer>(f: &Formula, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&f.to_string())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Formula, D::Error> {
        let text = String::deserialize(d)?;
        parse_formula(&text).map_err(serde::de::Error::custom)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OpDef {
    pub name: String,
    pub arity: usize,
    #[serde(flatten)]
    pub def: Def,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConstDef {
    pub name: String,
    #[serde(flatten)]
    pub def: Def,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InterpScheme {
    pub name: String,
    pub dimension: usize,
    pub source: Signature,
    pub target: Signature,
    /// Finite model of the target this scheme is meant for, e.g. `Z/4`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub target_model: Option<String>,
    pub domain: Def,
    pub equiv: Def,
    pub ops: Vec<OpDef>,
    #[serde(default)]
    pub relations: Vec<OpDef>,
    pub constants: Vec<ConstDef>,
    /// Target constants the formulas may mention besides the signature's.
    #[serde(default)]
    pub params: Vec<String>,
}

const FIXTURES: &[(&str, &str)] = &[
    ("id", include_str!("../../fixtures/id.json")),
    ("z2_in_z4", include_str!("../../fixtures/z2_in_z4.json")),
    ("z4_in_z8", include_str!("../../fixtures/z4_in_z8.json")),
    ("pairs_in_z2", include_str!("../../fixtures/pairs_in_z2.json")),
];

impl InterpScheme {
    pub fn from_json(text: &str) -> Result<Self> {
        let s: InterpScheme = serde_json::from_str(text).map_err(|e| InterpError::BadScheme(e.to_string()))?;
        s.check()?;
        Ok(s)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("schemes serialize")
    }

    pub fn fixture_names() -> impl Iterator<Item = &'static str> {
        FIXTURES.iter().map(|(n, _)| *n)
    }

    pub fn fixture(name: &str) -> Result<Self> {
        let (_, text) = FIXTURES
            .iter()
            .find(|(n, _)| *n == name)
            .ok_or_else(|| InterpError::BadScheme(format!("no fixture {name}")))?;
        Self::from_json(text)
    }

    pub fn op(&self, name: &str, arity: usize) -> Option<&OpDef> {
        self.ops.iter().find(|o| o.name == name && o.arity == arity)
    }

    pub fn relation(&self, name: &str, arity: usize) -> Option<&OpDef> {
        self.relations.iter().find(|o| o.name == name && o.arity == arity)
    }

    pub fn constant(&self, name: &str) -> Option<&ConstDef> {
        self.constants.iter().find(|c| c.name == name)
    }

    /// Arities agree with the dimension and every source symbol has a
    /// definition.
    pub fn check(&self) -> Result<()> {
        let n = self.dimension;
        let bad = |msg: String| Err(InterpError::BadScheme(msg));
        if n == 0 {
            return bad("dimension must be positive".into());
        }
        let want = |d: &Def, k: usize, what: &str| {
            if d.vars.len() != k * n {
                return bad(format!("{what} needs {} variables, has {}", k * n, d.vars.len()));
            }
            Ok(())
        };
        want(&self.domain, 1, "domain")?;
        want(&self.equiv, 2, "equivalence")?;
        for o in &self.ops {
            want(&o.def, o.arity + 1, &format!("operation {}/{}", o.name, o.arity))?;
        }
        for r in &self.relations {
            want(&r.def, r.arity, &format!("relation {}/{}", r.name, r.arity))?;
        }
        for c in &self.constants {
            want(&c.def, 1, &format!("constant {}", c.name))?;
        }
        for (name, arity) in &self.source.ops {
            if self.op(name, *arity).is_none() {
                return Err(InterpError::SignatureMismatch(format!("no formula for operation {name}/{arity}")));
            }
        }
        for (name, arity) in &self.source.relations {
            if self.relation(name, *arity).is_none() {
                return Err(InterpError::SignatureMismatch(format!("no formula for relation {name}/{arity}")));
            }
        }
        for c in &self.source.constants {
            if self.constant(c).is_none() {
                return Err(InterpError::SignatureMismatch(format!("no formula for constant {c}")));
            }
        }
        Ok(())
    }

    /// The finite target named by `target_model`, with the scheme's
    /// parameters bound if the name carries them.
    pub fn model(&self) -> Result<FinStructure> {
        let name = self.target_model.as_deref().ok_or_else(|| InterpError::BadScheme("no target model".into()))?;
        model(name)
    }
}

/// Finite models by name: `Z/n`.
pub fn model(name: &str) -> Result<FinStructure> {
    match name.strip_prefix("Z/").and_then(|n| n.parse::<usize>().ok()) {
        Some(n) if n >= 1 => Ok(FinStructure::zmod(n)),
        _ => Err(InterpError::BadScheme(format!("unknown model {name}"))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fixtures_load_and_round_trip() {
        for name in InterpScheme::fixture_names() {
            let s = InterpScheme::fixture(name).unwrap();
            assert_eq!(InterpScheme::from_json(&s.to_json()).unwrap(), s, "{name}");
            s.model().unwrap();
        }
        assert_eq!(InterpScheme::fixture("pairs_in_z2").unwrap().dimension, 2);
    }

    #[test]
    fn checks() {
        let mut s = InterpScheme::fixture("z2_in_z4").unwrap();
        s.ops.retain(|o| o.name != "*");
        assert!(matches!(s.check(), Err(InterpError::SignatureMismatch(_))));
        let mut s = InterpScheme::fixture("z2_in_z4").unwrap();
        s.equiv.vars.pop();
        assert!(matches!(s.check(), Err(InterpError::BadScheme(_))));
        assert!(matches!(InterpScheme::from_json("{\"name\": 1}"), Err(InterpError::BadScheme(_))));
        assert!(model("Q").is_err());
    }
}
