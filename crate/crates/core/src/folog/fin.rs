use std::collections::{BTreeMap, BTreeSet};

use super::eval::{Domain, RangeVal, Structure};
use super::{FologError, Result, TriBool};

/// Operation table over element ids; cell `Σ args[i]·nⁱ` holds the result,
/// `None` where the operation is undefined.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OpTable {
    pub arity: usize,
    pub cells: Vec<Option<usize>>,
}

/// A finite multi-sorted structure. Elements are ids `0..size`, each in
/// exactly one sort.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FinStructure {
    default_sort: String,
    labels: Vec<String>,
    sort_of: Vec<String>,
    ops: BTreeMap<(String, usize), OpTable>,
    relations: BTreeMap<(String, usize), BTreeSet<Vec<usize>>>,
    constants: BTreeMap<String, usize>,
}

fn cell_index(args: &[usize], n: usize) -> usize {
    args.iter().rev().fold(0, |acc, &a| acc * n + a)
}

impl FinStructure {
    pub fn new(default_sort: &str) -> Self {
        FinStructure {
            default_sort: default_sort.to_string(),
            labels: Vec::new(),
            sort_of: Vec::new(),
            ops: BTreeMap::new(),
            relations: BTreeMap::new(),
            constants: BTreeMap::new(),
        }
    }

    /// The ring ℤ/n with `+`, `*`, unary and binary `-`, and numerals.
    pub fn zmod(n: usize) -> Self {
        assert!(n >= 1);
        let mut s = FinStructure::new("r");
        for i in 0..n {
            s.add_element(&i.to_string(), "r");
        }
        s.set_op_fn("+", 2, |a| Some((a[0] + a[1]) % n));
        s.set_op_fn("*", 2, |a| Some((a[0] * a[1]) % n));
        s.set_op_fn("-", 2, |a| Some((a[0] + n - a[1]) % n));
        s.set_op_fn("-", 1, |a| Some((n - a[0]) % n));
        s.set_constant("0", 0);
        s.set_constant("1", 1 % n);
        s
    }

    pub fn add_element(&mut self, label: &str, sort: &str) -> usize {
        self.labels.push(label.to_string());
        self.sort_of.push(sort.to_string());
        self.labels.len() - 1
    }

    pub fn size(&self) -> usize {
        self.labels.len()
    }

    pub fn label(&self, id: usize) -> &str {
        &self.labels[id]
    }

    pub fn carrier(&self, sort: &str) -> Vec<usize> {
        (0..self.size()).filter(|&i| self.sort_of[i] == sort).collect()
    }

    pub fn sorts(&self) -> BTreeSet<String> {
        self.sort_of.iter().cloned().collect()
    }

    pub fn set_op(&mut self, name: &str, table: OpTable) {
        self.ops.insert((name.to_string(), table.arity), table);
    }

    /// Fill a table from a function of the argument ids.
    pub fn set_op_fn(&mut self, name: &str, arity: usize, f: impl Fn(&[usize]) -> Option<usize>) {
        let n = self.size();
        let total = n.pow(arity as u32);
        let mut cells = Vec::with_capacity(total);
        let mut args = vec![0; arity];
        for code in 0..total {
            let mut c = code;
            for a in args.iter_mut() {
                *a = c % n;
                c /= n;
            }
            cells.push(f(&args));
        }
        self.set_op(name, OpTable { arity, cells });
    }

    pub fn set_relation(&mut self, name: &str, arity: usize, tuples: BTreeSet<Vec<usize>>) {
        self.relations.insert((name.to_string(), arity), tuples);
    }

    pub fn set_constant(&mut self, name: &str, id: usize) {
        self.constants.insert(name.to_string(), id);
    }

    pub fn ops(&self) -> impl Iterator<Item = (&str, &OpTable)> {
        self.ops.iter().map(|((n, _), t)| (n.as_str(), t))
    }

    pub fn relations(&self) -> impl Iterator<Item = (&str, usize, &BTreeSet<Vec<usize>>)> {
        self.relations.iter().map(|((n, a), t)| (n.as_str(), *a, t))
    }

    pub fn constants(&self) -> impl Iterator<Item = (&str, usize)> {
        self.constants.iter().map(|(n, &i)| (n.as_str(), i))
    }

    pub fn op(&self, name: &str, args: &[usize]) -> Option<Option<usize>> {
        let t = self.ops.get(&(name.to_string(), args.len()))?;
        Some(t.cells[cell_index(args, self.size())])
    }

    /// Every operation is defined on every argument tuple.
    pub fn is_total(&self) -> bool {
        self.ops.values().all(|t| t.cells.iter().all(Option::is_some))
    }

    /// Search for an isomorphism preserving every operation, relation and
    /// constant, trying bijections that respect sorts.
    pub fn isomorphism(&self, other: &FinStructure) -> Option<Vec<usize>> {
        if self.size() != other.size()
            || self.ops.keys().ne(other.ops.keys())
            || self.relations.keys().ne(other.relations.keys())
            || self.constants.keys().ne(other.constants.keys())
        {
            return None;
        }
        let mut map = vec![usize::MAX; self.size()];
        let mut used = vec![false; other.size()];
        self.extend_iso(other, 0, &mut map, &mut used).then_some(map)
    }

    fn extend_iso(&self, other: &FinStructure, i: usize, map: &mut [usize], used: &mut [bool]) -> bool {
        if i == self.size() {
            return self.preserves(other, map);
        }
        for j in 0..other.size() {
            if used[j] || self.sort_of[i] != other.sort_of[j] {
                continue;
            }
            map[i] = j;
            used[j] = true;
            if self.extend_iso(other, i + 1, map, used) {
                return true;
            }
            used[j] = false;
        }
        map[i] = usize::MAX;
        false
    }

    fn preserves(&self, other: &FinStructure, map: &[usize]) -> bool {
        let n = self.size();
        for ((name, arity), t) in &self.ops {
            let ot = &other.ops[&(name.clone(), *arity)];
            for (code, cell) in t.cells.iter().enumerate() {
                let mut c = code;
                let args: Vec<usize> = (0..*arity)
                    .map(|_| {
                        let a = c % n;
                        c /= n;
                        map[a]
                    })
                    .collect();
                if ot.cells[cell_index(&args, n)] != cell.map(|v| map[v]) {
                    return false;
                }
            }
        }
        for (key, tuples) in &self.relations {
            let image: BTreeSet<Vec<usize>> = tuples.iter().map(|t| t.iter().map(|&a| map[a]).collect()).collect();
            if &image != other.relations.get(key).expect("same keys") {
                return false;
            }
        }
        self.constants.iter().all(|(k, &v)| other.constants[k] == map[v])
    }

    fn divides(&self, u: usize, v: usize) -> Result<bool> {
        let ids = self.carrier(&self.default_sort);
        for w in ids {
            match self.op("*", &[u, w]) {
                None => return Err(FologError::UnknownSymbol("* (needed for divides)".into())),
                Some(Some(x)) if x == v => return Ok(true),
                _ => {}
            }
        }
        Ok(false)
    }
}

impl Structure for FinStructure {
    type Val = usize;

    fn default_sort(&self) -> &str {
        &self.default_sort
    }

    fn constant(&self, name: &str) -> Result<usize> {
        if let Some(&c) = self.constants.get(name) {
            return Ok(c);
        }
        // numerals as sums of 1
        if let (Ok(k), Some(&one), Some(&zero)) = (name.parse::<u64>(), self.constants.get("1"), self.constants.get("0")) {
            let mut acc = zero;
            for _ in 0..k {
                acc = self
                    .op("+", &[acc, one])
                    .flatten()
                    .ok_or_else(|| FologError::UnknownSymbol(name.to_string()))?;
            }
            return Ok(acc);
        }
        Err(FologError::UnknownSymbol(name.to_string()))
    }

    fn literal(&self, text: &str) -> Result<usize> {
        self.labels.iter().position(|l| l == text).ok_or_else(|| FologError::UnknownSymbol(format!("\"{text}\"")))
    }

    fn apply(&self, op: &str, args: &[usize]) -> Result<Option<usize>> {
        if let Some(v) = self.op(op, args) {
            return Ok(v);
        }
        // n-ary sums and products fold the binary table
        if args.len() > 2 && self.ops.contains_key(&(op.to_string(), 2)) {
            let mut acc = args[0];
            for &a in &args[1..] {
                match self.op(op, &[acc, a]).flatten() {
                    Some(v) => acc = v,
                    None => return Ok(None),
                }
            }
            return Ok(Some(acc));
        }
        Err(FologError::UnknownSymbol(format!("{op}/{}", args.len())))
    }

    fn relation(&self, name: &str, args: &[usize]) -> Result<TriBool> {
        if let Some(t) = self.relations.get(&(name.to_string(), args.len())) {
            return Ok(TriBool::from(t.contains(args)));
        }
        if name == "divides" && args.len() == 2 {
            return Ok(TriBool::from(self.divides(args[0], args[1])?));
        }
        Err(FologError::UnknownSymbol(format!("{name}/{}", args.len())))
    }

    fn domain(&self, sort: &str, range: &RangeVal<usize>) -> Result<Domain<usize>> {
        let carrier = self.carrier(sort);
        if carrier.is_empty() && !self.sorts().contains(sort) {
            return Err(FologError::SortError(format!("no sort {sort}")));
        }
        match range {
            RangeVal::All => Ok(Domain::complete(carrier)),
            RangeVal::Divides(v) | RangeVal::DivisorClass(v) => {
                let mut out = Vec::new();
                for u in carrier {
                    if self.divides(u, *v)? {
                        out.push(u);
                    }
                }
                Ok(Domain::complete(out))
            }
            RangeVal::Field | RangeVal::DegreeAtMost(_) => {
                Err(FologError::UnsupportedDomain("finite structures have no field or degree ranges".into()))
            }
        }
    }
}
