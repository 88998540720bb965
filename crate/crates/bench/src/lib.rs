//! Inputs shared by the benchmarks.

use freealg::ncpoly::parse;
use freealg::{FieldSpec, NcPoly};

/// `(x1 + x2 + 1)^k` over `spec`, rank 2.
pub fn dense(spec: FieldSpec, k: usize) -> NcPoly {
    parse("x1 + x2 + 1", spec, 2).expect("fixed input").pow(k)
}

pub fn poly(text: &str, spec: FieldSpec) -> NcPoly {
    parse(text, spec, 2).expect("fixed input")
}
