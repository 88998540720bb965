//! Exact computations in free associative algebras and the model-theoretic
//! constructions built on them.

pub mod arithmetization;
pub mod basis;
pub mod bigpowers;
pub mod centralizers;
pub mod folog;
pub mod interp;
mod linalg;
pub mod ncpoly;
pub mod scalars;
pub mod superstructure;
pub mod words;

pub use ncpoly::{NcPoly, PolyError};
pub use scalars::{FieldElem, FieldSpec};
pub use words::Word;
