pub mod constants;
pub mod field;
pub mod laurent;
pub mod linalg;
pub mod parse;
pub mod poly;
pub mod rational;
pub mod smith;

pub use constants::ConstantField;
pub use field::{Elem, FiniteField};
pub use laurent::{laurent_expand, LaurentSlice, Trunc};
pub use poly::{Poly, PolyRing};
pub use rational::RationalFunction;
pub use smith::{smith_normal_form, SmithForm};
