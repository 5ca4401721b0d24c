//! Exact symbolic kernel: integer-coefficient Laurent polynomials in named
//! variables and formal linear combinations over named basis generators.

mod combo;
mod gcd;
mod parse;
mod poly;

pub use combo::Combo;
pub use gcd::{gcd, int_gcd};
pub use parse::parse_poly;
pub(crate) use parse::parse_combo_terms;
pub use poly::{LaurentPoly, Var};
