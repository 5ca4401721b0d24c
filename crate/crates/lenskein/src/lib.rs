//! Polynomial link invariants in lens spaces L(p,q), computed from mixed
//! link diagrams in annular form.

pub mod error;
pub mod laurent;

pub use error::{Error, Result};
pub mod diagram;
