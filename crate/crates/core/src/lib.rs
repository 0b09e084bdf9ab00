//! Counting `P^F`-conjugacy classes in `GL_n(F_q)` and their Lie-algebra analogues.
//!
//! Every headline quantity is computed by two engines: exhaustive enumeration
//! (Burnside sums over explicit matrix sets) and the type-sum formulas built from
//! Green polynomials and Weyl-group data. The crate keeps both engines exact.

pub mod counting;
pub mod error;
pub mod exec;
pub mod field;
pub mod green;
pub mod matrix;
pub mod porc;
pub mod qpoly;
pub mod weyl;

pub use error::{Error, Result};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");
