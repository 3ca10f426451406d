//! Exact-arithmetic symbolic expression kernel: construction, canonical
//! simplification, differentiation, substitution, numeric evaluation and
//! randomized zero-testing.

mod build;
mod calculus;
pub mod eval;
mod node;
pub mod zero;

pub use build::{add, fun, mul, pow, pow_i};
pub use node::{Expr, FunKind, Node, Symbol};
