//! Symbolic jet calculus on the real plane: prolongation of vector fields,
//! differential invariants, operators of invariant differentiation, Lie
//! determinants, and an embedded catalog of planar Lie algebra realizations
//! verified end to end.

pub mod catalog;
pub mod error;
pub mod expr;
pub mod invariants;
pub mod jet;
pub mod lie;
pub mod linalg;
pub mod parse;
pub mod report;
pub mod runner;
pub mod scalar;
pub mod transform;

pub use error::{Error, Result, SourceSpan};
pub use expr::zero::{equal_up_to_constant, is_zero, Constraint, ZeroPolicy};
pub use expr::{Expr, FunKind, Symbol};
pub use jet::{apply, prolong, total_derivative, ProlongedField, VectorField};
pub use lie::{closure_check, invariant_count, lie_bracket, nu, rank_sequence, Realization, StructureConstants};
