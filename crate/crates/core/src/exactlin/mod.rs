//! Exact scalar fields and the dense linear algebra built on them.

pub mod enumerate;
pub mod field;
pub mod matrix;
pub mod subspace;

pub use field::{Field, FieldCtx, PrimeField, Rationals};
pub use matrix::{Matrix, Rref};
pub use subspace::{span_intersect_and_sum, Subspace};
