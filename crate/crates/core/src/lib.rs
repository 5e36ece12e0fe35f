//! MDS generator matrices with prescribed zero patterns over small fields.
//!
//! The pipeline checks the MDS Condition on a zero pattern, shrinks row
//! supports to weight `n - k + 1`, and builds a generalized Reed-Solomon
//! generator matrix over a field of order `q >= n + k - 1`. Alongside it sit
//! a symbolic determinant engine and an exhaustive checker for the
//! unique-multiset property that guarantees the determinant is nonzero.

pub mod cli;
pub mod combin;
pub mod construct;
pub mod gf;
pub mod matrix;
pub mod multiset;
pub mod pattern;
pub mod reductions;
pub mod special_case;
pub mod symdet;
pub mod verify;

pub use construct::{construct_mds, GeneratorMatrix, SearchOptions, Strategy};
pub use gf::{field_new, smallest_field_at_least, FieldElement, FieldSpec};
pub use pattern::{check_mds_condition, reduce_supports, ConditionReport, ZeroPattern};

/// Version tag written as `"schema"` into every emitted JSON document.
pub const SCHEMA_VERSION: u32 = 1;
