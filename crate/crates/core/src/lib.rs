//! Exact computation of Fleck quotients `F_p(n,r)` and their prime-power
//! generalization, closed-form evaluators for their residues, and a harness
//! that checks the known congruences against brute-force big-integer sums.

pub mod arith;
pub mod class_field;
pub mod closed_forms;
pub mod error;
pub mod harness;
pub mod scan;
pub mod sequences;
pub mod sums;

pub use error::{FleckError, Result};
