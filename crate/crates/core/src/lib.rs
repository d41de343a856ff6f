//! Exact tree groups, free (quasi-)Lie algebras and Milnor invariants.
//!
//! The crate computes the algebraic side of Whitney tower obstruction
//! theory: graded groups of labeled unitrivalent trees modulo AS, IHX,
//! framing and twisting relations, the free Lie and quasi-Lie algebras with
//! their bracket kernels, the maps between them, and Milnor invariants of
//! pure braids and string links via the Magnus expansion.

pub mod braids;
pub mod error;
pub mod exactalg;
pub mod homs;
pub mod liealg;
pub mod milnor;
pub mod towergroups;
pub mod trees;

pub use error::{Error, Limits, Result};
