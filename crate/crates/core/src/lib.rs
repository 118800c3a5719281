//! Exact combinatorics of contingency matrices.
//!
//! The crate covers ordered partitions, contingency matrices and the poset
//! `CM_n` they form under contraction, order complexes and integral homology
//! of its intervals, the metamatrix of counts with its factorizations and
//! total positivity, the four stratifications of `Sym^n(ℂ)` labelled by these
//! matrices, and representations of `CM_n` with their constructibility tests.
//!
//! All arithmetic is exact.

pub mod capacity;
pub mod contingency;
mod error;
mod json;
pub mod linalg;
pub mod metamatrix;
pub mod partitions;
pub mod sheaf;
pub mod strata;
pub mod topology;

pub use contingency::{CmFilter, CmPoset, ContingencyMatrix, Kind};
pub use error::{Error, Result};
pub use partitions::OrderedPartition;
