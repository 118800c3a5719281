//! Contingency matrices, their contractions, enumeration, and the poset `CM_n`.

mod cosets;
mod enumerate;
mod matrix;
mod poset;

pub use cosets::double_coset_count;
pub use enumerate::{count_cm, enumerate_cm, CmFilter};
pub use matrix::{ContingencyMatrix, Kind, Margins};
pub use poset::{CmPoset, Cover};
