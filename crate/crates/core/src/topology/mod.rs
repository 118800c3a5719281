//! Order complexes of intervals in `CM_n` and their reduced integral homology.

mod complex;
mod homology;
mod snf;
mod sphere;

pub use complex::{lower_interval, order_complex, FinitePoset, SimplicialComplex};
pub use homology::{homology, DegreeHomology, HomologyProfile};
pub use snf::{smith_dense, smith_sparse, SmithSummary};
pub use sphere::{alternating_sum, cell_dimension, check_element, f_vector, verify_sphericity, SphereCheck, SphericityReport};
