//! Size guards for the computations whose cost grows super-exponentially in `n`.
//!
//! Each guard has a default ceiling. Setting `CONTINGENCY_MAX_N` in the
//! environment raises every ceiling to at least that value; it never lowers one.

use std::sync::OnceLock;

use crate::error::{Error, Result};

pub const MAX_N_ENV: &str = "CONTINGENCY_MAX_N";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Guard {
    /// Materialising every contingency matrix of weight `n`.
    Enumeration,
    /// Building the cover relation of `CM_n`.
    Poset,
    /// Order complexes and integral homology of intervals.
    Homology,
    /// Orbit enumeration over the symmetric group.
    DoubleCoset,
    /// Union-find over anodyne contractions.
    Anodyne,
    /// Grouping by pairs of FNF labels.
    Meet,
    /// Poset representations.
    Sheaf,
    /// Exhaustive minor scans.
    TotalPositivity,
    /// Direct exact determinant of the metamatrix.
    DirectDeterminant,
    /// Exact rational factorization checks and closed forms.
    Rational,
}

impl Guard {
    pub fn default_max(self) -> usize {
        match self {
            Guard::Enumeration => 7,
            Guard::Poset => 7,
            Guard::Homology => 4,
            Guard::DoubleCoset => 6,
            Guard::Anodyne => 5,
            Guard::Meet => 6,
            Guard::Sheaf => 5,
            Guard::TotalPositivity => 7,
            Guard::DirectDeterminant => 12,
            Guard::Rational => 20,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Guard::Enumeration => "enumeration",
            Guard::Poset => "poset construction",
            Guard::Homology => "homology",
            Guard::DoubleCoset => "double coset oracle",
            Guard::Anodyne => "anodyne classes",
            Guard::Meet => "meet check",
            Guard::Sheaf => "poset representations",
            Guard::TotalPositivity => "total positivity scan",
            Guard::DirectDeterminant => "direct determinant",
            Guard::Rational => "exact rational identities",
        }
    }

    pub fn max(self) -> usize {
        self.default_max().max(env_override().unwrap_or(0))
    }

    pub fn check(self, n: usize) -> Result<()> {
        let max = self.max();
        if n > max {
            Err(Error::Capacity {
                what: self.name(),
                n,
                max,
            })
        } else {
            Ok(())
        }
    }
}

fn env_override() -> Option<usize> {
    static CELL: OnceLock<Option<usize>> = OnceLock::new();
    *CELL.get_or_init(|| std::env::var(MAX_N_ENV).ok()?.trim().parse().ok())
}
