//! Ordered partitions (compositions) of a positive integer.
//!
//! An ordered partition of `n` is a sequence of positive parts summing to `n`.
//! They label margins of contingency matrices and the imaginary/real
//! coincidence patterns of Fox–Neuwirth–Fuchs cells.

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "Vec<u32>", into = "Vec<u32>")]
pub struct OrderedPartition {
    parts: Vec<u32>,
}

impl OrderedPartition {
    pub fn new(parts: Vec<u32>) -> Result<Self> {
        if parts.is_empty() {
            return domain("an ordered partition needs at least one part");
        }
        if parts.contains(&0) {
            return domain(format!("ordered partition {parts:?} has a zero part"));
        }
        Ok(OrderedPartition { parts })
    }

    /// The one-part partition `(n)`.
    pub fn whole(n: u32) -> Result<Self> {
        Self::new(vec![n])
    }

    pub fn parts(&self) -> &[u32] {
        &self.parts
    }

    pub fn weight(&self) -> usize {
        self.parts.iter().map(|&p| p as usize).sum()
    }

    /// Number of parts.
    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Merges parts `i` and `i + 1` (0-based).
    pub fn contract(&self, i: usize) -> Result<Self> {
        if i + 1 >= self.parts.len() {
            return domain(format!(
                "contraction index {i} out of range for a partition with {} parts",
                self.parts.len()
            ));
        }
        let mut parts = Vec::with_capacity(self.parts.len() - 1);
        parts.extend_from_slice(&self.parts[..i]);
        parts.push(self.parts[i] + self.parts[i + 1]);
        parts.extend_from_slice(&self.parts[i + 2..]);
        Ok(OrderedPartition { parts })
    }

    /// Cut points `α_1, α_1 + α_2, …` strictly below the weight.
    pub fn to_subset(&self) -> BTreeSet<u32> {
        let mut acc = 0;
        let mut cuts = BTreeSet::new();
        for &p in &self.parts[..self.parts.len() - 1] {
            acc += p;
            cuts.insert(acc);
        }
        cuts
    }

    /// Inverse of [`OrderedPartition::to_subset`].
    pub fn from_subset(n: u32, cuts: &BTreeSet<u32>) -> Result<Self> {
        if n == 0 {
            return domain("weight must be positive");
        }
        if let Some(&bad) = cuts.iter().find(|&&c| c == 0 || c >= n) {
            return domain(format!("cut point {bad} outside [1, {}]", n - 1));
        }
        let mut parts = Vec::with_capacity(cuts.len() + 1);
        let mut prev = 0;
        for &c in cuts.iter().chain(std::iter::once(&n)) {
            parts.push(c - prev);
            prev = c;
        }
        Ok(OrderedPartition { parts })
    }
}

impl TryFrom<Vec<u32>> for OrderedPartition {
    type Error = Error;

    fn try_from(parts: Vec<u32>) -> Result<Self> {
        OrderedPartition::new(parts)
    }
}

impl From<OrderedPartition> for Vec<u32> {
    fn from(p: OrderedPartition) -> Self {
        p.parts
    }
}

impl fmt::Display for OrderedPartition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (k, p) in self.parts.iter().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            write!(f, "{p}")?;
        }
        write!(f, ")")
    }
}

/// All ordered partitions of `n`, optionally restricted to `parts` parts,
/// in lexicographic order of the part sequences.
pub fn enumerate_ordered_partitions(n: usize, parts: Option<usize>) -> Result<Vec<OrderedPartition>> {
    if n == 0 {
        return domain("n must be positive");
    }
    if let Some(p) = parts {
        if p == 0 || p > n {
            return domain(format!("number of parts {p} must lie in [1, {n}]"));
        }
    }
    let mut out = Vec::new();
    let mut current = Vec::new();
    compositions(n as u32, parts, &mut current, &mut out);
    Ok(out)
}

fn compositions(
    remaining: u32,
    parts: Option<usize>,
    current: &mut Vec<u32>,
    out: &mut Vec<OrderedPartition>,
) {
    if remaining == 0 {
        if parts.is_none_or(|p| p == current.len()) {
            out.push(OrderedPartition {
                parts: current.clone(),
            });
        }
        return;
    }
    if let Some(p) = parts {
        let left = p.saturating_sub(current.len());
        if left == 0 || (remaining as usize) < left {
            return;
        }
    }
    for first in 1..=remaining {
        current.push(first);
        compositions(remaining - first, parts, current, out);
        current.pop();
    }
}

/// Whether `fine` splits every part of `coarse` into consecutive blocks.
pub fn refines(coarse: &OrderedPartition, fine: &OrderedPartition) -> Result<bool> {
    if coarse.weight() != fine.weight() {
        return domain(format!(
            "cannot compare {coarse} and {fine}: weights {} and {} differ",
            coarse.weight(),
            fine.weight()
        ));
    }
    Ok(coarse.to_subset().is_subset(&fine.to_subset()))
}
