use std::collections::HashMap;

use num_bigint::BigInt;
use serde::Serialize;

use super::complex::SimplicialComplex;
use super::snf::{smith_sparse, SmithSummary};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DegreeHomology {
    pub degree: i64,
    pub betti: usize,
    #[serde(serialize_with = "crate::json::bigint_vec")]
    pub torsion: Vec<BigInt>,
}

/// Reduced integral homology in degrees `-1 ..= dim`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(transparent)]
pub struct HomologyProfile {
    pub degrees: Vec<DegreeHomology>,
}

impl HomologyProfile {
    pub fn betti(&self, degree: i64) -> usize {
        self.get(degree).map_or(0, |d| d.betti)
    }

    pub fn torsion(&self, degree: i64) -> &[BigInt] {
        self.get(degree).map_or(&[], |d| d.torsion.as_slice())
    }

    fn get(&self, degree: i64) -> Option<&DegreeHomology> {
        self.degrees.iter().find(|d| d.degree == degree)
    }

    /// Reduced homology of `S^d`: a single `ℤ` in degree `d`, nothing else.
    pub fn is_sphere(&self, d: i64) -> bool {
        self.degrees.iter().all(|h| {
            h.torsion.is_empty() && h.betti == usize::from(h.degree == d)
        }) && self.betti(d) == 1
    }

    pub fn is_acyclic(&self) -> bool {
        self.degrees.iter().all(|h| h.betti == 0 && h.torsion.is_empty())
    }

    /// `Σ (-1)^k rank H̃_k`.
    pub fn euler_characteristic(&self) -> i64 {
        self.degrees
            .iter()
            .map(|h| if h.degree.rem_euclid(2) == 0 { h.betti as i64 } else { -(h.betti as i64) })
            .sum()
    }
}

/// Boundary matrix `∂_k : C_k → C_{k-1}` as sparse columns. `∂_0` is the
/// augmentation onto the single `(-1)`-simplex.
fn boundary(k: &SimplicialComplex, dim: usize) -> (usize, Vec<Vec<(u32, i64)>>) {
    if dim == 0 {
        return (1, k.simplices(0).iter().map(|_| vec![(0, 1)]).collect());
    }
    let faces: HashMap<&[u32], u32> = k
        .simplices(dim - 1)
        .iter()
        .enumerate()
        .map(|(i, s)| (s.as_slice(), i as u32))
        .collect();
    let mut face = Vec::with_capacity(dim);
    let cols = k
        .simplices(dim)
        .iter()
        .map(|s| {
            (0..s.len())
                .map(|i| {
                    face.clear();
                    face.extend(s.iter().enumerate().filter(|&(j, _)| j != i).map(|(_, &v)| v));
                    let row = faces[face.as_slice()];
                    (row, if i % 2 == 0 { 1 } else { -1 })
                })
                .collect()
        })
        .collect();
    (k.simplices(dim - 1).len(), cols)
}

/// Reduced integral homology via Smith normal forms of the boundary maps.
///
/// Panics if the Euler characteristics of chains and homology disagree,
/// which would indicate a broken complex or a bug in the elimination.
pub fn homology(k: &SimplicialComplex) -> HomologyProfile {
    let top = k.dimension();
    // smith[d] describes ∂_d for d = 0 ..= top
    let smith: Vec<SmithSummary> = (0..=top.max(-1))
        .filter(|&d| d >= 0)
        .map(|d| {
            let (rows, cols) = boundary(k, d as usize);
            smith_sparse(rows, &cols)
        })
        .collect();
    let chain_rank = |d: i64| -> usize {
        if d == -1 {
            1
        } else {
            k.simplices(d as usize).len()
        }
    };
    let rank = |d: i64| -> usize {
        if d < 0 || d > top {
            0
        } else {
            smith[d as usize].rank
        }
    };
    let degrees: Vec<DegreeHomology> = (-1..=top.max(-1))
        .map(|d| DegreeHomology {
            degree: d,
            betti: chain_rank(d) - rank(d) - rank(d + 1),
            torsion: if d < top { smith[(d + 1) as usize].torsion.clone() } else { Vec::new() },
        })
        .collect();
    let profile = HomologyProfile { degrees };
    let chain_euler: i64 = (-1..=top.max(-1))
        .map(|d| if d.rem_euclid(2) == 0 { chain_rank(d) as i64 } else { -(chain_rank(d) as i64) })
        .sum();
    assert_eq!(
        chain_euler,
        profile.euler_characteristic(),
        "Euler characteristic mismatch between chains and homology"
    );
    profile
}
