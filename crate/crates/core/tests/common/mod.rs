//! Random generators shared by the integration tests.
#![allow(dead_code)]

use std::sync::Arc;

use contingency::linalg::QMatrix;
use contingency::sheaf::PosetRepresentation;
use contingency::strata::{Point, PointConfiguration};
use contingency::CmPoset;
use num_bigint::BigInt;
use num_rational::BigRational;
use rand::Rng;

pub fn q(x: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(x))
}

/// Random square matrix with small integer entries; invertible when `invertible`.
pub fn random_matrix(rng: &mut impl Rng, d: usize, invertible: bool) -> QMatrix {
    loop {
        let m = QMatrix::from_fn(d, d, |_, _| q(rng.gen_range(-2..=2)));
        if !invertible || m.is_invertible() {
            return m;
        }
    }
}

/// A functor on `CM_n` with `F_M = V_M / U_M` for coordinate subspaces
/// `U_M ⊆ V_M ⊆ ℚ^D` that grow with `M`: coordinate `t` appears at and above a
/// random element `h_t` and dies at and above a random `g_t ≥ h_t` (either may
/// be absent). Maps are induced by the identity of `ℚ^D` and then conjugated
/// by a random change of basis at every element, so the result commutes by
/// construction while square cover maps can be singular or invertible.
pub fn quotient_representation(rng: &mut impl Rng, poset: Arc<CmPoset>, max_dim: usize) -> PosetRepresentation {
    let len = poset.len();
    let total = rng.gen_range(0..=max_dim);
    let mut born = Vec::new();
    let mut dies = Vec::new();
    for _ in 0..total {
        let h = rng.gen_bool(0.6).then(|| rng.gen_range(0..len));
        let above: Vec<usize> = (0..len).filter(|&m| h.is_none_or(|h| poset.cm_leq(h, m))).collect();
        let g = rng.gen_bool(0.6).then(|| above[rng.gen_range(0..above.len())]);
        born.push(h);
        dies.push(g);
    }
    let alive = |t: usize, m: usize| {
        born[t].is_none_or(|h| poset.cm_leq(h, m)) && dies[t].is_none_or(|g| !poset.cm_leq(g, m))
    };
    let kept: Vec<Vec<usize>> = (0..len).map(|m| (0..total).filter(|&t| alive(t, m)).collect()).collect();
    let basis: Vec<QMatrix> = kept.iter().map(|k| random_matrix(rng, k.len(), true)).collect();
    let inverse: Vec<QMatrix> = basis.iter().map(|b| b.inverse().expect("invertible")).collect();
    let maps = poset
        .covers()
        .iter()
        .map(|c| {
            let proj = QMatrix::from_fn(kept[c.parent].len(), kept[c.child].len(), |i, j| {
                q(i64::from(kept[c.parent][i] == kept[c.child][j]))
            });
            &(&basis[c.parent] * &proj) * &inverse[c.child]
        })
        .collect();
    let dims = kept.iter().map(Vec::len).collect();
    PosetRepresentation::from_parts(poset, dims, maps).expect("shapes match")
}

/// `n` points with coordinates from a small grid, so that collisions are common.
pub fn random_configuration(rng: &mut impl Rng, n: usize) -> PointConfiguration {
    let grid = [(-1, 1), (-1, 2), (0, 1), (1, 3), (1, 2), (1, 1)];
    let pick = |rng: &mut dyn rand::RngCore| {
        let (a, b) = grid[rng.gen_range(0..grid.len())];
        BigRational::new(a.into(), b.into())
    };
    PointConfiguration::new((0..n).map(|_| Point::new(pick(rng), pick(rng))).collect())
}
