//! Cell structure of the stochastihedron: every closed interval below `M` in
//! `CM_n` should be a ball whose boundary (the strict interval) is a sphere of
//! dimension `2n - (p + q) - 1`.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::Serialize;

use crate::capacity::Guard;
use crate::contingency::{count_cm, CmPoset, ContingencyMatrix};
use crate::error::Result;

use super::complex::{lower_interval, order_complex};
use super::homology::{homology, HomologyProfile};

#[derive(Clone, Debug, Serialize)]
pub struct SphereCheck {
    pub element: ContingencyMatrix,
    pub expected_sphere_dim: i64,
    pub homology: HomologyProfile,
    /// Reduced homology of the non-strict interval vanishes.
    pub closed_acyclic: bool,
    /// Component count of the boundary complex, recorded when its dimension is at most 2.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub components: Option<usize>,
    pub pass: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct SphericityReport {
    pub n: usize,
    pub checked: usize,
    pub violations: Vec<SphereCheck>,
    pub results: Vec<SphereCheck>,
    pub pass: bool,
}

/// Dimension of the cell of `M` in the stochastihedron, `2n - (p + q)`.
pub fn cell_dimension(m: &ContingencyMatrix) -> i64 {
    2 * m.weight() as i64 - (m.rows() + m.cols()) as i64
}

/// Checks the boundary of the cell of element `k`.
pub fn check_element(poset: &CmPoset, k: usize) -> Result<SphereCheck> {
    let m = poset.element(k).clone();
    let d = cell_dimension(&m) - 1;
    let boundary = order_complex(&lower_interval(poset, k, true)?);
    let h = homology(&boundary);
    let closed = homology(&order_complex(&lower_interval(poset, k, false)?));
    let components = (boundary.dimension() <= 2).then(|| boundary.components());
    let expected_components = match d {
        -1 => 0,
        0 => 2,
        _ => 1,
    };
    let pass = h.is_sphere(d) && closed.is_acyclic() && components.is_none_or(|c| c == expected_components);
    Ok(SphereCheck {
        element: m,
        expected_sphere_dim: d,
        homology: h,
        closed_acyclic: closed.is_acyclic(),
        components,
        pass,
    })
}

/// Runs [`check_element`] on every element of `CM_n`, in parallel on the
/// current rayon pool.
pub fn verify_sphericity(n: usize) -> Result<SphericityReport> {
    Guard::Homology.check(n)?;
    let poset = CmPoset::build(n)?;
    let results = (0..poset.len())
        .into_par_iter()
        .map(|k| check_element(&poset, k))
        .collect::<Result<Vec<_>>>()?;
    let violations: Vec<_> = results.iter().filter(|r| !r.pass).cloned().collect();
    Ok(SphericityReport {
        n,
        checked: results.len(),
        pass: violations.is_empty(),
        violations,
        results,
    })
}

/// Number of cells of each dimension `2n - (p + q)` of the stochastihedron.
pub fn f_vector(n: usize) -> Result<BTreeMap<usize, u64>> {
    let mut f = BTreeMap::new();
    for p in 1..=n {
        for q in 1..=n {
            let c = count_cm(n, p, q)?;
            if c > 0 {
                *f.entry(2 * n - (p + q)).or_insert(0) += c;
            }
        }
    }
    Ok(f)
}

/// `Σ (-1)^dim f_dim`.
pub fn alternating_sum(f: &BTreeMap<usize, u64>) -> i128 {
    f.iter()
        .map(|(&d, &c)| if d % 2 == 0 { c as i128 } else { -(c as i128) })
        .sum()
}
