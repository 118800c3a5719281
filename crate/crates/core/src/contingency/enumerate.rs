//! Enumeration of contingency matrices with optional size and margin constraints.
//!
//! Matrices are produced shape by shape, `(p, q)` ascending, and within a shape
//! in decreasing lexicographic order of the row-major entries. The fill is a
//! cell-by-cell recursion that prunes as soon as the remaining weight cannot
//! cover the rows and columns that are still empty.

use crate::capacity::Guard;
use crate::error::{domain, Result};
use crate::partitions::OrderedPartition;

use super::matrix::ContingencyMatrix;

/// Constraints for [`enumerate_cm`]. `n` may be omitted when a margin is given.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct CmFilter {
    pub n: Option<usize>,
    pub p: Option<usize>,
    pub q: Option<usize>,
    pub alpha: Option<OrderedPartition>,
    pub beta: Option<OrderedPartition>,
}

impl CmFilter {
    pub fn weight(n: usize) -> Self {
        CmFilter {
            n: Some(n),
            ..Default::default()
        }
    }

    pub fn shape(n: usize, p: usize, q: usize) -> Self {
        CmFilter {
            n: Some(n),
            p: Some(p),
            q: Some(q),
            ..Default::default()
        }
    }

    pub fn margins(alpha: OrderedPartition, beta: OrderedPartition) -> Self {
        CmFilter {
            alpha: Some(alpha),
            beta: Some(beta),
            ..Default::default()
        }
    }

    fn resolve(&self) -> Result<Plan> {
        let mut n = self.n;
        for m in [&self.alpha, &self.beta].into_iter().flatten() {
            match n {
                Some(w) if w != m.weight() => {
                    return domain(format!("margin {m} does not have weight {w}"));
                }
                _ => n = Some(m.weight()),
            }
        }
        let n = match n {
            Some(0) => return domain("weight must be positive"),
            Some(n) => n,
            None => return domain("either a weight or a margin is required"),
        };
        let ps = axis_range(n, self.p, self.alpha.as_ref(), "p")?;
        let qs = axis_range(n, self.q, self.beta.as_ref(), "q")?;
        Ok(Plan {
            n,
            ps,
            qs,
            rows: self.alpha.as_ref().map(|a| a.parts().to_vec()),
            cols: self.beta.as_ref().map(|b| b.parts().to_vec()),
        })
    }
}

fn axis_range(
    n: usize,
    size: Option<usize>,
    margin: Option<&OrderedPartition>,
    name: &str,
) -> Result<Vec<usize>> {
    match (size, margin) {
        (Some(0), _) => domain(format!("{name} must be positive")),
        (Some(s), Some(m)) if s != m.len() => {
            domain(format!("{name} = {s} conflicts with margin {m} of length {}", m.len()))
        }
        (_, Some(m)) => Ok(vec![m.len()]),
        (Some(s), None) => Ok(if s <= n { vec![s] } else { vec![] }),
        (None, None) => Ok((1..=n).collect()),
    }
}

struct Plan {
    n: usize,
    ps: Vec<usize>,
    qs: Vec<usize>,
    rows: Option<Vec<u32>>,
    cols: Option<Vec<u32>>,
}

/// All contingency matrices satisfying `filter`, in canonical order.
pub fn enumerate_cm(filter: &CmFilter) -> Result<Vec<ContingencyMatrix>> {
    let plan = filter.resolve()?;
    if filter.alpha.is_none() || filter.beta.is_none() {
        Guard::Enumeration.check(plan.n)?;
    }
    let mut out = Vec::new();
    for &p in &plan.ps {
        for &q in &plan.qs {
            fill(plan.n, p, q, plan.rows.as_deref(), plan.cols.as_deref(), &mut |e| {
                out.push(ContingencyMatrix::from_flat_unchecked(p, q, e.to_vec()));
            });
        }
    }
    Ok(out)
}

/// Number of contingency matrices of weight `n` and size `p × q`, by enumeration.
pub fn count_cm(n: usize, p: usize, q: usize) -> Result<u64> {
    if n == 0 || p == 0 || q == 0 {
        return domain("weight and sizes must be positive");
    }
    Guard::Enumeration.check(n)?;
    let mut count = 0u64;
    if p <= n && q <= n {
        fill(n, p, q, None, None, &mut |_| count += 1);
    }
    Ok(count)
}

/// Visits every `p × q` contingency matrix of weight `n`, with optional exact
/// row and column sums.
pub(crate) fn fill(
    n: usize,
    p: usize,
    q: usize,
    rows: Option<&[u32]>,
    cols: Option<&[u32]>,
    emit: &mut dyn FnMut(&[u32]),
) {
    if n < p.max(q) {
        return;
    }
    let mut st = Fill {
        p,
        q,
        entries: vec![0; p * q],
        row_rem: rows.map(<[u32]>::to_vec),
        col_rem: cols.map(<[u32]>::to_vec),
        col_nonzero: vec![false; q],
        zero_cols: q,
        emit,
    };
    st.cell(0, n as u32, false);
}

struct Fill<'a> {
    p: usize,
    q: usize,
    entries: Vec<u32>,
    row_rem: Option<Vec<u32>>,
    col_rem: Option<Vec<u32>>,
    col_nonzero: Vec<bool>,
    zero_cols: usize,
    emit: &'a mut dyn FnMut(&[u32]),
}

impl Fill<'_> {
    fn cell(&mut self, k: usize, w: u32, row_nonzero: bool) {
        if k == self.p * self.q {
            if w == 0 && self.zero_cols == 0 {
                (self.emit)(&self.entries);
            }
            return;
        }
        let (i, j) = (k / self.q, k % self.q);
        let last_in_row = j + 1 == self.q;
        let last_row = i + 1 == self.p;

        let mut hi = w;
        let mut lo = 0;
        if let Some(r) = &self.row_rem {
            hi = hi.min(r[i]);
            if last_in_row {
                lo = r[i];
            }
        } else if last_in_row && !row_nonzero {
            lo = 1;
        }
        if let Some(c) = &self.col_rem {
            hi = hi.min(c[j]);
            if last_row {
                lo = lo.max(c[j]);
            }
        } else if last_row && !self.col_nonzero[j] {
            lo = lo.max(1);
        }
        if k + 1 == self.p * self.q {
            lo = lo.max(w);
        }
        if lo > hi {
            return;
        }

        for v in (lo..=hi).rev() {
            let w2 = w - v;
            let row_nz = row_nonzero || v > 0;
            let newly_nonzero_col = v > 0 && !self.col_nonzero[j];
            let zero_cols = self.zero_cols - usize::from(newly_nonzero_col);
            // every later row and every still-empty column needs at least one unit
            let rows_needing = (self.p - 1 - i) + usize::from(!row_nz && !last_in_row);
            if (w2 as usize) < rows_needing.max(zero_cols) {
                continue;
            }
            self.entries[k] = v;
            if newly_nonzero_col {
                self.col_nonzero[j] = true;
                self.zero_cols -= 1;
            }
            if let Some(r) = &mut self.row_rem {
                r[i] -= v;
            }
            if let Some(c) = &mut self.col_rem {
                c[j] -= v;
            }
            self.cell(k + 1, w2, row_nz && !last_in_row);
            if let Some(r) = &mut self.row_rem {
                r[i] += v;
            }
            if let Some(c) = &mut self.col_rem {
                c[j] += v;
            }
            if newly_nonzero_col {
                self.col_nonzero[j] = false;
                self.zero_cols += 1;
            }
        }
        self.entries[k] = 0;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cm(rows: &[&[u32]]) -> ContingencyMatrix {
        ContingencyMatrix::from_rows(rows.iter().map(|r| r.to_vec()).collect()).unwrap()
    }

    fn op(parts: &[u32]) -> OrderedPartition {
        OrderedPartition::new(parts.to_vec()).unwrap()
    }

    // Oracle: every p×q grid with entries in 0..=n, filtered by the invariants.
    fn brute(n: usize, p: usize, q: usize) -> Vec<Vec<u32>> {
        let cells = p * q;
        let mut out = Vec::new();
        let mut grid = vec![0u32; cells];
        loop {
            if grid.iter().map(|&v| v as usize).sum::<usize>() == n
                && ContingencyMatrix::from_flat(p, q, grid.clone()).is_ok()
            {
                out.push(grid.clone());
            }
            let mut k = 0;
            loop {
                if k == cells {
                    return out;
                }
                grid[k] += 1;
                if grid[k] as usize <= n {
                    break;
                }
                grid[k] = 0;
                k += 1;
            }
        }
    }

    #[test]
    fn weight_two() {
        let all = enumerate_cm(&CmFilter::weight(2)).unwrap();
        assert_eq!(
            all,
            vec![
                cm(&[&[2]]),
                cm(&[&[1, 1]]),
                cm(&[&[1], &[1]]),
                cm(&[&[1, 0], &[0, 1]]),
                cm(&[&[0, 1], &[1, 0]]),
            ]
        );
    }

    #[test]
    fn shape_counts() {
        assert_eq!(enumerate_cm(&CmFilter::shape(3, 2, 2)).unwrap().len(), 8);
        let perms = enumerate_cm(&CmFilter::shape(3, 3, 3)).unwrap();
        assert_eq!(perms.len(), 6);
        assert!(perms.iter().all(ContingencyMatrix::is_permutation_matrix));
        assert!(enumerate_cm(&CmFilter::shape(3, 4, 1)).unwrap().is_empty());
    }

    #[test]
    fn matches_brute_force() {
        for n in 1..=4 {
            for p in 1..=n {
                for q in 1..=n {
                    if p * q > 9 {
                        continue;
                    }
                    let mut b = brute(n, p, q);
                    b.sort();
                    b.reverse();
                    let e: Vec<_> = enumerate_cm(&CmFilter::shape(n, p, q))
                        .unwrap()
                        .into_iter()
                        .map(|m| m.entries().to_vec())
                        .collect();
                    assert_eq!(e, b, "n={n} p={p} q={q}");
                    assert_eq!(count_cm(n, p, q).unwrap() as usize, e.len());
                }
            }
        }
    }

    #[test]
    fn margin_constrained() {
        let got = enumerate_cm(&CmFilter::margins(op(&[2, 1]), op(&[2, 1]))).unwrap();
        assert_eq!(got, vec![cm(&[&[2, 0], &[0, 1]]), cm(&[&[1, 1], &[1, 0]])]);
        // a single margin agrees with filtering the full enumeration
        for n in 1..=5 {
            let all = enumerate_cm(&CmFilter::weight(n)).unwrap();
            for a in crate::partitions::enumerate_ordered_partitions(n, None).unwrap() {
                let by_rows = enumerate_cm(&CmFilter {
                    alpha: Some(a.clone()),
                    ..Default::default()
                })
                .unwrap();
                let expect: Vec<_> = all.iter().filter(|m| m.margins().horizontal == a).cloned().collect();
                assert_eq!(by_rows, expect);
                let by_cols = enumerate_cm(&CmFilter {
                    beta: Some(a.clone()),
                    ..Default::default()
                })
                .unwrap();
                let expect: Vec<_> = all.iter().filter(|m| m.margins().vertical == a).cloned().collect();
                assert_eq!(by_cols, expect);
            }
        }
    }

    #[test]
    fn inconsistent_filters() {
        let bad = CmFilter {
            n: Some(4),
            alpha: Some(op(&[2, 1])),
            ..Default::default()
        };
        assert!(enumerate_cm(&bad).is_err());
        let bad = CmFilter {
            p: Some(3),
            alpha: Some(op(&[2, 1])),
            ..Default::default()
        };
        assert!(enumerate_cm(&bad).is_err());
        assert!(enumerate_cm(&CmFilter::default()).is_err());
        assert!(enumerate_cm(&CmFilter::weight(0)).is_err());
    }

    #[test]
    fn totals() {
        let totals: Vec<usize> = (1..=5).map(|n| enumerate_cm(&CmFilter::weight(n)).unwrap().len()).collect();
        assert_eq!(totals, vec![1, 5, 33, 281, 2961]);
    }
}
