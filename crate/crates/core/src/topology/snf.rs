//! Smith normal form over ℤ.
//!
//! [`smith_dense`] is the textbook algorithm on arbitrary-precision integers
//! with smallest-entry pivoting. [`smith_sparse`] first eliminates unit pivots
//! on a sparse `i64` matrix, which disposes of almost all of a simplicial
//! boundary matrix, then hands the leftover block to the dense routine.

use std::collections::{HashMap, HashSet};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

/// Rank and nontrivial invariant factors of an integer matrix.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SmithSummary {
    pub rank: usize,
    /// Invariant factors greater than one, in divisibility order.
    pub torsion: Vec<BigInt>,
}

impl SmithSummary {
    fn from_diagonal(diag: Vec<BigInt>) -> Self {
        SmithSummary {
            rank: diag.len(),
            torsion: diag.into_iter().filter(|d| !d.is_one()).collect(),
        }
    }
}

/// Nonzero diagonal of the Smith normal form: positive, each dividing the next.
pub fn smith_dense(mut a: Vec<Vec<BigInt>>) -> Vec<BigInt> {
    let rows = a.len();
    let cols = a.first().map_or(0, Vec::len);
    let mut diag = Vec::new();
    for t in 0..rows.min(cols) {
        let Some((pi, pj)) = min_entry(&a, t..rows, t..cols) else {
            break;
        };
        move_to(&mut a, t, pi, pj);
        loop {
            let mut clean = true;
            for i in t + 1..rows {
                if a[i][t].is_zero() {
                    continue;
                }
                let q = a[i][t].div_floor(&a[t][t]);
                for j in t..cols {
                    let d = &q * &a[t][j];
                    a[i][j] -= d;
                }
                clean &= a[i][t].is_zero();
            }
            for j in t + 1..cols {
                if a[t][j].is_zero() {
                    continue;
                }
                let q = a[t][j].div_floor(&a[t][t]);
                for i in t..rows {
                    let d = &q * &a[i][t];
                    a[i][j] -= d;
                }
                clean &= a[t][j].is_zero();
            }
            if !clean {
                // a remainder smaller than the pivot survived; pivot on it
                let in_col = min_entry(&a, t..rows, t..t + 1);
                let in_row = min_entry(&a, t..t + 1, t..cols);
                let (pi, pj) = match (in_col, in_row) {
                    (Some(c), Some(r)) if a[r.0][r.1].abs() < a[c.0][c.1].abs() => r,
                    (Some(c), _) => c,
                    (None, Some(r)) => r,
                    (None, None) => unreachable!("pivot is nonzero"),
                };
                move_to(&mut a, t, pi, pj);
                continue;
            }
            let bad = (t + 1..rows).find(|&i| (t + 1..cols).any(|j| !a[i][j].is_multiple_of(&a[t][t])));
            match bad {
                Some(i) => {
                    for j in t..cols {
                        let v = a[i][j].clone();
                        a[t][j] += v;
                    }
                }
                None => break,
            }
        }
        diag.push(a[t][t].abs());
    }
    diag
}

fn min_entry(
    a: &[Vec<BigInt>],
    rows: std::ops::Range<usize>,
    cols: std::ops::Range<usize>,
) -> Option<(usize, usize)> {
    let mut best: Option<(usize, usize)> = None;
    for i in rows {
        for j in cols.clone() {
            if a[i][j].is_zero() {
                continue;
            }
            if best.is_none_or(|(bi, bj)| a[i][j].abs() < a[bi][bj].abs()) {
                best = Some((i, j));
            }
        }
    }
    best
}

fn move_to(a: &mut [Vec<BigInt>], t: usize, i: usize, j: usize) {
    a.swap(t, i);
    if j != t {
        for row in a.iter_mut() {
            row.swap(t, j);
        }
    }
}

/// Smith summary of a `nrows × columns.len()` matrix given by sparse columns
/// of `(row, value)` pairs.
pub fn smith_sparse(nrows: usize, columns: &[Vec<(u32, i64)>]) -> SmithSummary {
    match eliminate_units(nrows, columns) {
        Some((units, rest)) => {
            let mut diag = vec![BigInt::one(); units];
            diag.extend(smith_dense(rest));
            diag.sort();
            SmithSummary::from_diagonal(diag)
        }
        None => {
            let mut dense = vec![vec![BigInt::zero(); columns.len()]; nrows];
            for (c, col) in columns.iter().enumerate() {
                for &(r, v) in col {
                    dense[r as usize][c] += v;
                }
            }
            SmithSummary::from_diagonal(smith_dense(dense))
        }
    }
}

/// Repeatedly pivots on `±1` entries. Returns the number of pivots and the
/// remaining nonzero block, or `None` on `i64` overflow.
fn eliminate_units(nrows: usize, columns: &[Vec<(u32, i64)>]) -> Option<(usize, Vec<Vec<BigInt>>)> {
    let ncols = columns.len();
    let mut rows: Vec<HashMap<u32, i64>> = vec![HashMap::new(); nrows];
    let mut cols: Vec<HashSet<u32>> = vec![HashSet::new(); ncols];
    for (c, col) in columns.iter().enumerate() {
        for &(r, v) in col {
            if v != 0 {
                let e = rows[r as usize].entry(c as u32).or_insert(0);
                *e = e.checked_add(v)?;
                cols[c].insert(r);
            }
        }
    }
    let mut alive_col = vec![true; ncols];
    let mut units = 0;
    loop {
        let mut progress = false;
        for c in 0..ncols {
            if !alive_col[c] || cols[c].is_empty() {
                continue;
            }
            let pivot_row = cols[c]
                .iter()
                .copied()
                .filter(|&r| rows[r as usize][&(c as u32)].abs() == 1)
                .min_by_key(|&r| (rows[r as usize].len(), r));
            let Some(pr) = pivot_row else { continue };
            let pivot_entries: Vec<(u32, i64)> = rows[pr as usize].iter().map(|(&k, &v)| (k, v)).collect();
            let pv = rows[pr as usize][&(c as u32)];
            let targets: Vec<u32> = cols[c].iter().copied().filter(|&r| r != pr).collect();
            for r in targets {
                let f = rows[r as usize][&(c as u32)].checked_mul(pv)?;
                for &(k, v) in &pivot_entries {
                    let row = &mut rows[r as usize];
                    let cur = row.get(&k).copied().unwrap_or(0);
                    let next = cur.checked_sub(f.checked_mul(v)?)?;
                    if next == 0 {
                        row.remove(&k);
                        cols[k as usize].remove(&r);
                    } else {
                        row.insert(k, next);
                        if cur == 0 {
                            cols[k as usize].insert(r);
                        }
                    }
                }
            }
            // the pivot row and column now meet only at the pivot
            for (k, _) in pivot_entries {
                cols[k as usize].remove(&pr);
            }
            rows[pr as usize].clear();
            alive_col[c] = false;
            units += 1;
            progress = true;
        }
        if !progress {
            break;
        }
    }
    let live_rows: Vec<usize> = (0..nrows).filter(|&r| !rows[r].is_empty()).collect();
    let live_cols: Vec<usize> = (0..ncols).filter(|&c| alive_col[c] && !cols[c].is_empty()).collect();
    let col_pos: HashMap<usize, usize> = live_cols.iter().enumerate().map(|(k, &c)| (c, k)).collect();
    let mut rest = vec![vec![BigInt::zero(); live_cols.len()]; live_rows.len()];
    for (i, &r) in live_rows.iter().enumerate() {
        for (&c, &v) in &rows[r] {
            rest[i][col_pos[&(c as usize)]] = BigInt::from(v);
        }
    }
    Some((units, rest))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn zi(rows: &[&[i64]]) -> Vec<Vec<BigInt>> {
        rows.iter().map(|r| r.iter().map(|&v| BigInt::from(v)).collect()).collect()
    }

    fn to_sparse(m: &[Vec<i64>]) -> (usize, Vec<Vec<(u32, i64)>>) {
        let nrows = m.len();
        let ncols = m.first().map_or(0, Vec::len);
        let cols = (0..ncols)
            .map(|c| (0..nrows).filter(|&r| m[r][c] != 0).map(|r| (r as u32, m[r][c])).collect())
            .collect();
        (nrows, cols)
    }

    #[test]
    fn known_forms() {
        let d = smith_dense(zi(&[&[2, 4, 4], &[-6, 6, 12], &[10, -4, -16]]));
        assert_eq!(d, vec![BigInt::from(2), BigInt::from(6), BigInt::from(12)]);
        let d = smith_dense(zi(&[&[2, 0], &[0, 3]]));
        assert_eq!(d, vec![BigInt::from(1), BigInt::from(6)]);
        assert!(smith_dense(zi(&[&[0, 0], &[0, 0]])).is_empty());
        assert!(smith_dense(vec![]).is_empty());
    }

    #[test]
    fn sparse_agrees_with_dense() {
        let m = vec![vec![1, 1, 0, 0], vec![2, 0, 2, 0], vec![0, 0, 0, 4], vec![0, 3, 6, 0]];
        let (nr, cols) = to_sparse(&m);
        let dense = smith_dense(m.iter().map(|r| r.iter().map(|&v| BigInt::from(v)).collect()).collect());
        let s = smith_sparse(nr, &cols);
        assert_eq!(s.rank, dense.len());
        let dense_torsion: Vec<_> = dense.into_iter().filter(|d| !d.is_one()).collect();
        assert_eq!(s.torsion, dense_torsion);
    }
}
