use std::fmt;

use num_bigint::BigUint;
use num_traits::One;
use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};
use crate::partitions::OrderedPartition;

/// Direction of a contraction.
///
/// `Horizontal` merges two adjacent rows (first index, real direction) and
/// maps `p × q` to `(p-1) × q`. `Vertical` merges two adjacent columns
/// (second index, imaginary direction) and maps `p × q` to `p × (q-1)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Kind {
    Horizontal,
    Vertical,
}

impl Kind {
    pub const BOTH: [Kind; 2] = [Kind::Horizontal, Kind::Vertical];
}

impl fmt::Display for Kind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Kind::Horizontal => "horizontal",
            Kind::Vertical => "vertical",
        })
    }
}

/// A `p × q` matrix of nonnegative integers with no zero row and no zero column.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "RowsRepr", into = "RowsRepr")]
pub struct ContingencyMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<u32>,
}

#[derive(Serialize, Deserialize)]
struct RowsRepr {
    rows: Vec<Vec<u32>>,
}

impl TryFrom<RowsRepr> for ContingencyMatrix {
    type Error = Error;

    fn try_from(r: RowsRepr) -> Result<Self> {
        ContingencyMatrix::from_rows(r.rows)
    }
}

impl From<ContingencyMatrix> for RowsRepr {
    fn from(m: ContingencyMatrix) -> Self {
        RowsRepr { rows: m.to_rows() }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Margins {
    pub weight: usize,
    pub horizontal: OrderedPartition,
    pub vertical: OrderedPartition,
}

impl ContingencyMatrix {
    pub fn from_rows(rows: Vec<Vec<u32>>) -> Result<Self> {
        let p = rows.len();
        let q = rows.first().map_or(0, Vec::len);
        if p == 0 || q == 0 {
            return domain("a contingency matrix needs at least one row and one column");
        }
        if rows.iter().any(|r| r.len() != q) {
            return domain("rows of a contingency matrix must have equal length");
        }
        Self::from_flat(p, q, rows.into_iter().flatten().collect())
    }

    pub fn from_flat(rows: usize, cols: usize, entries: Vec<u32>) -> Result<Self> {
        if rows == 0 || cols == 0 || entries.len() != rows * cols {
            return domain(format!(
                "{} entries do not form a {rows} x {cols} matrix",
                entries.len()
            ));
        }
        let m = ContingencyMatrix {
            rows,
            cols,
            entries,
        };
        if let Some(i) = (0..rows).find(|&i| m.row(i).all(|v| v == 0)) {
            return domain(format!("row {i} is zero"));
        }
        if let Some(j) = (0..cols).find(|&j| m.col(j).all(|v| v == 0)) {
            return domain(format!("column {j} is zero"));
        }
        Ok(m)
    }

    pub(crate) fn from_flat_unchecked(rows: usize, cols: usize, entries: Vec<u32>) -> Self {
        debug_assert_eq!(entries.len(), rows * cols);
        ContingencyMatrix {
            rows,
            cols,
            entries,
        }
    }

    /// The `n × n` permutation matrix with a one at `(i, perm[i])`.
    pub fn permutation(perm: &[usize]) -> Result<Self> {
        let n = perm.len();
        let mut entries = vec![0; n * n];
        for (i, &j) in perm.iter().enumerate() {
            if j >= n {
                return domain(format!("{perm:?} is not a permutation"));
            }
            entries[i * n + j] = 1;
        }
        Self::from_flat(n, n, entries)
    }

    /// Number of rows (`p`).
    pub fn rows(&self) -> usize {
        self.rows
    }

    /// Number of columns (`q`).
    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn get(&self, i: usize, j: usize) -> u32 {
        self.entries[i * self.cols + j]
    }

    /// Row-major entries.
    pub fn entries(&self) -> &[u32] {
        &self.entries
    }

    pub fn row(&self, i: usize) -> impl Iterator<Item = u32> + '_ {
        self.entries[i * self.cols..(i + 1) * self.cols].iter().copied()
    }

    pub fn col(&self, j: usize) -> impl Iterator<Item = u32> + '_ {
        (0..self.rows).map(move |i| self.get(i, j))
    }

    pub fn to_rows(&self) -> Vec<Vec<u32>> {
        self.entries.chunks(self.cols).map(<[u32]>::to_vec).collect()
    }

    pub fn weight(&self) -> usize {
        self.entries.iter().map(|&v| v as usize).sum()
    }

    pub fn transpose(&self) -> Self {
        let mut entries = Vec::with_capacity(self.entries.len());
        for j in 0..self.cols {
            entries.extend(self.col(j));
        }
        ContingencyMatrix {
            rows: self.cols,
            cols: self.rows,
            entries,
        }
    }

    pub fn is_permutation_matrix(&self) -> bool {
        self.rows == self.cols && self.weight() == self.rows && self.entries.iter().all(|&v| v <= 1)
    }

    pub fn row_sums(&self) -> Vec<u32> {
        (0..self.rows).map(|i| self.row(i).sum()).collect()
    }

    pub fn col_sums(&self) -> Vec<u32> {
        (0..self.cols).map(|j| self.col(j).sum()).collect()
    }

    pub fn margins(&self) -> Margins {
        Margins {
            weight: self.weight(),
            horizontal: OrderedPartition::new(self.row_sums()).expect("rows are nonzero"),
            vertical: OrderedPartition::new(self.col_sums()).expect("columns are nonzero"),
        }
    }

    fn check_index(&self, kind: Kind, i: usize) -> Result<()> {
        let extent = match kind {
            Kind::Horizontal => self.rows,
            Kind::Vertical => self.cols,
        };
        if i + 1 >= extent {
            return domain(format!(
                "{kind} contraction at {i} is out of range for a {} x {} matrix",
                self.rows, self.cols
            ));
        }
        Ok(())
    }

    /// Merges slices `i` and `i + 1` along `kind` by entrywise addition.
    pub fn contract(&self, kind: Kind, i: usize) -> Result<Self> {
        self.check_index(kind, i)?;
        let (p, q) = (self.rows, self.cols);
        Ok(match kind {
            Kind::Horizontal => {
                let mut entries = Vec::with_capacity((p - 1) * q);
                entries.extend_from_slice(&self.entries[..i * q]);
                entries.extend(self.row(i).zip(self.row(i + 1)).map(|(a, b)| a + b));
                entries.extend_from_slice(&self.entries[(i + 2) * q..]);
                ContingencyMatrix {
                    rows: p - 1,
                    cols: q,
                    entries,
                }
            }
            Kind::Vertical => {
                let mut entries = Vec::with_capacity(p * (q - 1));
                for r in 0..p {
                    let row = &self.entries[r * q..(r + 1) * q];
                    entries.extend_from_slice(&row[..i]);
                    entries.push(row[i] + row[i + 1]);
                    entries.extend_from_slice(&row[i + 2..]);
                }
                ContingencyMatrix {
                    rows: p,
                    cols: q - 1,
                    entries,
                }
            }
        })
    }

    /// A contraction is anodyne when the two merged slices have disjoint supports.
    pub fn is_anodyne(&self, kind: Kind, i: usize) -> Result<bool> {
        self.check_index(kind, i)?;
        Ok(match kind {
            Kind::Horizontal => self.row(i).zip(self.row(i + 1)).all(|(a, b)| a == 0 || b == 0),
            Kind::Vertical => self.col(i).zip(self.col(i + 1)).all(|(a, b)| a == 0 || b == 0),
        })
    }

    /// All valid `(kind, position)` contractions of this matrix.
    pub fn contractions(&self) -> impl Iterator<Item = (Kind, usize)> + '_ {
        let h = (0..self.rows.saturating_sub(1)).map(|i| (Kind::Horizontal, i));
        let v = (0..self.cols.saturating_sub(1)).map(|j| (Kind::Vertical, j));
        h.chain(v)
    }

    /// Number of colored contingency matrices lying over this one: `n! / Π m_ij!`.
    pub fn colored_lift_count(&self) -> BigUint {
        let num = factorial(self.weight() as u64);
        let den = self
            .entries
            .iter()
            .fold(BigUint::one(), |acc, &v| acc * factorial(v as u64));
        num / den
    }

    /// Nonzero entries in row-major order.
    pub fn nonzero_entries(&self) -> impl Iterator<Item = u32> + '_ {
        self.entries.iter().copied().filter(|&v| v > 0)
    }
}

pub(crate) fn factorial(n: u64) -> BigUint {
    (2..=n).fold(BigUint::one(), |acc, k| acc * k)
}

impl fmt::Display for ContingencyMatrix {
    /// Rows separated by `;`, e.g. `[1,0;0,1]`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, ";")?;
            }
            for j in 0..self.cols {
                if j > 0 {
                    write!(f, ",")?;
                }
                write!(f, "{}", self.get(i, j))?;
            }
        }
        write!(f, "]")
    }
}
