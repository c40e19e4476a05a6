//! Unnormalized input matrices.
//!
//! A [`RawMatrix`] is what loaders and generators produce: a nonnegative
//! weight matrix `W` of co-occurrence counts, similarities or ratings. It is
//! stored as sorted, duplicate-free triplets. Values are *not* validated
//! here; [`crate::normalize`] rejects negative or non-finite cells with the
//! offending position.

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct RawMatrix {
    n_rows: usize,
    n_cols: usize,
    // row-major, unique (row, col), explicit zeros removed
    entries: Vec<(usize, usize, f64)>,
}

impl RawMatrix {
    /// Builds a matrix from triplets. Duplicate cells are summed and cells
    /// that sum to exactly zero are dropped.
    pub fn from_triplets(
        n_rows: usize,
        n_cols: usize,
        triplets: impl IntoIterator<Item = (usize, usize, f64)>,
    ) -> Result<Self> {
        let mut entries: Vec<(usize, usize, f64)> = triplets.into_iter().collect();
        for &(r, c, _) in &entries {
            if r >= n_rows || c >= n_cols {
                return Err(Error::IndexOutOfDeclaredRange { row: r, col: c, n_rows, n_cols });
            }
        }
        entries.sort_by_key(|e| (e.0, e.1));
        let mut merged: Vec<(usize, usize, f64)> = Vec::with_capacity(entries.len());
        for (r, c, v) in entries {
            match merged.last_mut() {
                Some(last) if last.0 == r && last.1 == c => last.2 += v,
                _ => merged.push((r, c, v)),
            }
        }
        // NaN != 0.0, so non-finite cells survive for validation
        merged.retain(|e| e.2 != 0.0);
        Ok(RawMatrix { n_rows, n_cols, entries: merged })
    }

    /// Builds a matrix from dense rows. All rows must have equal length.
    pub fn from_dense(rows: &[Vec<f64>]) -> Result<Self> {
        let n_rows = rows.len();
        let n_cols = rows.first().map_or(0, Vec::len);
        let mut triplets = Vec::new();
        for (r, row) in rows.iter().enumerate() {
            if row.len() != n_cols {
                return Err(Error::RaggedRows { line: r + 1, expected: n_cols, found: row.len() });
            }
            for (c, &v) in row.iter().enumerate() {
                if v != 0.0 {
                    triplets.push((r, c, v));
                }
            }
        }
        RawMatrix::from_triplets(n_rows, n_cols, triplets)
    }

    pub fn n_rows(&self) -> usize {
        self.n_rows
    }

    pub fn n_cols(&self) -> usize {
        self.n_cols
    }

    /// Number of stored (nonzero) cells.
    pub fn nnz(&self) -> usize {
        self.entries.len()
    }

    pub fn get(&self, row: usize, col: usize) -> f64 {
        self.entries
            .binary_search_by(|e| (e.0, e.1).cmp(&(row, col)))
            .map_or(0.0, |idx| self.entries[idx].2)
    }

    /// Nonzero cells in row-major order.
    pub fn iter(&self) -> impl Iterator<Item = (usize, usize, f64)> + '_ {
        self.entries.iter().copied()
    }

    pub fn to_dense(&self) -> Vec<Vec<f64>> {
        let mut dense = vec![vec![0.0; self.n_cols]; self.n_rows];
        for &(r, c, v) in &self.entries {
            dense[r][c] = v;
        }
        dense
    }

    pub fn transpose(&self) -> RawMatrix {
        let mut entries: Vec<_> = self.entries.iter().map(|&(r, c, v)| (c, r, v)).collect();
        entries.sort_by_key(|e| (e.0, e.1));
        RawMatrix { n_rows: self.n_cols, n_cols: self.n_rows, entries }
    }

    pub fn scaled(&self, factor: f64) -> RawMatrix {
        RawMatrix {
            n_rows: self.n_rows,
            n_cols: self.n_cols,
            entries: self.entries.iter().map(|&(r, c, v)| (r, c, v * factor)).collect(),
        }
    }

    pub fn total(&self) -> f64 {
        self.entries.iter().map(|e| e.2).sum()
    }

    /// Checks every stored value for sign and finiteness.
    pub fn validate_values(&self) -> Result<()> {
        for &(r, c, v) in &self.entries {
            if !v.is_finite() {
                return Err(Error::NonFinite(r, c));
            }
            if v < 0.0 {
                return Err(Error::NegativeEntry(r, c));
            }
        }
        Ok(())
    }

    /// Mixes `mass` worth of uniform probability into every cell of the
    /// normalized matrix: `(W / sum(W) + mass / (n_rows * n_cols)) / (1 + mass)`.
    /// Used to make block-diagonal inputs irreducible.
    pub fn smoothed(&self, mass: f64) -> Result<RawMatrix> {
        self.validate_values()?;
        let total = self.total();
        if total <= 0.0 {
            return Err(Error::ZeroMatrix);
        }
        let cells = (self.n_rows * self.n_cols) as f64;
        let floor = mass / cells;
        let norm = 1.0 + mass;
        let mut dense = self.to_dense();
        for row in &mut dense {
            for v in row.iter_mut() {
                *v = (*v / total + floor) / norm;
            }
        }
        RawMatrix::from_dense(&dense)
    }
}
