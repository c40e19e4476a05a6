//! The normalized joint distribution `P(X, Y)` and graph-level checks on
//! the raw weight matrix.

use crate::error::{Error, Result, Side};
use crate::info::{self, ProbTable};
use crate::matrix::RawMatrix;

/// Tolerance on the total mass of anything treated as a distribution.
pub const MASS_TOLERANCE: f64 = 1e-9;

/// A normalized nonnegative `|X| x |Y|` probability table.
///
/// Cells are stored twice, in compressed-row and compressed-column order, so
/// that both row and column moves can walk their element's support in
/// `O(nnz)`. Zero cells are never stored.
#[derive(Debug, Clone, PartialEq)]
pub struct JointDistribution {
    n_rows: usize,
    n_cols: usize,
    row_ptr: Vec<usize>,
    row_idx_cols: Vec<usize>,
    row_vals: Vec<f64>,
    col_ptr: Vec<usize>,
    col_idx_rows: Vec<usize>,
    col_vals: Vec<f64>,
    row_marginal: Vec<f64>,
    col_marginal: Vec<f64>,
}

/// Divides `raw` by its total mass.
///
/// Rows or columns without mass are rejected: they are unconstrained by the
/// co-clustering cost and would receive arbitrary cluster labels.
pub fn normalize(raw: &RawMatrix) -> Result<JointDistribution> {
    if raw.n_rows() == 0 || raw.n_cols() == 0 {
        return Err(Error::EmptyShape(raw.n_rows(), raw.n_cols()));
    }
    raw.validate_values()?;
    let total = raw.total();
    if total <= 0.0 {
        return Err(Error::ZeroMatrix);
    }
    let cells: Vec<(usize, usize, f64)> = raw.iter().map(|(r, c, v)| (r, c, v / total)).collect();
    let dist = JointDistribution::from_sorted_cells(raw.n_rows(), raw.n_cols(), &cells);
    if let Some(index) = dist.row_marginal.iter().position(|&p| p <= 0.0) {
        return Err(Error::EmptyRowOrCol { side: Side::Row, index });
    }
    if let Some(index) = dist.col_marginal.iter().position(|&p| p <= 0.0) {
        return Err(Error::EmptyRowOrCol { side: Side::Col, index });
    }
    Ok(dist)
}

impl JointDistribution {
    // cells must be row-major sorted, unique and positive
    fn from_sorted_cells(n_rows: usize, n_cols: usize, cells: &[(usize, usize, f64)]) -> Self {
        let mut row_ptr = vec![0usize; n_rows + 1];
        let mut col_ptr = vec![0usize; n_cols + 1];
        for &(r, c, _) in cells {
            row_ptr[r + 1] += 1;
            col_ptr[c + 1] += 1;
        }
        for i in 0..n_rows {
            row_ptr[i + 1] += row_ptr[i];
        }
        for j in 0..n_cols {
            col_ptr[j + 1] += col_ptr[j];
        }
        let row_idx_cols = cells.iter().map(|e| e.1).collect();
        let row_vals = cells.iter().map(|e| e.2).collect();

        let mut col_idx_rows = vec![0usize; cells.len()];
        let mut col_vals = vec![0.0; cells.len()];
        let mut cursor = col_ptr.clone();
        // row-major traversal keeps rows sorted within each column
        for &(r, c, v) in cells {
            col_idx_rows[cursor[c]] = r;
            col_vals[cursor[c]] = v;
            cursor[c] += 1;
        }

        let mut row_marginal = vec![0.0; n_rows];
        let mut col_marginal = vec![0.0; n_cols];
        for &(r, _, v) in cells {
            row_marginal[r] += v;
        }
        for c in 0..n_cols {
            col_marginal[c] = col_vals[col_ptr[c]..col_ptr[c + 1]].iter().sum();
        }
        JointDistribution {
            n_rows,
            n_cols,
            row_ptr,
            row_idx_cols,
            row_vals,
            col_ptr,
            col_idx_rows,
            col_vals,
            row_marginal,
            col_marginal,
        }
    }

    pub fn n_rows(&self) -> usize {
        self.n_rows
    }

    pub fn n_cols(&self) -> usize {
        self.n_cols
    }

    pub fn nnz(&self) -> usize {
        self.row_vals.len()
    }

    /// Fraction of cells that are nonzero.
    pub fn density(&self) -> f64 {
        self.nnz() as f64 / (self.n_rows * self.n_cols) as f64
    }

    pub fn prob(&self, row: usize, col: usize) -> f64 {
        let (cols, vals) = self.row(row);
        cols.binary_search(&col).map_or(0.0, |k| vals[k])
    }

    /// Support of row `i`: column indices (ascending) and probabilities.
    pub fn row(&self, i: usize) -> (&[usize], &[f64]) {
        let span = self.row_ptr[i]..self.row_ptr[i + 1];
        (&self.row_idx_cols[span.clone()], &self.row_vals[span])
    }

    /// Support of column `j`: row indices (ascending) and probabilities.
    pub fn col(&self, j: usize) -> (&[usize], &[f64]) {
        let span = self.col_ptr[j]..self.col_ptr[j + 1];
        (&self.col_idx_rows[span.clone()], &self.col_vals[span])
    }

    /// Support of element `index` on the given side.
    pub fn line(&self, side: Side, index: usize) -> (&[usize], &[f64]) {
        match side {
            Side::Row => self.row(index),
            Side::Col => self.col(index),
        }
    }

    pub fn row_marginal(&self) -> &[f64] {
        &self.row_marginal
    }

    pub fn col_marginal(&self) -> &[f64] {
        &self.col_marginal
    }

    pub fn marginal(&self, side: Side) -> &[f64] {
        match side {
            Side::Row => &self.row_marginal,
            Side::Col => &self.col_marginal,
        }
    }

    pub fn size(&self, side: Side) -> usize {
        match side {
            Side::Row => self.n_rows,
            Side::Col => self.n_cols,
        }
    }

    /// Nonzero cells in row-major order.
    pub fn iter(&self) -> impl Iterator<Item = (usize, usize, f64)> + '_ {
        (0..self.n_rows).flat_map(move |r| {
            let (cols, vals) = self.row(r);
            cols.iter().zip(vals).map(move |(&c, &v)| (r, c, v))
        })
    }

    pub fn to_dense(&self) -> Vec<Vec<f64>> {
        let mut dense = vec![vec![0.0; self.n_cols]; self.n_rows];
        for (r, c, v) in self.iter() {
            dense[r][c] = v;
        }
        dense
    }

    pub fn to_table(&self) -> ProbTable {
        ProbTable::from_cells(self.n_rows, self.n_cols, self.iter())
    }

    pub fn to_raw(&self) -> RawMatrix {
        RawMatrix::from_triplets(self.n_rows, self.n_cols, self.iter())
            .expect("cells are within bounds")
    }

    /// The distribution of `(Y, X)`.
    pub fn transpose(&self) -> JointDistribution {
        JointDistribution {
            n_rows: self.n_cols,
            n_cols: self.n_rows,
            row_ptr: self.col_ptr.clone(),
            row_idx_cols: self.col_idx_rows.clone(),
            row_vals: self.col_vals.clone(),
            col_ptr: self.row_ptr.clone(),
            col_idx_rows: self.row_idx_cols.clone(),
            col_vals: self.row_vals.clone(),
            row_marginal: self.col_marginal.clone(),
            col_marginal: self.row_marginal.clone(),
        }
    }

    /// `I(X; Y)` in bits.
    pub fn mutual_information(&self) -> Result<f64> {
        info::mutual_information_cells(self.iter(), &self.row_marginal, &self.col_marginal)
    }
}

/// Connected components of the bipartite graph whose nodes are the rows
/// (`0..n_rows`) and columns (`n_rows..n_rows + n_cols`) of `raw`, with an
/// edge for every nonzero cell.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Components {
    pub n_components: usize,
    /// Component id per node, numbered in order of first appearance.
    pub labels: Vec<usize>,
}

impl Components {
    pub fn is_irreducible(&self) -> bool {
        self.n_components == 1
    }
}

pub fn connected_components(raw: &RawMatrix) -> Result<Components> {
    raw.validate_values()?;
    let n_rows = raw.n_rows();
    let n = n_rows + raw.n_cols();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(parent: &mut [usize], mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }
    for (r, c, _) in raw.iter() {
        let a = find(&mut parent, r);
        let b = find(&mut parent, n_rows + c);
        if a != b {
            parent[a.max(b)] = a.min(b);
        }
    }
    let mut root_label = vec![usize::MAX; n];
    let mut n_components = 0;
    let labels = (0..n)
        .map(|node| {
            let root = find(&mut parent, node);
            if root_label[root] == usize::MAX {
                root_label[root] = n_components;
                n_components += 1;
            }
            root_label[root]
        })
        .collect();
    Ok(Components { n_components, labels })
}
