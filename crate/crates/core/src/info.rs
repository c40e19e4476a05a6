//! Entropy, mutual information and relevant information loss, all in bits.
//!
//! Conventions: `0 log 0 = 0`; cells with zero mass contribute nothing to a
//! mutual-information sum. Negative results within [`CLAMP_TOLERANCE`] of
//! zero are floating-point cancellation and are clamped to zero; anything
//! more negative is reported as [`Error::NumericalInconsistency`].

use crate::distribution::MASS_TOLERANCE;
use crate::error::{Error, Result};

pub const CLAMP_TOLERANCE: f64 = 1e-10;

/// `p log2 p` with the `0 log 0 = 0` convention.
#[inline]
pub fn plogp(p: f64) -> f64 {
    if p > 0.0 {
        p * p.log2()
    } else {
        0.0
    }
}

/// Clamps a quantity that is nonnegative in exact arithmetic.
pub fn clamp_nonnegative(value: f64, what: &str) -> Result<f64> {
    if value >= 0.0 {
        Ok(value)
    } else if value >= -CLAMP_TOLERANCE {
        Ok(0.0)
    } else {
        Err(Error::NumericalInconsistency(format!("{what} = {value:e} < 0")))
    }
}

fn check_distribution(p: &[f64]) -> Result<()> {
    let mut total = 0.0;
    for (i, &v) in p.iter().enumerate() {
        if !v.is_finite() || v < 0.0 {
            return Err(Error::NotADistribution(format!("entry {i} is {v}")));
        }
        total += v;
    }
    if (total - 1.0).abs() > MASS_TOLERANCE {
        return Err(Error::NotADistribution(format!("total mass {total}")));
    }
    Ok(())
}

/// Shannon entropy `H(p)` in bits.
pub fn entropy(p: &[f64]) -> Result<f64> {
    check_distribution(p)?;
    Ok(entropy_unchecked(p))
}

pub(crate) fn entropy_unchecked(p: &[f64]) -> f64 {
    let h = -p.iter().map(|&v| plogp(v)).sum::<f64>();
    // -0.0 for degenerate distributions
    h.max(0.0)
}

/// A dense row-major two-dimensional probability table.
#[derive(Debug, Clone, PartialEq)]
pub struct ProbTable {
    n_rows: usize,
    n_cols: usize,
    data: Vec<f64>,
}

impl ProbTable {
    pub fn zeros(n_rows: usize, n_cols: usize) -> Self {
        ProbTable { n_rows, n_cols, data: vec![0.0; n_rows * n_cols] }
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let n_rows = rows.len();
        let n_cols = rows.first().map_or(0, Vec::len);
        let mut data = Vec::with_capacity(n_rows * n_cols);
        for row in rows {
            if row.len() != n_cols {
                return Err(Error::DimensionMismatch { expected: n_cols, found: row.len() });
            }
            data.extend_from_slice(row);
        }
        Ok(ProbTable { n_rows, n_cols, data })
    }

    pub fn from_cells(
        n_rows: usize,
        n_cols: usize,
        cells: impl IntoIterator<Item = (usize, usize, f64)>,
    ) -> Self {
        let mut t = ProbTable::zeros(n_rows, n_cols);
        for (r, c, v) in cells {
            t.data[r * n_cols + c] += v;
        }
        t
    }

    pub fn n_rows(&self) -> usize {
        self.n_rows
    }

    pub fn n_cols(&self) -> usize {
        self.n_cols
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> f64 {
        self.data[r * self.n_cols + c]
    }

    #[inline]
    pub fn add(&mut self, r: usize, c: usize, v: f64) {
        self.data[r * self.n_cols + c] += v;
    }

    pub fn row(&self, r: usize) -> &[f64] {
        &self.data[r * self.n_cols..(r + 1) * self.n_cols]
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    pub fn total(&self) -> f64 {
        self.data.iter().sum()
    }

    pub fn row_sums(&self) -> Vec<f64> {
        (0..self.n_rows).map(|r| self.row(r).iter().sum()).collect()
    }

    pub fn col_sums(&self) -> Vec<f64> {
        let mut sums = vec![0.0; self.n_cols];
        for r in 0..self.n_rows {
            for (s, v) in sums.iter_mut().zip(self.row(r)) {
                *s += v;
            }
        }
        sums
    }

    pub fn transpose(&self) -> ProbTable {
        let mut t = ProbTable::zeros(self.n_cols, self.n_rows);
        for r in 0..self.n_rows {
            for c in 0..self.n_cols {
                t.data[c * self.n_rows + r] = self.get(r, c);
            }
        }
        t
    }

    /// Merges columns through `zeta`, producing `n_groups` columns.
    pub fn aggregate_cols(&self, zeta: &[usize], n_groups: usize) -> Result<ProbTable> {
        if zeta.len() != self.n_cols {
            return Err(Error::DimensionMismatch { expected: self.n_cols, found: zeta.len() });
        }
        if let Some(&id) = zeta.iter().find(|&&z| z >= n_groups) {
            return Err(Error::InvalidClusterId { id, n_clusters: n_groups });
        }
        let mut out = ProbTable::zeros(self.n_rows, n_groups);
        for r in 0..self.n_rows {
            for (c, &v) in self.row(r).iter().enumerate() {
                out.add(r, zeta[c], v);
            }
        }
        Ok(out)
    }

    fn validate(&self) -> Result<()> {
        check_distribution(&self.data)
    }
}

/// `I(A; B)` for a normalized two-dimensional table.
pub fn mutual_information(joint: &ProbTable) -> Result<f64> {
    joint.validate()?;
    let rows = joint.row_sums();
    let cols = joint.col_sums();
    let cells = (0..joint.n_rows)
        .flat_map(|r| joint.row(r).iter().enumerate().map(move |(c, &v)| (r, c, v)));
    mutual_information_cells(cells, &rows, &cols)
}

/// `sum p(a,b) log2(p(a,b) / (p(a) p(b)))` over the given cells, with the
/// marginals supplied by the caller.
pub fn mutual_information_cells(
    cells: impl IntoIterator<Item = (usize, usize, f64)>,
    row_marginal: &[f64],
    col_marginal: &[f64],
) -> Result<f64> {
    let mut mi = 0.0;
    for (r, c, v) in cells {
        if v > 0.0 {
            mi += v * (v / (row_marginal[r] * col_marginal[c])).log2();
        }
    }
    clamp_nonnegative(mi, "mutual information")
}

/// Mutual information of a sparse joint given as unsorted cells with
/// possible duplicates; marginals are derived from the cells themselves.
pub(crate) fn mutual_information_sparse(
    mut cells: Vec<(usize, usize, f64)>,
    n_rows: usize,
    n_cols: usize,
) -> Result<f64> {
    cells.sort_unstable_by_key(|e| (e.0, e.1));
    let mut merged: Vec<(usize, usize, f64)> = Vec::with_capacity(cells.len());
    for (r, c, v) in cells {
        match merged.last_mut() {
            Some(last) if last.0 == r && last.1 == c => last.2 += v,
            _ => merged.push((r, c, v)),
        }
    }
    let mut rows = vec![0.0; n_rows];
    let mut cols = vec![0.0; n_cols];
    let mut total = 0.0;
    for &(r, c, v) in &merged {
        rows[r] += v;
        cols[c] += v;
        total += v;
    }
    if (total - 1.0).abs() > MASS_TOLERANCE {
        return Err(Error::NotADistribution(format!("total mass {total}")));
    }
    mutual_information_cells(merged, &rows, &cols)
}

/// Relevant information loss `L_S(Z -> zeta(Z)) = I(S; Z) - I(S; zeta(Z))`.
///
/// `joint` is the table of `(S, Z)` with `S` along rows; `zeta` maps each
/// column of `joint` to a group id.
pub fn relevant_information_loss(joint: &ProbTable, zeta: &[usize]) -> Result<f64> {
    if zeta.len() != joint.n_cols {
        return Err(Error::DimensionMismatch { expected: joint.n_cols, found: zeta.len() });
    }
    let n_groups = zeta.iter().max().map_or(0, |&m| m + 1);
    let full = mutual_information(joint)?;
    let compressed = mutual_information(&joint.aggregate_cols(zeta, n_groups)?)?;
    clamp_nonnegative(full - compressed, "relevant information loss")
}
