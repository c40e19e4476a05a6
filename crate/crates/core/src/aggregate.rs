//! Co-clusterings and the aggregated tables they induce.

use serde::{Deserialize, Serialize};

use crate::distribution::JointDistribution;
use crate::error::{Error, Result, Side};
use crate::info::ProbTable;

/// A pair of total assignment maps: rows to row clusters (`phi`) and
/// columns to column clusters (`psi`).
///
/// Cluster ids range over `0..n_row_clusters` and `0..n_col_clusters`.
/// Clusters may be empty.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CoClustering {
    phi: Vec<usize>,
    psi: Vec<usize>,
    n_row_clusters: usize,
    n_col_clusters: usize,
}

impl CoClustering {
    pub fn new(
        phi: Vec<usize>,
        psi: Vec<usize>,
        n_row_clusters: usize,
        n_col_clusters: usize,
    ) -> Result<Self> {
        for (ids, k) in [(&phi, n_row_clusters), (&psi, n_col_clusters)] {
            if let Some(&id) = ids.iter().find(|&&id| id >= k) {
                return Err(Error::InvalidClusterId { id, n_clusters: k });
            }
        }
        Ok(CoClustering { phi, psi, n_row_clusters, n_col_clusters })
    }

    /// Builds a co-clustering whose cluster counts are one past the largest
    /// id used on each side.
    pub fn from_assignments(phi: Vec<usize>, psi: Vec<usize>) -> Self {
        let kr = phi.iter().max().map_or(0, |&m| m + 1);
        let kc = psi.iter().max().map_or(0, |&m| m + 1);
        CoClustering { phi, psi, n_row_clusters: kr, n_col_clusters: kc }
    }

    /// Every element in its own cluster.
    pub fn identity(n_rows: usize, n_cols: usize) -> Self {
        CoClustering {
            phi: (0..n_rows).collect(),
            psi: (0..n_cols).collect(),
            n_row_clusters: n_rows,
            n_col_clusters: n_cols,
        }
    }

    /// Everything in cluster 0 on both sides.
    pub fn constant(n_rows: usize, n_cols: usize) -> Self {
        CoClustering { phi: vec![0; n_rows], psi: vec![0; n_cols], n_row_clusters: 1, n_col_clusters: 1 }
    }

    pub fn phi(&self) -> &[usize] {
        &self.phi
    }

    pub fn psi(&self) -> &[usize] {
        &self.psi
    }

    pub fn n_row_clusters(&self) -> usize {
        self.n_row_clusters
    }

    pub fn n_col_clusters(&self) -> usize {
        self.n_col_clusters
    }

    pub fn assignment(&self, side: Side) -> &[usize] {
        match side {
            Side::Row => &self.phi,
            Side::Col => &self.psi,
        }
    }

    pub fn n_clusters(&self, side: Side) -> usize {
        match side {
            Side::Row => self.n_row_clusters,
            Side::Col => self.n_col_clusters,
        }
    }

    pub(crate) fn set(&mut self, side: Side, element: usize, cluster: usize) {
        match side {
            Side::Row => self.phi[element] = cluster,
            Side::Col => self.psi[element] = cluster,
        }
    }

    /// Sorted ids of the clusters that hold at least one element.
    pub fn used_clusters(&self, side: Side) -> Vec<usize> {
        let mut used = vec![false; self.n_clusters(side)];
        for &id in self.assignment(side) {
            used[id] = true;
        }
        used.iter().enumerate().filter(|(_, &u)| u).map(|(id, _)| id).collect()
    }

    pub fn n_nonempty(&self, side: Side) -> usize {
        self.used_clusters(side).len()
    }

    /// Swaps the roles of rows and columns.
    pub fn transpose(&self) -> CoClustering {
        CoClustering {
            phi: self.psi.clone(),
            psi: self.phi.clone(),
            n_row_clusters: self.n_col_clusters,
            n_col_clusters: self.n_row_clusters,
        }
    }

    pub fn check_dimensions(&self, dist: &JointDistribution) -> Result<()> {
        if self.phi.len() != dist.n_rows() {
            return Err(Error::DimensionMismatch { expected: dist.n_rows(), found: self.phi.len() });
        }
        if self.psi.len() != dist.n_cols() {
            return Err(Error::DimensionMismatch { expected: dist.n_cols(), found: self.psi.len() });
        }
        Ok(())
    }
}

/// The aggregated joint tables induced by a co-clustering.
#[derive(Debug, Clone, PartialEq)]
pub struct AggregateStats {
    /// `p(X̄, Ȳ)`, `|X̄| x |Ȳ|`.
    pub p_rc_cc: ProbTable,
    /// `p(X, Ȳ)`, `|X| x |Ȳ|`.
    pub p_r_cc: ProbTable,
    /// `p(X̄, Y)`, `|X̄| x |Y|`.
    pub p_rc_c: ProbTable,
    pub cluster_row_marginal: Vec<f64>,
    pub cluster_col_marginal: Vec<f64>,
    /// `I(X; Y)` in bits.
    pub mi_xy: f64,
}

pub fn aggregate(dist: &JointDistribution, cc: &CoClustering) -> Result<AggregateStats> {
    cc.check_dimensions(dist)?;
    let (kr, kc) = (cc.n_row_clusters(), cc.n_col_clusters());
    let mut p_r_cc = ProbTable::zeros(dist.n_rows(), kc);
    let mut p_rc_c = ProbTable::zeros(kr, dist.n_cols());
    for (r, c, v) in dist.iter() {
        p_r_cc.add(r, cc.psi()[c], v);
        p_rc_c.add(cc.phi()[r], c, v);
    }
    let mut p_rc_cc = ProbTable::zeros(kr, kc);
    for r in 0..dist.n_rows() {
        for (b, &v) in p_r_cc.row(r).iter().enumerate() {
            p_rc_cc.add(cc.phi()[r], b, v);
        }
    }
    Ok(AggregateStats {
        cluster_row_marginal: p_rc_cc.row_sums(),
        cluster_col_marginal: p_rc_cc.col_sums(),
        p_rc_cc,
        p_r_cc,
        p_rc_c,
        mi_xy: dist.mutual_information()?,
    })
}
