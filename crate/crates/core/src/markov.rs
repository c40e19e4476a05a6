//! The bipartite random walk on `X ∪ Y` and its Markov aggregation cost.
//!
//! The walk moves from a row to a column (or back) with probability
//! proportional to the connecting weight. Because every transition crosses
//! sides, the chain is 2-periodic and reversible; its invariant distribution
//! is half the row marginal on row states and half the column marginal on
//! column states.
//!
//! The aggregation cost here is evaluated directly on the stationary pair
//! distribution `P(Z1 = i, Z2 = j) = μ_i A_ij` and serves as an independent
//! check of the closed-form co-clustering cost in [`crate::cost`].

use crate::aggregate::CoClustering;
use crate::cost::{check_beta, cost_beta};
use crate::distribution::{connected_components, normalize, JointDistribution};
use crate::error::{Error, Result};
use crate::info::{clamp_nonnegative, mutual_information_sparse};
use crate::matrix::RawMatrix;

/// Row-stochastic transition matrix over `n_rows + n_cols` states, stored
/// sparsely by source state, with its invariant distribution.
#[derive(Debug, Clone)]
pub struct BipartiteChain {
    n_rows: usize,
    n_cols: usize,
    ptr: Vec<usize>,
    targets: Vec<usize>,
    probs: Vec<f64>,
    invariant: Vec<f64>,
}

impl BipartiteChain {
    pub fn n_states(&self) -> usize {
        self.n_rows + self.n_cols
    }

    /// States `0..n_rows` are rows of the weight matrix.
    pub fn row_states(&self) -> std::ops::Range<usize> {
        0..self.n_rows
    }

    /// States `n_rows..n_rows + n_cols` are its columns.
    pub fn col_states(&self) -> std::ops::Range<usize> {
        self.n_rows..self.n_states()
    }

    pub fn invariant(&self) -> &[f64] {
        &self.invariant
    }

    /// Outgoing transitions of `state`.
    pub fn transitions(&self, state: usize) -> impl Iterator<Item = (usize, f64)> + '_ {
        let span = self.ptr[state]..self.ptr[state + 1];
        self.targets[span.clone()].iter().copied().zip(self.probs[span].iter().copied())
    }

    pub fn transition(&self, from: usize, to: usize) -> f64 {
        self.transitions(from).find(|&(t, _)| t == to).map_or(0.0, |(_, p)| p)
    }

    /// Dense copy of the transition matrix.
    pub fn to_dense(&self) -> Vec<Vec<f64>> {
        let n = self.n_states();
        let mut a = vec![vec![0.0; n]; n];
        for (i, row) in a.iter_mut().enumerate() {
            for (j, p) in self.transitions(i) {
                row[j] = p;
            }
        }
        a
    }

    /// Cells of the stationary pair distribution `μ_i A_ij`.
    pub fn pair_cells(&self) -> impl Iterator<Item = (usize, usize, f64)> + '_ {
        (0..self.n_states()).flat_map(move |i| {
            let mu = self.invariant[i];
            self.transitions(i).map(move |(j, p)| (i, j, mu * p))
        })
    }
}

/// Builds the random walk `A = D⁻¹ [[0, W], [Wᵀ, 0]]` on the bipartite graph
/// of `raw`.
pub fn build_chain(raw: &RawMatrix) -> Result<BipartiteChain> {
    raw.validate_values()?;
    let (n_rows, n_cols) = (raw.n_rows(), raw.n_cols());
    let mut degree = vec![0.0; n_rows + n_cols];
    for (r, c, v) in raw.iter() {
        degree[r] += v;
        degree[n_rows + c] += v;
    }
    if let Some(node) = degree.iter().position(|&d| d <= 0.0) {
        return Err(Error::ZeroDegreeNode(node));
    }
    let components = connected_components(raw)?;
    if !components.is_irreducible() {
        return Err(Error::Reducible(components.n_components));
    }

    let n = n_rows + n_cols;
    let mut ptr = vec![0usize; n + 1];
    for (r, c, _) in raw.iter() {
        ptr[r + 1] += 1;
        ptr[n_rows + c + 1] += 1;
    }
    for s in 0..n {
        ptr[s + 1] += ptr[s];
    }
    let mut targets = vec![0usize; ptr[n]];
    let mut probs = vec![0.0; ptr[n]];
    let mut cursor = ptr.clone();
    for (r, c, v) in raw.iter() {
        targets[cursor[r]] = n_rows + c;
        probs[cursor[r]] = v / degree[r];
        cursor[r] += 1;
    }
    // row-major iteration leaves each column's row targets ascending
    for (r, c, v) in raw.iter() {
        let s = n_rows + c;
        targets[cursor[s]] = r;
        probs[cursor[s]] = v / degree[s];
        cursor[s] += 1;
    }

    let dist = normalize(raw)?;
    let invariant = dist
        .row_marginal()
        .iter()
        .chain(dist.col_marginal())
        .map(|&p| 0.5 * p)
        .collect();
    Ok(BipartiteChain { n_rows, n_cols, ptr, targets, probs, invariant })
}

/// The chain of an already normalized distribution.
pub fn build_chain_from_distribution(dist: &JointDistribution) -> Result<BipartiteChain> {
    build_chain(&dist.to_raw())
}

/// Invariant distribution by power iteration on the two-step chain `A²`,
/// one side at a time, each side renormalized to mass ½.
///
/// Independent of the closed form used by [`build_chain`]; kept for cross
/// checks.
pub fn invariant_by_power_iteration(chain: &BipartiteChain, max_iter: usize, tol: f64) -> Vec<f64> {
    let n = chain.n_states();
    let mut mu = vec![0.0; n];
    for states in [chain.row_states(), chain.col_states()] {
        let size = states.len() as f64;
        let mut v = vec![0.0; n];
        for s in states.clone() {
            v[s] = 1.0 / size;
        }
        for _ in 0..max_iter {
            let mut half = vec![0.0; n];
            for (i, &vi) in v.iter().enumerate() {
                if vi > 0.0 {
                    for (j, p) in chain.transitions(i) {
                        half[j] += vi * p;
                    }
                }
            }
            let mut next = vec![0.0; n];
            for (i, &hi) in half.iter().enumerate() {
                if hi > 0.0 {
                    for (j, p) in chain.transitions(i) {
                        next[j] += hi * p;
                    }
                }
            }
            // A² may oscillate within a side only if that side is itself
            // periodic; damp with a lazy step
            let total: f64 = next.iter().sum();
            for x in next.iter_mut() {
                *x /= total;
            }
            for s in states.clone() {
                next[s] = 0.5 * (next[s] + v[s]);
            }
            let delta: f64 = next.iter().zip(&v).map(|(a, b)| (a - b).abs()).sum();
            v = next;
            if delta < tol {
                break;
            }
        }
        for s in states {
            mu[s] = 0.5 * v[s];
        }
    }
    mu
}

/// An aggregation function `ζ` on the states of a bipartite chain. Ids
/// `0..marker` are reserved for row states and `marker..n_ids` for column
/// states.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AggregationMap {
    zeta: Vec<usize>,
    n_row_states: usize,
    marker: usize,
    n_ids: usize,
}

impl AggregationMap {
    pub fn new(zeta: Vec<usize>, n_row_states: usize, marker: usize, n_ids: usize) -> Result<Self> {
        if n_row_states > zeta.len() {
            return Err(Error::DimensionMismatch { expected: n_row_states, found: zeta.len() });
        }
        for (state, &id) in zeta.iter().enumerate() {
            if id >= n_ids {
                return Err(Error::InvalidClusterId { id, n_clusters: n_ids });
            }
            let row_id = id < marker;
            if row_id != (state < n_row_states) {
                return Err(Error::MutualExclusivityViolation(id));
            }
        }
        Ok(AggregationMap { zeta, n_row_states, marker, n_ids })
    }

    /// `ζ(x) = Φ(x)` on rows and `ζ(y) = |X̄| + Ψ(y)` on columns.
    pub fn from_coclustering(cc: &CoClustering) -> Self {
        let marker = cc.n_row_clusters();
        let zeta = cc.phi().iter().copied().chain(cc.psi().iter().map(|&b| marker + b)).collect();
        AggregationMap {
            zeta,
            n_row_states: cc.phi().len(),
            marker,
            n_ids: marker + cc.n_col_clusters(),
        }
    }

    pub fn zeta(&self) -> &[usize] {
        &self.zeta
    }

    pub fn n_ids(&self) -> usize {
        self.n_ids
    }

    pub fn marker(&self) -> usize {
        self.marker
    }

    fn check(&self, chain: &BipartiteChain) -> Result<()> {
        if self.zeta.len() != chain.n_states() {
            return Err(Error::DimensionMismatch { expected: chain.n_states(), found: self.zeta.len() });
        }
        if self.n_row_states != chain.n_rows {
            return Err(Error::DimensionMismatch { expected: chain.n_rows, found: self.n_row_states });
        }
        Ok(())
    }
}

/// The three mutual informations of the aggregation cost.
struct PairInformation {
    i_z1_z2: f64,
    i_z1_zbar2: f64,
    i_zbar1_zbar2: f64,
}

fn pair_information(chain: &BipartiteChain, zmap: &AggregationMap) -> Result<PairInformation> {
    let n = chain.n_states();
    let z = &zmap.zeta;
    let cells: Vec<_> = chain.pair_cells().collect();
    let i_z1_z2 = mutual_information_sparse(cells.clone(), n, n)?;
    let i_z1_zbar2 =
        mutual_information_sparse(cells.iter().map(|&(i, j, p)| (i, z[j], p)).collect(), n, zmap.n_ids)?;
    let i_zbar1_zbar2 = mutual_information_sparse(
        cells.iter().map(|&(i, j, p)| (z[i], z[j], p)).collect(),
        zmap.n_ids,
        zmap.n_ids,
    )?;
    Ok(PairInformation { i_z1_z2, i_z1_zbar2, i_zbar1_zbar2 })
}

/// `β I(Z1;Z2) + (1-2β) I(Z1;Z̄2) - (1-β) I(Z̄1;Z̄2)`.
pub fn markov_cost(chain: &BipartiteChain, zmap: &AggregationMap, beta: f64) -> Result<f64> {
    check_beta(beta)?;
    zmap.check(chain)?;
    let t = pair_information(chain, zmap)?;
    let cost = beta * t.i_z1_z2 + (1.0 - 2.0 * beta) * t.i_z1_zbar2 - (1.0 - beta) * t.i_zbar1_zbar2;
    clamp_nonnegative(cost, "Markov aggregation cost")
}

/// `β L_{Z1}(Z2 → Z̄2) + (1-β) L_{Z̄2}(Z1 → Z̄1)`, each relevant loss
/// computed from its own joint table.
pub fn markov_cost_via_losses(chain: &BipartiteChain, zmap: &AggregationMap, beta: f64) -> Result<f64> {
    check_beta(beta)?;
    zmap.check(chain)?;
    let n = chain.n_states();
    let m = zmap.n_ids;
    let z = &zmap.zeta;
    let cells: Vec<_> = chain.pair_cells().collect();

    // relevant variable Z1, compressed variable Z2
    let loss_first = mutual_information_sparse(cells.clone(), n, n)?
        - mutual_information_sparse(cells.iter().map(|&(i, j, p)| (i, z[j], p)).collect(), n, m)?;

    // relevant variable Z̄2 (rows of the table), compressed variable Z1
    let by_cluster: Vec<_> = cells.iter().map(|&(i, j, p)| (z[j], i, p)).collect();
    let loss_second = mutual_information_sparse(by_cluster.clone(), m, n)?
        - mutual_information_sparse(by_cluster.iter().map(|&(b, i, p)| (b, z[i], p)).collect(), m, m)?;

    let loss_first = clamp_nonnegative(loss_first, "L_Z1(Z2->Zbar2)")?;
    let loss_second = clamp_nonnegative(loss_second, "L_Zbar2(Z1->Zbar1)")?;
    Ok(beta * loss_first + (1.0 - beta) * loss_second)
}

/// `|2 · markov_cost - cost_beta|` for the chain built from `dist`.
pub fn markov_identity_residual(dist: &JointDistribution, cc: &CoClustering, beta: f64) -> Result<f64> {
    let chain = build_chain_from_distribution(dist)?;
    let zmap = AggregationMap::from_coclustering(cc);
    let markov = markov_cost(&chain, &zmap, beta)?;
    let direct = cost_beta(dist, cc, beta)?.total;
    Ok((2.0 * markov - direct).abs())
}
