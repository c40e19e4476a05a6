use crate::aggregate::{aggregate, AggregateStats, CoClustering};
use crate::distribution::JointDistribution;
use crate::error::{Error, Result, Side};
use crate::info::{entropy_unchecked, plogp, ProbTable};

use super::{check_beta, CostBreakdown, MiTerms};

/// Applied moves between two full rebuilds of the accumulators.
pub const REBUILD_INTERVAL: usize = 1000;

/// Per-side aggregated statistics.
#[derive(Debug, Clone)]
struct SideState {
    k: usize,
    // number of elements on the *other* side
    n_other: usize,
    // p(cluster)
    mass: Vec<f64>,
    mass_plogp: Vec<f64>,
    // k x n_other, p(cluster, element of the other side)
    joint: Vec<f64>,
    joint_plogp: Vec<f64>,
    // per cluster, sum of plogp over its row (or column) of the block table
    block_plogp: Vec<f64>,
}

/// Incrementally maintained co-clustering state supporting `O(|Ȳ| + nnz)`
/// evaluation of single-element row moves (and the mirror image for
/// columns).
///
/// Every loss term is a difference of entropies. The evaluator keeps, per
/// cluster, the mass, the `Σ p log p` of its slice of `p(X̄, Y)` (or
/// `p(X, Ȳ)`), and the `Σ p log p` of its slice of `p(X̄, Ȳ)`. A candidate
/// move of element `e` from cluster `a` to `b` only changes those
/// accumulators for `a` and `b`, and only at the other-side indices in the
/// support of `e`.
#[derive(Debug, Clone)]
pub struct MoveEvaluator<'a> {
    dist: &'a JointDistribution,
    cc: CoClustering,
    rows: SideState,
    cols: SideState,
    // kr x kc, p(X̄, Ȳ)
    block: Vec<f64>,
    h_x: f64,
    h_y: f64,
    h_xy: f64,
    moves_since_rebuild: usize,
    moves_applied: usize,
}

#[derive(Debug, Clone, Copy)]
struct Entropies {
    h_xbar: f64,
    h_ybar: f64,
    h_x_ybar: f64,
    h_xbar_y: f64,
    h_xbar_ybar: f64,
}

fn sum_replacing(values: &[f64], a: usize, va: f64, b: usize, vb: f64) -> f64 {
    let mut s = 0.0;
    for (c, &v) in values.iter().enumerate() {
        s += if c == a {
            va
        } else if c == b {
            vb
        } else {
            v
        };
    }
    s
}

impl<'a> MoveEvaluator<'a> {
    pub fn new(dist: &'a JointDistribution, cc: CoClustering) -> Result<Self> {
        cc.check_dimensions(dist)?;
        let h_x = entropy_unchecked(dist.row_marginal());
        let h_y = entropy_unchecked(dist.col_marginal());
        let h_xy = -dist.iter().map(|(_, _, v)| plogp(v)).sum::<f64>();
        let empty = SideState {
            k: 0,
            n_other: 0,
            mass: vec![],
            mass_plogp: vec![],
            joint: vec![],
            joint_plogp: vec![],
            block_plogp: vec![],
        };
        let mut me = MoveEvaluator {
            dist,
            cc,
            rows: empty.clone(),
            cols: empty,
            block: vec![],
            h_x,
            h_y,
            h_xy,
            moves_since_rebuild: 0,
            moves_applied: 0,
        };
        me.rebuild()?;
        Ok(me)
    }

    /// Recomputes every accumulator from scratch.
    pub fn rebuild(&mut self) -> Result<()> {
        let stats = aggregate(self.dist, &self.cc)?;
        let (kr, kc) = (self.cc.n_row_clusters(), self.cc.n_col_clusters());
        let (n_rows, n_cols) = (self.dist.n_rows(), self.dist.n_cols());

        self.block = stats.p_rc_cc.as_slice().to_vec();
        self.rows = SideState {
            k: kr,
            n_other: n_cols,
            mass: stats.cluster_row_marginal.clone(),
            mass_plogp: vec![0.0; kr],
            joint: stats.p_rc_c.as_slice().to_vec(),
            joint_plogp: vec![0.0; kr],
            block_plogp: vec![0.0; kr],
        };
        self.cols = SideState {
            k: kc,
            n_other: n_rows,
            mass: stats.cluster_col_marginal.clone(),
            mass_plogp: vec![0.0; kc],
            joint: stats.p_r_cc.transpose().as_slice().to_vec(),
            joint_plogp: vec![0.0; kc],
            block_plogp: vec![0.0; kc],
        };
        for side in [Side::Row, Side::Col] {
            for c in 0..self.cc.n_clusters(side) {
                self.refresh_cluster(side, c);
            }
        }
        self.moves_since_rebuild = 0;
        Ok(())
    }

    fn side(&self, side: Side) -> &SideState {
        match side {
            Side::Row => &self.rows,
            Side::Col => &self.cols,
        }
    }

    #[inline]
    fn block_index(&self, side: Side, cluster: usize, other: usize) -> usize {
        let kc = self.cols.k;
        match side {
            Side::Row => cluster * kc + other,
            Side::Col => other * kc + cluster,
        }
    }

    fn refresh_cluster(&mut self, side: Side, c: usize) {
        let k_other = self.side(side.other()).k;
        let block_sum: f64 =
            (0..k_other).map(|d| plogp(self.block[self.block_index(side, c, d)])).sum();
        let s = match side {
            Side::Row => &mut self.rows,
            Side::Col => &mut self.cols,
        };
        s.mass_plogp[c] = plogp(s.mass[c]);
        s.joint_plogp[c] = s.joint[c * s.n_other..(c + 1) * s.n_other].iter().map(|&v| plogp(v)).sum();
        s.block_plogp[c] = block_sum;
    }

    pub fn distribution(&self) -> &'a JointDistribution {
        self.dist
    }

    pub fn clustering(&self) -> &CoClustering {
        &self.cc
    }

    pub fn into_clustering(self) -> CoClustering {
        self.cc
    }

    /// Total number of moves that changed an assignment.
    pub fn moves_applied(&self) -> usize {
        self.moves_applied
    }

    fn current_entropies(&self) -> Entropies {
        Entropies {
            h_xbar: -self.rows.mass_plogp.iter().sum::<f64>(),
            h_ybar: -self.cols.mass_plogp.iter().sum::<f64>(),
            h_x_ybar: -self.cols.joint_plogp.iter().sum::<f64>(),
            h_xbar_y: -self.rows.joint_plogp.iter().sum::<f64>(),
            h_xbar_ybar: -self.rows.block_plogp.iter().sum::<f64>(),
        }
    }

    fn breakdown_from(&self, e: &Entropies, beta: f64) -> Result<CostBreakdown> {
        MiTerms {
            i_xy: self.h_x + self.h_y - self.h_xy,
            i_x_ybar: self.h_x + e.h_ybar - e.h_x_ybar,
            i_xbar_y: e.h_xbar + self.h_y - e.h_xbar_y,
            i_xbar_ybar: e.h_xbar + e.h_ybar - e.h_xbar_ybar,
        }
        .breakdown(beta)
    }

    /// Cost breakdown of the current state.
    pub fn current(&self, beta: f64) -> Result<CostBreakdown> {
        self.breakdown_from(&self.current_entropies(), beta)
    }

    pub fn current_total(&self, beta: f64) -> Result<f64> {
        Ok(self.current(beta)?.total)
    }

    fn check_move(&self, side: Side, element: usize, target: usize) -> Result<usize> {
        let n = self.dist.size(side);
        if element >= n {
            return Err(Error::IndexOutOfRange { index: element, limit: n });
        }
        let k = self.cc.n_clusters(side);
        if target >= k {
            return Err(Error::IndexOutOfRange { index: target, limit: k });
        }
        Ok(self.cc.assignment(side)[element])
    }

    /// `L_β` after hypothetically moving `element` on `side` to cluster
    /// `target`. Does not modify the state.
    pub fn eval_move(&self, side: Side, element: usize, target: usize, beta: f64) -> Result<f64> {
        check_beta(beta)?;
        let from = self.check_move(side, element, target)?;
        if from == target {
            return self.current_total(beta);
        }
        let s = self.side(side);
        let o = self.side(side.other());
        let p_e = self.dist.marginal(side)[element];

        let mass_from = s.mass[from] - p_e;
        let mass_to = s.mass[target] + p_e;
        let h_bar = -sum_replacing(&s.mass_plogp, from, plogp(mass_from), target, plogp(mass_to));

        let (support, probs) = self.dist.line(side, element);
        let row_from = &s.joint[from * s.n_other..(from + 1) * s.n_other];
        let row_to = &s.joint[target * s.n_other..(target + 1) * s.n_other];
        let mut joint_from = s.joint_plogp[from];
        let mut joint_to = s.joint_plogp[target];
        for (&j, &v) in support.iter().zip(probs) {
            joint_from += plogp(row_from[j] - v) - plogp(row_from[j]);
            joint_to += plogp(row_to[j] + v) - plogp(row_to[j]);
        }
        let h_bar_other = -sum_replacing(&s.joint_plogp, from, joint_from, target, joint_to);

        // element's mass split over the other side's clusters
        let n_self = o.n_other;
        let mut block_from = 0.0;
        let mut block_to = 0.0;
        for d in 0..o.k {
            let r = o.joint[d * n_self + element];
            block_from += plogp(self.block[self.block_index(side, from, d)] - r);
            block_to += plogp(self.block[self.block_index(side, target, d)] + r);
        }
        let h_block = -sum_replacing(&s.block_plogp, from, block_from, target, block_to);

        let h_obar = -o.mass_plogp.iter().sum::<f64>();
        let h_self_obar = -o.joint_plogp.iter().sum::<f64>();
        let e = match side {
            Side::Row => Entropies {
                h_xbar: h_bar,
                h_ybar: h_obar,
                h_x_ybar: h_self_obar,
                h_xbar_y: h_bar_other,
                h_xbar_ybar: h_block,
            },
            Side::Col => Entropies {
                h_xbar: h_obar,
                h_ybar: h_bar,
                h_x_ybar: h_bar_other,
                h_xbar_y: h_self_obar,
                h_xbar_ybar: h_block,
            },
        };
        Ok(self.breakdown_from(&e, beta)?.total)
    }

    /// `L_β(Φ_j, Ψ)` where `Φ_j` moves only row `i` to cluster `j`.
    pub fn eval_row_move(&self, i: usize, j: usize, beta: f64) -> Result<f64> {
        self.eval_move(Side::Row, i, j, beta)
    }

    /// `L_β(Φ, Ψ_l)` where `Ψ_l` moves only column `k` to cluster `l`.
    pub fn eval_col_move(&self, k: usize, l: usize, beta: f64) -> Result<f64> {
        self.eval_move(Side::Col, k, l, beta)
    }

    /// Moves `element` on `side` to cluster `target` and updates the
    /// accumulators of the two touched clusters.
    pub fn apply_move(&mut self, side: Side, element: usize, target: usize) -> Result<()> {
        let from = self.check_move(side, element, target)?;
        if from == target {
            return Ok(());
        }
        let p_e = self.dist.marginal(side)[element];
        let (support, probs) = self.dist.line(side, element);
        let kc = self.cols.k;
        let (s, o) = match side {
            Side::Row => (&mut self.rows, &self.cols),
            Side::Col => (&mut self.cols, &self.rows),
        };
        s.mass[from] -= p_e;
        s.mass[target] += p_e;
        for (&j, &v) in support.iter().zip(probs) {
            s.joint[from * s.n_other + j] -= v;
            s.joint[target * s.n_other + j] += v;
        }
        let n_self = o.n_other;
        for d in 0..o.k {
            let r = o.joint[d * n_self + element];
            let (idx_from, idx_to) = match side {
                Side::Row => (from * kc + d, target * kc + d),
                Side::Col => (d * kc + from, d * kc + target),
            };
            self.block[idx_from] -= r;
            self.block[idx_to] += r;
        }
        self.cc.set(side, element, target);
        self.refresh_cluster(side, from);
        self.refresh_cluster(side, target);
        let other = side.other();
        for d in 0..self.side(other).k {
            let sum: f64 =
                (0..self.side(side).k).map(|c| plogp(self.block[self.block_index(other, d, c)])).sum();
            match other {
                Side::Row => self.rows.block_plogp[d] = sum,
                Side::Col => self.cols.block_plogp[d] = sum,
            }
        }
        self.moves_applied += 1;
        self.moves_since_rebuild += 1;
        if self.moves_since_rebuild >= REBUILD_INTERVAL {
            self.rebuild()?;
        }
        Ok(())
    }

    /// The aggregated tables as currently held by the accumulators.
    pub fn stats(&self) -> Result<AggregateStats> {
        let (kr, kc) = (self.rows.k, self.cols.k);
        let (n_rows, n_cols) = (self.dist.n_rows(), self.dist.n_cols());
        let p_rc_cc = ProbTable::from_cells(
            kr,
            kc,
            (0..kr).flat_map(|a| (0..kc).map(move |b| (a, b))).map(|(a, b)| (a, b, self.block[a * kc + b])),
        );
        let p_rc_c = ProbTable::from_cells(
            kr,
            n_cols,
            (0..kr).flat_map(|a| (0..n_cols).map(move |y| (a, y, self.rows.joint[a * n_cols + y]))),
        );
        let p_r_cc = ProbTable::from_cells(
            n_rows,
            kc,
            (0..kc).flat_map(|b| (0..n_rows).map(move |x| (x, b, self.cols.joint[b * n_rows + x]))),
        );
        Ok(AggregateStats {
            p_rc_cc,
            p_r_cc,
            p_rc_c,
            cluster_row_marginal: self.rows.mass.clone(),
            cluster_col_marginal: self.cols.mass.clone(),
            mi_xy: self.dist.mutual_information()?,
        })
    }
}
