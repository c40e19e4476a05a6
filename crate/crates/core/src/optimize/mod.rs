//! Sequential and β-annealed minimization of `L_β`.
//!
//! [`sgitcc`] is a coordinate-descent heuristic: every row, then every
//! column, is moved to the cluster that minimizes the cost with everything
//! else held fixed, until an outer iteration improves the cost by no more
//! than `tol`. Small `β` couples the two sides strongly and creates many poor
//! local optima, so [`ann_itcc`] starts at `α = 1` and warm-starts a
//! sequence of sequential runs with `α` lowered by `Δ` until it reaches `β`.

mod config;
mod sib;

pub use config::{Init, OptimizerConfig};
pub use sib::{one_sided_sib, OneSidedResult};

use std::time::{Duration, Instant};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::aggregate::CoClustering;
use crate::cost::{cost_beta, MoveEvaluator};
use crate::distribution::JointDistribution;
use crate::error::{Error, Result, Side};

/// Candidates within this distance of the best cost count as ties.
pub const TIE_TOLERANCE: f64 = 1e-12;

/// One sequential optimization at a fixed `α`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StageTrace {
    pub alpha: f64,
    pub initial_cost: f64,
    /// Cost after each outer iteration.
    pub sweep_costs: Vec<f64>,
    pub final_cost: f64,
    pub moves: usize,
    pub clustering: CoClustering,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunTrace {
    pub seed: u64,
    pub stages: Vec<StageTrace>,
    pub moves_applied: usize,
    /// `L_β` of the returned clustering at the target `β`, from a full
    /// recomputation.
    pub final_cost: f64,
    pub wall_time: Duration,
}

impl RunTrace {
    fn new(seed: u64) -> Self {
        RunTrace { seed, stages: vec![], moves_applied: 0, final_cost: f64::NAN, wall_time: Duration::ZERO }
    }

    pub fn n_sweeps(&self) -> usize {
        self.stages.iter().map(|s| s.sweep_costs.len()).sum()
    }
}

fn rng_for(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub(crate) fn random_assignment(rng: &mut impl Rng, n_elements: usize, n_clusters: usize) -> Result<Vec<usize>> {
    if n_clusters == 0 {
        return Err(Error::InvalidConfig("cluster count must be at least 1".into()));
    }
    if n_clusters > n_elements {
        return Err(Error::TooManyClusters { n_clusters, n_elements });
    }
    let mut order: Vec<usize> = (0..n_elements).collect();
    order.shuffle(rng);
    let mut assignment = vec![0; n_elements];
    for (rank, &e) in order.iter().enumerate() {
        assignment[e] = if rank < n_clusters { rank } else { rng.gen_range(0..n_clusters) };
    }
    Ok(assignment)
}

/// A seeded random assignment in which every cluster id is used: the first
/// `n_clusters` elements of a random permutation get distinct ids and the
/// rest are drawn uniformly.
pub fn random_clustering(seed: u64, n_elements: usize, n_clusters: usize) -> Result<Vec<usize>> {
    random_assignment(&mut rng_for(seed), n_elements, n_clusters)
}

/// Best target cluster for `element`, preferring its current cluster on
/// ties and otherwise the lowest id that attains the minimum.
pub(crate) fn best_target(me: &MoveEvaluator<'_>, side: Side, element: usize, beta: f64) -> Result<usize> {
    let current = me.clustering().assignment(side)[element];
    let costs = (0..me.clustering().n_clusters(side))
        .map(|target| me.eval_move(side, element, target, beta))
        .collect::<Result<Vec<f64>>>()?;
    let min = costs.iter().copied().fold(f64::INFINITY, f64::min);
    if costs[current] <= min + TIE_TOLERANCE {
        return Ok(current);
    }
    Ok(costs.iter().position(|&c| c == min).expect("minimum is attained"))
}

/// One full pass over the elements of `side`; returns the number of moves.
pub(crate) fn sweep_side(me: &mut MoveEvaluator<'_>, side: Side, beta: f64) -> Result<usize> {
    let mut moves = 0;
    for element in 0..me.distribution().size(side) {
        let target = best_target(me, side, element, beta)?;
        if target != me.clustering().assignment(side)[element] {
            me.apply_move(side, element, target)?;
            moves += 1;
        }
    }
    Ok(moves)
}

fn sequential_stage(
    dist: &JointDistribution,
    init: CoClustering,
    alpha: f64,
    max_iter: usize,
    tol: f64,
) -> Result<StageTrace> {
    let mut me = MoveEvaluator::new(dist, init)?;
    let initial_cost = me.current_total(alpha)?;
    let mut sweep_costs = Vec::new();
    let mut moves = 0;
    let mut delta = f64::INFINITY;
    let mut iter = 0;
    while iter < max_iter && delta > tol {
        let c_old = me.current_total(alpha)?;
        moves += sweep_side(&mut me, Side::Row, alpha)?;
        moves += sweep_side(&mut me, Side::Col, alpha)?;
        me.rebuild()?;
        let c_new = me.current_total(alpha)?;
        delta = c_old - c_new;
        sweep_costs.push(c_new);
        iter += 1;
    }
    let final_cost = me.current_total(alpha)?;
    Ok(StageTrace { alpha, initial_cost, sweep_costs, final_cost, moves, clustering: me.into_clustering() })
}

fn initial_clustering(dist: &JointDistribution, config: &OptimizerConfig) -> Result<CoClustering> {
    match &config.init {
        Init::Given(cc) => Ok(cc.clone()),
        Init::Random => {
            let mut rng = rng_for(config.seed);
            let phi = random_assignment(&mut rng, dist.n_rows(), config.n_row_clusters)?;
            let psi = random_assignment(&mut rng, dist.n_cols(), config.n_col_clusters)?;
            CoClustering::new(phi, psi, config.n_row_clusters, config.n_col_clusters)
        }
        Init::OneSidedSib { restarts } => {
            let rows = one_sided_sib(dist, Side::Row, config.n_row_clusters, *restarts, config.seed)?;
            let cols = one_sided_sib(dist, Side::Col, config.n_col_clusters, *restarts, config.seed)?;
            CoClustering::new(rows.assignment, cols.assignment, config.n_row_clusters, config.n_col_clusters)
        }
    }
}

/// Sequential co-clustering at `config.beta`, started from the configured
/// initialization.
pub fn sgitcc(dist: &JointDistribution, config: &OptimizerConfig) -> Result<(CoClustering, RunTrace)> {
    config.validate(dist)?;
    let start = Instant::now();
    let mut trace = RunTrace::new(config.seed);
    let init = initial_clustering(dist, config)?;
    let stage = sequential_stage(dist, init, config.beta, config.max_iter, config.tol)?;
    let cc = stage.clustering.clone();
    trace.moves_applied = stage.moves;
    trace.stages.push(stage);
    trace.final_cost = cost_beta(dist, &cc, config.beta)?.total;
    trace.wall_time = start.elapsed();
    Ok((cc, trace))
}

/// The values of `α` visited by the annealing loop: `1`, then
/// `max(1 - mΔ, β)` for `m = 1, 2, ...` until `β` is reached.
///
/// Grid points are rounded to twelve decimals so that accumulated
/// floating-point error cannot produce a spurious extra stage just above
/// `β`.
pub fn anneal_schedule(beta: f64, step: f64) -> Vec<f64> {
    let mut alphas = vec![1.0];
    let mut m = 1u32;
    while *alphas.last().unwrap() > beta {
        let raw = 1.0 - f64::from(m) * step;
        let alpha = (raw * 1e12).round() / 1e12;
        if alpha <= beta + 1e-12 {
            alphas.push(beta);
        } else {
            alphas.push(alpha);
        }
        m += 1;
    }
    alphas
}

/// β-annealed co-clustering: a sequential run at `α = 1`, then warm-started
/// sequential runs along [`anneal_schedule`].
///
/// With [`Init::OneSidedSib`] the `α = 1` stage is replaced by independent
/// one-sided sequential information-bottleneck clusterings of rows and
/// columns.
pub fn ann_itcc(dist: &JointDistribution, config: &OptimizerConfig) -> Result<(CoClustering, RunTrace)> {
    config.validate(dist)?;
    let start = Instant::now();
    let mut trace = RunTrace::new(config.seed);
    let init = initial_clustering(dist, config)?;
    let schedule = anneal_schedule(config.beta, config.anneal_step);

    let mut cc = match config.init {
        Init::OneSidedSib { .. } => {
            let cost = cost_beta(dist, &init, 1.0)?.total;
            trace.stages.push(StageTrace {
                alpha: 1.0,
                initial_cost: cost,
                sweep_costs: vec![],
                final_cost: cost,
                moves: 0,
                clustering: init.clone(),
            });
            init
        }
        _ => {
            let stage = sequential_stage(dist, init, 1.0, config.max_iter, config.tol)?;
            let cc = stage.clustering.clone();
            trace.moves_applied += stage.moves;
            trace.stages.push(stage);
            cc
        }
    };
    for &alpha in &schedule[1..] {
        let stage = sequential_stage(dist, cc, alpha, config.max_iter, config.tol)?;
        cc = stage.clustering.clone();
        trace.moves_applied += stage.moves;
        trace.stages.push(stage);
    }
    trace.final_cost = cost_beta(dist, &cc, config.beta)?.total;
    trace.wall_time = start.elapsed();
    Ok((cc, trace))
}

/// Runs [`ann_itcc`] with seeds `seed, seed + 1, ..., seed + restarts - 1`
/// and keeps the run with the lowest final cost; ties go to the lowest
/// seed.
///
/// Restarts run on the current rayon pool. The result does not depend on
/// the number of threads.
pub fn best_of_restarts(dist: &JointDistribution, config: &OptimizerConfig) -> Result<(CoClustering, RunTrace)> {
    config.validate(dist)?;
    if config.restarts == 0 {
        return Err(Error::InvalidConfig("restarts must be at least 1".into()));
    }
    let runs: Vec<Result<(CoClustering, RunTrace)>> = (0..config.restarts as u64)
        .into_par_iter()
        .map(|r| {
            let mut run_config = config.clone();
            run_config.seed = config.seed.wrapping_add(r);
            ann_itcc(dist, &run_config)
        })
        .collect();
    let mut best: Option<(CoClustering, RunTrace)> = None;
    for run in runs {
        let (cc, trace) = run?;
        let better = match &best {
            None => true,
            Some((_, b)) => trace.final_cost < b.final_cost,
        };
        if better {
            best = Some((cc, trace));
        }
    }
    Ok(best.expect("at least one restart"))
}

#[cfg(test)]
mod tests;
