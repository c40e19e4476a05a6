use serde::{Deserialize, Serialize};

use crate::aggregate::{aggregate, CoClustering};
use crate::cost::MoveEvaluator;
use crate::distribution::JointDistribution;
use crate::error::{Error, Result, Side};
use crate::info::{clamp_nonnegative, mutual_information};

use super::{random_assignment, rng_for, sweep_side};

// sweeps per restart; every sweep that moves something strictly lowers the
// loss, so this only guards against pathological cycling on exact ties
const MAX_SWEEPS: usize = 1000;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OneSidedResult {
    pub assignment: Vec<usize>,
    /// `L_Y(X → X̄)` for rows or `L_X(Y → Ȳ)` for columns, in bits.
    pub loss: f64,
    /// Index of the restart that produced the assignment.
    pub restart: usize,
}

/// Sequential information-bottleneck clustering of one side with the other
/// side as relevant variable. Restart `r` uses seed `seed + r`; the lowest
/// loss wins and ties go to the earliest restart.
pub fn one_sided_sib(
    dist: &JointDistribution,
    side: Side,
    k: usize,
    restarts: usize,
    seed: u64,
) -> Result<OneSidedResult> {
    if restarts == 0 {
        return Err(Error::InvalidConfig("restarts must be at least 1".into()));
    }
    let n = dist.size(side);
    let n_other = dist.size(side.other());
    let mut best: Option<OneSidedResult> = None;
    for restart in 0..restarts {
        let mut rng = rng_for(seed.wrapping_add(restart as u64));
        let assignment = random_assignment(&mut rng, n, k)?;
        // collapsing the other side makes its loss term a constant
        let cc = match side {
            Side::Row => CoClustering::new(assignment, vec![0; n_other], k, 1)?,
            Side::Col => CoClustering::new(vec![0; n_other], assignment, 1, k)?,
        };
        let mut me = MoveEvaluator::new(dist, cc)?;
        for _ in 0..MAX_SWEEPS {
            if sweep_side(&mut me, side, 1.0)? == 0 {
                break;
            }
        }
        let cc = me.into_clustering();
        let loss = one_sided_loss(dist, &cc, side)?;
        if best.as_ref().map_or(true, |b| loss < b.loss) {
            best = Some(OneSidedResult { assignment: cc.assignment(side).to_vec(), loss, restart });
        }
    }
    Ok(best.expect("at least one restart"))
}

fn one_sided_loss(dist: &JointDistribution, cc: &CoClustering, side: Side) -> Result<f64> {
    let stats = aggregate(dist, cc)?;
    let kept = match side {
        Side::Row => mutual_information(&stats.p_rc_c)?,
        Side::Col => mutual_information(&stats.p_r_cc)?,
    };
    clamp_nonnegative(stats.mi_xy - kept, "one-sided loss")
}
