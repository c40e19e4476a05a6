//! The generalized co-clustering cost `L_β(Φ, Ψ)` and its special cases.
//!
//! With `X̄ = Φ(X)` and `Ȳ = Ψ(Y)` the cost is
//!
//! ```text
//! L_β(Φ, Ψ) = β     (L_X(Y→Ȳ) + L_Y(X→X̄))
//!           + (1-β) (L_X̄(Y→Ȳ) + L_Ȳ(X→X̄))
//! ```
//!
//! where `L_S(Z→Z̄) = I(S; Z) - I(S; Z̄)` is the relevant information loss.
//! It equals twice the Markov aggregation cost of the bipartite random walk
//! on `X ∪ Y`; see [`crate::markov`].

mod evaluator;

pub use evaluator::{MoveEvaluator, REBUILD_INTERVAL};

use serde::{Deserialize, Serialize};

use crate::aggregate::{aggregate, AggregateStats, CoClustering};
use crate::distribution::JointDistribution;
use crate::error::{Error, Result};
use crate::info::{clamp_nonnegative, mutual_information};

/// The four relevant-information-loss terms and their β-weighted total.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CostBreakdown {
    pub beta: f64,
    /// `L_X(Y → Ȳ)`
    pub loss_x_of_ybar: f64,
    /// `L_Y(X → X̄)`
    pub loss_y_of_xbar: f64,
    /// `L_X̄(Y → Ȳ)`
    pub loss_xbar_of_ybar: f64,
    /// `L_Ȳ(X → X̄)`
    pub loss_ybar_of_xbar: f64,
    pub total: f64,
}

/// The mutual-information quantities every cost is built from, in bits.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MiTerms {
    pub i_xy: f64,
    pub i_x_ybar: f64,
    pub i_xbar_y: f64,
    pub i_xbar_ybar: f64,
}

impl MiTerms {
    pub fn from_stats(stats: &AggregateStats) -> Result<Self> {
        Ok(MiTerms {
            i_xy: stats.mi_xy,
            i_x_ybar: mutual_information(&stats.p_r_cc)?,
            i_xbar_y: mutual_information(&stats.p_rc_c)?,
            i_xbar_ybar: mutual_information(&stats.p_rc_cc)?,
        })
    }

    pub fn breakdown(&self, beta: f64) -> Result<CostBreakdown> {
        check_beta(beta)?;
        let loss_x_of_ybar = clamp_nonnegative(self.i_xy - self.i_x_ybar, "L_X(Y->Ybar)")?;
        let loss_y_of_xbar = clamp_nonnegative(self.i_xy - self.i_xbar_y, "L_Y(X->Xbar)")?;
        let loss_xbar_of_ybar =
            clamp_nonnegative(self.i_xbar_y - self.i_xbar_ybar, "L_Xbar(Y->Ybar)")?;
        let loss_ybar_of_xbar =
            clamp_nonnegative(self.i_x_ybar - self.i_xbar_ybar, "L_Ybar(X->Xbar)")?;
        let total = beta * (loss_x_of_ybar + loss_y_of_xbar)
            + (1.0 - beta) * (loss_xbar_of_ybar + loss_ybar_of_xbar);
        Ok(CostBreakdown {
            beta,
            loss_x_of_ybar,
            loss_y_of_xbar,
            loss_xbar_of_ybar,
            loss_ybar_of_xbar,
            total,
        })
    }
}

pub(crate) fn check_beta(beta: f64) -> Result<()> {
    if (0.0..=1.0).contains(&beta) {
        Ok(())
    } else {
        Err(Error::BetaOutOfRange(beta))
    }
}

/// Full evaluation of `L_β(Φ, Ψ)` from freshly aggregated tables.
pub fn cost_beta(dist: &JointDistribution, cc: &CoClustering, beta: f64) -> Result<CostBreakdown> {
    check_beta(beta)?;
    MiTerms::from_stats(&aggregate(dist, cc)?)?.breakdown(beta)
}

/// Information-theoretic co-clustering cost `I(X;Y) - I(X̄;Ȳ)`, equal to
/// `L_{1/2}`.
pub fn cost_itcc(dist: &JointDistribution, cc: &CoClustering) -> Result<f64> {
    let stats = aggregate(dist, cc)?;
    let i_xbar_ybar = mutual_information(&stats.p_rc_cc)?;
    clamp_nonnegative(stats.mi_xy - i_xbar_ybar, "ITCC cost")
}

/// Information-bottleneck co-clustering objective
/// `I(X;Ȳ) + I(X̄;Y) + I(X̄;Ȳ)` (a quantity to maximize), equal to
/// `3 I(X;Y) - 2 L_{3/4}`.
pub fn cost_ibcc(dist: &JointDistribution, cc: &CoClustering) -> Result<f64> {
    let t = MiTerms::from_stats(&aggregate(dist, cc)?)?;
    Ok(t.i_x_ybar + t.i_xbar_y + t.i_xbar_ybar)
}
