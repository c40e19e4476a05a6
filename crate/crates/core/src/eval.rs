//! Clustering quality against a known labeling.
//!
//! [`map_score`] is the micro-averaged precision under the best one-to-one
//! matching of predicted and true clusters. [`map_prime`] (purity) lets
//! every predicted cluster pick its best label independently and accepts
//! elements that carry several admissible labels.

use pathfinding::kuhn_munkres::kuhn_munkres;
use pathfinding::matrix::Matrix;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum GroundTruth {
    /// One label per element, ids `0..n_clusters`, each used at least once.
    Hard { labels: Vec<usize>, n_clusters: usize },
    /// A nonempty set of admissible labels per element.
    Multi(Vec<Vec<usize>>),
}

impl GroundTruth {
    pub fn hard(labels: Vec<usize>) -> Result<Self> {
        let n_clusters = labels.iter().max().map_or(0, |&m| m + 1);
        let mut used = vec![false; n_clusters];
        for &l in &labels {
            used[l] = true;
        }
        if let Some(missing) = used.iter().position(|&u| !u) {
            return Err(Error::InvalidGroundTruth(format!("label {missing} is never used")));
        }
        Ok(GroundTruth::Hard { labels, n_clusters })
    }

    pub fn multi(sets: Vec<Vec<usize>>) -> Result<Self> {
        if let Some(e) = sets.iter().position(Vec::is_empty) {
            return Err(Error::InvalidGroundTruth(format!("element {e} has no label")));
        }
        Ok(GroundTruth::Multi(sets))
    }

    pub fn len(&self) -> usize {
        match self {
            GroundTruth::Hard { labels, .. } => labels.len(),
            GroundTruth::Multi(sets) => sets.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Label sets, with hard labels as singletons.
    fn label_sets(&self) -> Vec<Vec<usize>> {
        match self {
            GroundTruth::Hard { labels, .. } => labels.iter().map(|&l| vec![l]).collect(),
            GroundTruth::Multi(sets) => sets.clone(),
        }
    }
}

/// `|pred⁻¹(j) ∩ truth⁻¹(i)|` as a `n_pred × n_truth` table of counts.
pub fn overlap_matrix(pred: &[usize], truth: &[usize]) -> Result<Vec<Vec<usize>>> {
    if pred.len() != truth.len() {
        return Err(Error::LengthMismatch { pred: pred.len(), truth: truth.len() });
    }
    let kp = pred.iter().max().map_or(0, |&m| m + 1);
    let kt = truth.iter().max().map_or(0, |&m| m + 1);
    let mut counts = vec![vec![0; kt]; kp];
    for (&p, &t) in pred.iter().zip(truth) {
        counts[p][t] += 1;
    }
    Ok(counts)
}

/// Micro-averaged precision: the largest fraction of elements that a
/// one-to-one relabeling of `pred` places in their true cluster.
///
/// `n_pred_clusters` counts empty predicted clusters too and must equal the
/// number of true clusters.
pub fn map_score(pred: &[usize], n_pred_clusters: usize, truth: &GroundTruth) -> Result<f64> {
    let GroundTruth::Hard { labels, n_clusters } = truth else {
        return Err(Error::InvalidGroundTruth("map_score needs a hard ground truth".into()));
    };
    if pred.len() != labels.len() {
        return Err(Error::LengthMismatch { pred: pred.len(), truth: labels.len() });
    }
    if n_pred_clusters != *n_clusters {
        return Err(Error::ClusterCountMismatch { pred: n_pred_clusters, truth: *n_clusters });
    }
    if let Some(&id) = pred.iter().find(|&&id| id >= n_pred_clusters) {
        return Err(Error::InvalidClusterId { id, n_clusters: n_pred_clusters });
    }
    if pred.is_empty() {
        return Ok(1.0);
    }
    let k = *n_clusters;
    let mut weights = vec![0i64; k * k];
    for (&p, &t) in pred.iter().zip(labels) {
        weights[p * k + t] += 1;
    }
    let (matched, _) = kuhn_munkres(&Matrix::from_vec(k, k, weights).expect("square table"));
    Ok(matched as f64 / pred.len() as f64)
}

/// Purity: every predicted cluster is credited with the count of its most
/// frequent admissible label; labels may be reused across clusters.
pub fn map_prime(pred: &[usize], truth: &GroundTruth) -> Result<f64> {
    if pred.len() != truth.len() {
        return Err(Error::LengthMismatch { pred: pred.len(), truth: truth.len() });
    }
    if pred.is_empty() {
        return Ok(1.0);
    }
    let sets = truth.label_sets();
    let kp = pred.iter().max().map_or(0, |&m| m + 1);
    let kt = sets.iter().flatten().max().map_or(0, |&m| m + 1);
    let mut counts = vec![vec![0usize; kt]; kp];
    for (&p, set) in pred.iter().zip(&sets) {
        for &l in set {
            counts[p][l] += 1;
        }
    }
    let hits: usize = counts.iter().map(|row| row.iter().copied().max().unwrap_or(0)).sum();
    Ok(hits as f64 / pred.len() as f64)
}

/// Maximum over all `K!` relabelings, for checking [`map_score`] on small
/// `K`.
pub fn map_score_brute_force(pred: &[usize], truth: &[usize], k: usize) -> f64 {
    let mut perm: Vec<usize> = (0..k).collect();
    let mut best = 0;
    loop {
        let hits = pred.iter().zip(truth).filter(|(&p, &t)| perm[p] == t).count();
        best = best.max(hits);
        if !next_permutation(&mut perm) {
            break;
        }
    }
    if pred.is_empty() {
        1.0
    } else {
        best as f64 / pred.len() as f64
    }
}

fn next_permutation(p: &mut [usize]) -> bool {
    let Some(i) = (1..p.len()).rev().find(|&i| p[i - 1] < p[i]) else {
        return false;
    };
    let j = (i..p.len()).rev().find(|&j| p[j] > p[i - 1]).expect("successor exists");
    p.swap(i - 1, j);
    p[i..].reverse();
    true
}
