use serde::{Deserialize, Serialize};

use crate::aggregate::CoClustering;
use crate::distribution::JointDistribution;
use crate::error::{Error, Result};

/// How the first sequential stage is initialized.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Init {
    /// Seeded random assignment with every cluster id used.
    Random,
    /// A caller-provided starting point.
    Given(CoClustering),
    /// Independent one-sided sequential IB on rows and columns, best of
    /// `restarts` random starts per side.
    OneSidedSib { restarts: usize },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OptimizerConfig {
    pub beta: f64,
    pub n_row_clusters: usize,
    pub n_col_clusters: usize,
    pub max_iter: usize,
    /// Convergence threshold on the per-iteration cost decrease, in bits.
    pub tol: f64,
    /// Annealing step `Δ`.
    pub anneal_step: f64,
    pub restarts: usize,
    pub seed: u64,
    pub init: Init,
}

impl OptimizerConfig {
    pub const DEFAULT_TOL: f64 = 1e-3;
    pub const DEFAULT_MAX_ITER: usize = 20;
    pub const DEFAULT_ANNEAL_STEP: f64 = 0.1;
    /// Annealing step used for text-like contingency tables.
    pub const TEXT_ANNEAL_STEP: f64 = 0.05;

    pub fn new(beta: f64, n_row_clusters: usize, n_col_clusters: usize) -> Self {
        OptimizerConfig {
            beta,
            n_row_clusters,
            n_col_clusters,
            max_iter: Self::DEFAULT_MAX_ITER,
            tol: Self::DEFAULT_TOL,
            anneal_step: Self::DEFAULT_ANNEAL_STEP,
            restarts: 1,
            seed: 0,
            init: Init::Random,
        }
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn with_tol(mut self, tol: f64) -> Self {
        self.tol = tol;
        self
    }

    pub fn with_max_iter(mut self, max_iter: usize) -> Self {
        self.max_iter = max_iter;
        self
    }

    pub fn with_anneal_step(mut self, step: f64) -> Self {
        self.anneal_step = step;
        self
    }

    pub fn with_restarts(mut self, restarts: usize) -> Self {
        self.restarts = restarts;
        self
    }

    pub fn with_init(mut self, init: Init) -> Self {
        self.init = init;
        self
    }

    /// Checks parameter ranges that do not depend on the data.
    pub fn validate_params(&self) -> Result<()> {
        if !(0.0..=1.0).contains(&self.beta) {
            return Err(Error::BetaOutOfRange(self.beta));
        }
        if !(self.anneal_step > 0.0 && self.anneal_step <= 1.0) {
            return Err(Error::InvalidConfig(format!("annealing step {} outside (0, 1]", self.anneal_step)));
        }
        if self.tol.is_nan() || self.tol < 0.0 {
            return Err(Error::InvalidConfig(format!("tolerance {} is negative", self.tol)));
        }
        if self.n_row_clusters == 0 || self.n_col_clusters == 0 {
            return Err(Error::InvalidConfig("cluster counts must be at least 1".into()));
        }
        if let Init::OneSidedSib { restarts: 0 } = self.init {
            return Err(Error::InvalidConfig("one-sided initialization needs at least 1 restart".into()));
        }
        Ok(())
    }

    pub fn validate(&self, dist: &JointDistribution) -> Result<()> {
        self.validate_params()?;
        if self.n_row_clusters > dist.n_rows() {
            return Err(Error::TooManyClusters { n_clusters: self.n_row_clusters, n_elements: dist.n_rows() });
        }
        if self.n_col_clusters > dist.n_cols() {
            return Err(Error::TooManyClusters { n_clusters: self.n_col_clusters, n_elements: dist.n_cols() });
        }
        if let Init::Given(cc) = &self.init {
            cc.check_dimensions(dist)?;
            if cc.n_row_clusters() != self.n_row_clusters || cc.n_col_clusters() != self.n_col_clusters {
                return Err(Error::InvalidConfig(format!(
                    "initial clustering has {}x{} clusters, configuration asks for {}x{}",
                    cc.n_row_clusters(),
                    cc.n_col_clusters(),
                    self.n_row_clusters,
                    self.n_col_clusters
                )));
            }
        }
        Ok(())
    }
}
