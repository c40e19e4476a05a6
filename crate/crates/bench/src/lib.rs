//! Shared inputs for the benchmarks.

use cocluster::{gen_planted, CoClustering, JointDistribution, PlantedSpec};

/// A noisy planted instance of the given shape with 8x6 blocks.
pub fn instance(n_rows: usize, n_cols: usize) -> JointDistribution {
    gen_planted(&PlantedSpec::even(n_rows, n_cols, 8, 6, 0.5, 7)).expect("valid spec").dist
}

/// Round-robin assignment, deterministic and with every cluster used.
pub fn round_robin(n_rows: usize, n_cols: usize, kr: usize, kc: usize) -> CoClustering {
    CoClustering::new((0..n_rows).map(|i| i % kr).collect(), (0..n_cols).map(|j| j % kc).collect(), kr, kc)
        .expect("ids in range")
}
