//! One outer iteration should cost about `|X| |Y| max(|X̄|, |Ȳ|)`. Doubling
//! both dimensions of a dense input should therefore roughly quadruple the
//! time per iteration; the bound here is loose to tolerate timing noise.

use std::time::Instant;

use cocluster::{gen_planted, sgitcc, OptimizerConfig, PlantedSpec};

fn seconds_per_sweep(n: usize, m: usize) -> f64 {
    let data = gen_planted(&PlantedSpec::even(n, m, 4, 4, 0.5, 1)).unwrap();
    let cfg = OptimizerConfig::new(0.5, 4, 4).with_tol(0.0).with_max_iter(3);
    // warm-up
    sgitcc(&data.dist, &cfg).unwrap();
    let mut best = f64::INFINITY;
    for _ in 0..3 {
        let start = Instant::now();
        let (_, trace) = sgitcc(&data.dist, &cfg).unwrap();
        best = best.min(start.elapsed().as_secs_f64() / trace.n_sweeps().max(1) as f64);
    }
    best
}

#[test]
fn sweep_time_grows_with_cell_count() {
    let small = seconds_per_sweep(100, 80);
    let large = seconds_per_sweep(200, 160);
    let ratio = large / small;
    // ideal ratio is 4; quadratic-per-move evaluation would give about 8
    assert!(ratio < 7.0, "per-sweep time ratio {ratio:.2} ({small:.4}s -> {large:.4}s)");
}
