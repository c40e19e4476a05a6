use super::*;
use crate::distribution::normalize;
use crate::matrix::RawMatrix;

fn dist(rows: &[&[f64]]) -> JointDistribution {
    normalize(&RawMatrix::from_dense(&rows.iter().map(|r| r.to_vec()).collect::<Vec<_>>()).unwrap()).unwrap()
}

fn stuck() -> JointDistribution {
    dist(&[&[0.25, 0.0, 0.0, 0.0], &[0.0, 0.25, 0.0, 0.0], &[0.0, 0.0, 0.25, 0.25]])
}

fn thin() -> CoClustering {
    CoClustering::new(vec![0, 1, 1], vec![0, 1, 1, 1], 2, 2).unwrap()
}

fn diagonal(n: usize) -> JointDistribution {
    let rows: Vec<Vec<f64>> = (0..n).map(|i| (0..n).map(|j| if i == j { 1.0 } else { 0.0 }).collect()).collect();
    normalize(&RawMatrix::from_dense(&rows).unwrap()).unwrap()
}

fn noisy_blocks() -> JointDistribution {
    let mut rows = vec![];
    for i in 0..12 {
        rows.push((0..9).map(|j| if i / 4 == j / 3 { 3.0 + ((i * 7 + j) % 5) as f64 } else { 1.0 }).collect());
    }
    normalize(&RawMatrix::from_dense(&rows).unwrap()).unwrap()
}

#[test]
fn schedule_reaches_beta_exactly() {
    assert_eq!(anneal_schedule(0.7, 0.1), vec![1.0, 0.9, 0.8, 0.7]);
    assert_eq!(anneal_schedule(1.0, 0.1), vec![1.0]);
    assert_eq!(anneal_schedule(0.0, 0.25), vec![1.0, 0.75, 0.5, 0.25, 0.0]);
    assert_eq!(anneal_schedule(0.45, 0.2), vec![1.0, 0.8, 0.6, 0.45]);
    let s = anneal_schedule(0.0, 0.1);
    assert_eq!(s.len(), 11);
    assert_eq!(*s.last().unwrap(), 0.0);
}

#[test]
fn random_clustering_uses_every_id() {
    for seed in 0..20 {
        let a = random_clustering(seed, 10, 4).unwrap();
        let mut used = a.clone();
        used.sort_unstable();
        used.dedup();
        assert_eq!(used, vec![0, 1, 2, 3]);
    }
    assert_eq!(random_clustering(3, 5, 5).unwrap().len(), 5);
    assert_eq!(random_clustering(9, 7, 2).unwrap(), random_clustering(9, 7, 2).unwrap());
    assert!(matches!(random_clustering(0, 3, 4), Err(Error::TooManyClusters { .. })));
    assert!(matches!(random_clustering(0, 3, 0), Err(Error::InvalidConfig(_))));
}

#[test]
fn infinite_tolerance_runs_no_sweep() {
    let d = stuck();
    let cfg = OptimizerConfig::new(0.5, 2, 2).with_init(Init::Given(thin())).with_tol(f64::INFINITY);
    let (cc, trace) = sgitcc(&d, &cfg).unwrap();
    assert_eq!(cc, thin());
    assert_eq!(trace.n_sweeps(), 0);
    assert_eq!(trace.moves_applied, 0);
}

#[test]
fn large_tolerance_runs_one_sweep() {
    let d = noisy_blocks();
    let mi = d.mutual_information().unwrap();
    let cfg = OptimizerConfig::new(0.5, 3, 3).with_seed(4).with_tol(mi);
    let (_, trace) = sgitcc(&d, &cfg).unwrap();
    assert_eq!(trace.n_sweeps(), 1);
}

#[test]
fn stuck_at_half() {
    let cfg = OptimizerConfig::new(0.5, 2, 2).with_init(Init::Given(thin())).with_tol(0.0);
    let (cc, _) = sgitcc(&stuck(), &cfg).unwrap();
    assert_eq!(cc, thin());
}

#[test]
fn escapes_at_one() {
    let cfg = OptimizerConfig::new(1.0, 2, 2).with_init(Init::Given(thin())).with_tol(0.0);
    let (cc, _) = sgitcc(&stuck(), &cfg).unwrap();
    assert_eq!(cc.phi(), &[0, 0, 1]);
    assert_eq!(cc.psi(), &[0, 0, 1, 1]);
}

#[test]
fn stage_costs_never_increase() {
    let d = noisy_blocks();
    for beta in [0.0, 0.3, 0.5, 1.0] {
        let cfg = OptimizerConfig::new(beta, 3, 3).with_seed(11).with_tol(0.0);
        let (cc, trace) = ann_itcc(&d, &cfg).unwrap();
        for stage in &trace.stages {
            let mut prev = stage.initial_cost;
            for &c in &stage.sweep_costs {
                assert!(c <= prev + 1e-12, "beta {beta}: {c} > {prev}");
                prev = c;
            }
        }
        let full = cost_beta(&d, &cc, beta).unwrap().total;
        assert!((full - trace.final_cost).abs() < 1e-12);
        let last = trace.stages.last().unwrap();
        assert!((last.final_cost - full).abs() < 1e-9);
    }
}

#[test]
fn annealing_visits_schedule() {
    let d = noisy_blocks();
    let cfg = OptimizerConfig::new(0.7, 3, 3).with_seed(2).with_tol(0.0);
    let (_, trace) = ann_itcc(&d, &cfg).unwrap();
    let alphas: Vec<f64> = trace.stages.iter().map(|s| s.alpha).collect();
    assert_eq!(alphas, vec![1.0, 0.9, 0.8, 0.7]);
}

#[test]
fn runs_are_deterministic() {
    let d = noisy_blocks();
    let cfg = OptimizerConfig::new(0.4, 3, 3).with_seed(5).with_restarts(4);
    let (a, ta) = best_of_restarts(&d, &cfg).unwrap();
    let (b, tb) = best_of_restarts(&d, &cfg).unwrap();
    assert_eq!(a, b);
    assert_eq!(ta.seed, tb.seed);
    assert_eq!(ta.final_cost, tb.final_cost);
}

#[test]
fn restarts_pick_the_lowest_cost() {
    let d = noisy_blocks();
    let cfg = OptimizerConfig::new(0.5, 3, 3).with_seed(20).with_restarts(5);
    let (_, best) = best_of_restarts(&d, &cfg).unwrap();
    for r in 0..5 {
        let (_, t) = ann_itcc(&d, &cfg.clone().with_seed(20 + r)).unwrap();
        assert!(best.final_cost <= t.final_cost);
    }
}

#[test]
fn planted_blocks_are_recovered() {
    let d = noisy_blocks();
    let cfg = OptimizerConfig::new(0.5, 3, 3).with_restarts(5).with_tol(0.0);
    let (cc, _) = best_of_restarts(&d, &cfg).unwrap();
    for i in 0..12 {
        assert_eq!(cc.phi()[i], cc.phi()[(i / 4) * 4]);
    }
    for j in 0..9 {
        assert_eq!(cc.psi()[j], cc.psi()[(j / 3) * 3]);
    }
    assert_eq!(cc.n_nonempty(Side::Row), 3);
    assert_eq!(cc.n_nonempty(Side::Col), 3);
}

#[test]
fn sib_on_a_diagonal() {
    let d = diagonal(4);
    let r = one_sided_sib(&d, Side::Row, 2, 3, 0).unwrap();
    assert!((r.loss - 1.0).abs() < 1e-12);
    let mut sizes = [0; 2];
    for &a in &r.assignment {
        sizes[a] += 1;
    }
    assert_eq!(sizes, [2, 2]);
}

#[test]
fn sib_init_replaces_first_stage() {
    let d = noisy_blocks();
    let cfg = OptimizerConfig::new(0.8, 3, 3).with_init(Init::OneSidedSib { restarts: 3 });
    let (_, trace) = ann_itcc(&d, &cfg).unwrap();
    assert_eq!(trace.stages[0].alpha, 1.0);
    assert!(trace.stages[0].sweep_costs.is_empty());
    assert_eq!(trace.stages.len(), 3);
}

#[test]
fn config_rejections() {
    let d = stuck();
    let bad = |cfg: OptimizerConfig| sgitcc(&d, &cfg).unwrap_err();
    assert!(matches!(bad(OptimizerConfig::new(1.2, 2, 2)), Error::BetaOutOfRange(_)));
    assert!(matches!(bad(OptimizerConfig::new(0.5, 4, 2)), Error::TooManyClusters { .. }));
    assert!(matches!(bad(OptimizerConfig::new(0.5, 0, 2)), Error::InvalidConfig(_)));
    assert!(matches!(bad(OptimizerConfig::new(0.5, 2, 2).with_anneal_step(0.0)), Error::InvalidConfig(_)));
    assert!(matches!(bad(OptimizerConfig::new(0.5, 2, 2).with_tol(-1.0)), Error::InvalidConfig(_)));
    assert!(matches!(
        best_of_restarts(&d, &OptimizerConfig::new(0.5, 2, 2).with_restarts(0)),
        Err(Error::InvalidConfig(_))
    ));
    let given = CoClustering::new(vec![0, 1, 1], vec![0, 1, 1, 1], 2, 3).unwrap();
    assert!(matches!(bad(OptimizerConfig::new(0.5, 2, 2).with_init(Init::Given(given))), Error::InvalidConfig(_)));
}
