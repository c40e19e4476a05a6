use std::fs;
use std::path::Path;
use std::time::{Instant, SystemTime, UNIX_EPOCH};

use rand::{Rng, SeedableRng};
use rayon::prelude::*;

use cocluster::eval::map_prime;
use cocluster::io::{self, content_hash, RunRecord, SweepRow, TraceSummary};
use cocluster::markov::markov_identity_residual;
use cocluster::{
    best_of_restarts, connected_components, cost_beta, fixture, fixtures as all_fixtures, gen_circulant, gen_planted,
    map_score, normalize, CirculantSpec, CoClustering, Error, GroundTruth, Init, JointDistribution, OptimizerConfig,
    PlantedSpec, RawMatrix, Side,
};

use crate::input::{self, extension, read_label_sets, read_labels, write_labels, Dataset};
use crate::{
    CoclusterArgs, EvalArgs, Failure, FixturesArgs, InitArg, MarkovCheckArgs, OptArgs, SweepArgs, SynthArgs,
    SynthKind,
};

const RESIDUAL_LIMIT: f64 = 1e-9;

fn config(opt: &OptArgs) -> Result<OptimizerConfig, Failure> {
    let init = match opt.init {
        InitArg::Random => Init::Random,
        InitArg::Sib => Init::OneSidedSib { restarts: opt.init_restarts },
    };
    let cfg = OptimizerConfig::new(opt.beta, opt.row_clusters, opt.col_clusters)
        .with_max_iter(opt.max_iter)
        .with_tol(opt.tol)
        .with_anneal_step(opt.anneal_step)
        .with_restarts(opt.restarts)
        .with_seed(opt.seed)
        .with_init(init);
    cfg.validate_params()?;
    if opt.restarts == 0 {
        return Err(Failure::config("--restarts must be at least 1"));
    }
    Ok(cfg)
}

fn unix_ms() -> u128 {
    SystemTime::now().duration_since(UNIX_EPOCH).map_or(0, |d| d.as_millis())
}

fn join(v: &[usize]) -> String {
    v.iter().map(usize::to_string).collect::<Vec<_>>().join(",")
}

fn score(pred: &CoClustering, side: Side, truth: Option<&Vec<usize>>) -> Result<Option<f64>, Failure> {
    let Some(t) = truth else { return Ok(None) };
    let gt = GroundTruth::hard(t.clone())?;
    match map_score(pred.assignment(side), pred.n_clusters(side), &gt) {
        Ok(s) => Ok(Some(s)),
        Err(Error::ClusterCountMismatch { .. }) => Ok(None),
        Err(e) => Err(e.into()),
    }
}

fn truths(ds: &mut Dataset, row: &Option<std::path::PathBuf>, col: &Option<std::path::PathBuf>) -> Result<(), Failure> {
    if let Some(p) = row {
        ds.row_truth = Some(read_labels(p)?);
    }
    if let Some(p) = col {
        ds.col_truth = Some(read_labels(p)?);
    }
    Ok(())
}

fn fmt_opt(v: Option<f64>) -> String {
    v.map_or("NA".into(), |x| format!("{x:.6}"))
}

pub fn cocluster(args: CoclusterArgs) -> Result<(), Failure> {
    let cfg = config(&args.opt)?;
    let mut ds = input::load(&args.input)?;
    truths(&mut ds, &args.row_truth, &args.col_truth)?;
    let dist = normalize(&ds.raw)?;
    cfg.validate(&dist)?;

    let started = unix_ms();
    let (cc, trace) = best_of_restarts(&dist, &cfg)?;
    let cost = cost_beta(&dist, &cc, cfg.beta)?;
    let map_row = score(&cc, Side::Row, ds.row_truth.as_ref())?;
    let map_col = score(&cc, Side::Col, ds.col_truth.as_ref())?;

    println!("dataset={}", ds.name);
    println!("beta={}", cfg.beta);
    println!("final_cost={:.12}", cost.total);
    println!("loss_x_of_ybar={:.12}", cost.loss_x_of_ybar);
    println!("loss_y_of_xbar={:.12}", cost.loss_y_of_xbar);
    println!("loss_xbar_of_ybar={:.12}", cost.loss_xbar_of_ybar);
    println!("loss_ybar_of_xbar={:.12}", cost.loss_ybar_of_xbar);
    println!("nonempty_row_clusters={}", cc.n_nonempty(Side::Row));
    println!("nonempty_col_clusters={}", cc.n_nonempty(Side::Col));
    println!("best_seed={}", trace.seed);
    println!("map_row={}", fmt_opt(map_row));
    println!("map_col={}", fmt_opt(map_col));
    println!("phi={}", join(cc.phi()));
    println!("psi={}", join(cc.psi()));

    if let Some(dir) = &args.out {
        fs::create_dir_all(dir).map_err(|e| Error::Io { path: dir.clone(), source: e })?;
        let record = RunRecord {
            config: cfg.clone(),
            dataset: ds.name.clone(),
            content_hash: content_hash(&ds.raw),
            cost,
            phi: cc.phi().to_vec(),
            psi: cc.psi().to_vec(),
            map_row,
            map_col,
            trace: TraceSummary::from(&trace),
            started_unix_ms: started,
            finished_unix_ms: unix_ms(),
        };
        let path = dir.join(format!("run_{}_beta{}_seed{}.json", ds.name, cfg.beta, cfg.seed));
        io::write_run(&path, &record)?;
        println!("record={}", path.display());
    }
    Ok(())
}

fn beta_grid(args: &SweepArgs) -> Result<Vec<f64>, Failure> {
    let grid = match &args.betas {
        Some(b) => b.clone(),
        None => {
            if !(args.beta_step > 0.0 && args.beta_step <= 1.0) {
                return Err(Failure::config(format!("--beta-step {} outside (0, 1]", args.beta_step)));
            }
            let n = (1.0 / args.beta_step + 1e-9).floor() as usize;
            let mut g: Vec<f64> = (0..=n).map(|i| ((i as f64 * args.beta_step) * 1e12).round() / 1e12).collect();
            if *g.last().unwrap() < 1.0 {
                g.push(1.0);
            }
            g
        }
    };
    if let Some(b) = grid.iter().find(|b| !(0.0..=1.0).contains(*b)) {
        return Err(Error::BetaOutOfRange(*b).into());
    }
    if grid.is_empty() {
        return Err(Failure::config("empty beta grid"));
    }
    Ok(grid)
}

pub fn sweep(args: SweepArgs) -> Result<(), Failure> {
    let base = config(&args.opt)?;
    let grid = beta_grid(&args)?;
    if args.seeds == 0 {
        return Err(Failure::config("--seeds must be at least 1"));
    }
    let (kr, kc) = (args.opt.row_clusters, args.opt.col_clusters);

    // datasets that do not change with the seed are loaded once
    let fixed: Option<(Dataset, JointDistribution)> = if args.planted_eps.is_some() {
        None
    } else {
        let mut ds = match args.circulant {
            Some(k) => {
                let data = gen_circulant(&CirculantSpec { k, smooth: args.input.smooth })?;
                Dataset {
                    name: format!("circulant_k{k}"),
                    raw: data.raw,
                    row_truth: Some(data.row_truth),
                    col_truth: Some(data.col_truth),
                }
            }
            None => input::load(&args.input)?,
        };
        truths(&mut ds, &args.row_truth, &args.col_truth)?;
        let dist = normalize(&ds.raw)?;
        base.validate(&dist)?;
        Some((ds, dist))
    };
    if let Some(eps) = args.planted_eps {
        let spec = PlantedSpec::even(args.planted_rows, args.planted_cols, kr, kc, eps, 0);
        gen_planted(&spec)?;
    }

    let jobs: Vec<(f64, u64)> =
        grid.iter().flat_map(|&b| (0..args.seeds).map(move |s| (b, base.seed + s))).collect();
    let rows: Vec<Result<SweepRow, Failure>> = jobs
        .par_iter()
        .map(|&(beta, seed)| {
            let start = Instant::now();
            let generated;
            let (dist, rt, ct) = match (&fixed, args.planted_eps) {
                (Some((ds, dist)), _) => (dist, ds.row_truth.as_ref(), ds.col_truth.as_ref()),
                (None, Some(eps)) => {
                    let spec = PlantedSpec::even(args.planted_rows, args.planted_cols, kr, kc, eps, seed);
                    generated = gen_planted(&spec)?;
                    (&generated.dist, Some(&generated.row_truth), Some(&generated.col_truth))
                }
                (None, None) => unreachable!("a dataset is always selected"),
            };
            let mut cfg = base.clone();
            cfg.beta = beta;
            cfg.seed = seed;
            let (cc, trace) = best_of_restarts(dist, &cfg)?;
            Ok(SweepRow {
                beta,
                seed,
                final_cost_bits: trace.final_cost,
                map_row: score(&cc, Side::Row, rt)?,
                map_col: score(&cc, Side::Col, ct)?,
                n_nonempty_row_clusters: cc.n_nonempty(Side::Row),
                n_nonempty_col_clusters: cc.n_nonempty(Side::Col),
                wall_ms: start.elapsed().as_secs_f64() * 1e3,
            })
        })
        .collect();
    let rows = rows.into_iter().collect::<Result<Vec<_>, _>>()?;
    io::write_sweep(&args.out, &rows)?;

    println!("rows={}", rows.len());
    for &beta in &grid {
        let sel: Vec<&SweepRow> = rows.iter().filter(|r| r.beta == beta).collect();
        let mean = |f: &dyn Fn(&SweepRow) -> Option<f64>| -> String {
            let v: Vec<f64> = sel.iter().filter_map(|r| f(r)).collect();
            if v.is_empty() {
                "NA".into()
            } else {
                format!("{:.6}", v.iter().sum::<f64>() / v.len() as f64)
            }
        };
        println!(
            "beta={beta} mean_final_cost={} mean_map_row={} mean_map_col={}",
            mean(&|r| Some(r.final_cost_bits)),
            mean(&|r| r.map_row),
            mean(&|r| r.map_col)
        );
    }
    println!("csv={}", args.out.display());
    Ok(())
}

fn export(dir: &Path, stem: &str, raw: &RawMatrix, format: crate::FormatArg) -> Result<std::path::PathBuf, Failure> {
    fs::create_dir_all(dir).map_err(|e| Error::Io { path: dir.to_path_buf(), source: e })?;
    let path = dir.join(format!("{stem}.{}", extension(format)));
    let f = input::format_of(Some(format), None, &path)?;
    io::save(&path, raw, f)?;
    Ok(path)
}

pub fn synth(args: SynthArgs) -> Result<(), Failure> {
    let (name, data) = match args.kind {
        SynthKind::Planted => {
            let spec =
                PlantedSpec::even(args.rows, args.cols, args.row_clusters, args.col_clusters, args.eps, args.seed);
            (format!("planted_eps{}_seed{}", args.eps, args.seed), gen_planted(&spec)?)
        }
        SynthKind::Circulant => {
            (format!("circulant_k{}", args.k), gen_circulant(&CirculantSpec { k: args.k, smooth: args.smooth })?)
        }
    };
    let path = export(&args.out, &name, &data.raw, args.format)?;
    let rt = args.out.join(format!("{name}_row_truth.txt"));
    let ct = args.out.join(format!("{name}_col_truth.txt"));
    write_labels(&rt, &data.row_truth)?;
    write_labels(&ct, &data.col_truth)?;
    println!("matrix={}", path.display());
    println!("row_truth={}", rt.display());
    println!("col_truth={}", ct.display());
    println!("shape={}x{}", data.raw.n_rows(), data.raw.n_cols());
    println!("mutual_information={:.12}", data.dist.mutual_information()?);
    Ok(())
}

pub fn fixtures(args: FixturesArgs) -> Result<(), Failure> {
    let Some(name) = &args.name else {
        for f in all_fixtures() {
            let names: Vec<&str> = f.clusterings.iter().map(|(n, _)| *n).collect();
            println!("name={} shape={}x{} clusterings={}", f.name, f.raw.n_rows(), f.raw.n_cols(), names.join(","));
        }
        return Ok(());
    };
    let f = fixture(name)?;
    match &args.out {
        None => {
            for row in f.raw.to_dense() {
                println!("{}", row.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(","));
            }
        }
        Some(dir) => {
            let path = export(dir, f.name, &f.raw, args.format)?;
            println!("matrix={}", path.display());
            for (cname, cc) in &f.clusterings {
                let rp = dir.join(format!("{}_{cname}_rows.txt", f.name));
                let cp = dir.join(format!("{}_{cname}_cols.txt", f.name));
                write_labels(&rp, cc.phi())?;
                write_labels(&cp, cc.psi())?;
                println!("clustering={cname} rows={} cols={}", rp.display(), cp.display());
            }
        }
    }
    Ok(())
}

pub fn eval(args: EvalArgs) -> Result<(), Failure> {
    let pred = read_labels(&args.pred)?;
    let sets = read_label_sets(&args.truth)?;
    if sets.iter().all(|s| s.len() == 1) {
        let truth = GroundTruth::hard(sets.iter().map(|s| s[0]).collect())?;
        let GroundTruth::Hard { n_clusters, .. } = &truth else { unreachable!() };
        let k = args.k.unwrap_or(*n_clusters);
        println!("map={:.12}", map_score(&pred, k, &truth)?);
        println!("map_prime={:.12}", map_prime(&pred, &truth)?);
    } else {
        let truth = GroundTruth::multi(sets)?;
        println!("map_prime={:.12}", map_prime(&pred, &truth)?);
    }
    Ok(())
}

pub fn markov_check(args: MarkovCheckArgs) -> Result<(), Failure> {
    let raw = match args.circulant {
        Some(k) => gen_circulant(&CirculantSpec { k, smooth: args.input.smooth })?.raw,
        None => input::load(&args.input)?.raw,
    };
    let dist = normalize(&raw)?;
    let components = connected_components(&raw)?;
    if !components.is_irreducible() {
        return Err(Error::Reducible(components.n_components).into());
    }
    let (n, m) = (dist.n_rows(), dist.n_cols());
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(args.seed);
    let mut clusterings = vec![CoClustering::identity(n, m), CoClustering::constant(n, m)];
    for _ in 0..args.samples {
        let kr = rng.gen_range(1..=n);
        let kc = rng.gen_range(1..=m);
        let phi = (0..n).map(|_| rng.gen_range(0..kr)).collect();
        let psi = (0..m).map(|_| rng.gen_range(0..kc)).collect();
        clusterings.push(CoClustering::new(phi, psi, kr, kc)?);
    }
    let betas = [0.0, 0.25, 0.5, 0.75, 1.0];
    let mut worst = 0.0f64;
    for cc in &clusterings {
        for &beta in &betas {
            worst = worst.max(markov_identity_residual(&dist, cc, beta)?);
        }
    }
    println!("checks={}", clusterings.len() * betas.len());
    println!("max_residual={worst:.3e}");
    if worst > RESIDUAL_LIMIT {
        return Err(Failure { code: 4, message: format!("residual {worst:.3e} exceeds {RESIDUAL_LIMIT:e}") });
    }
    Ok(())
}
