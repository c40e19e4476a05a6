//! Synthetic co-cluster generators and small hand-built example matrices.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::aggregate::CoClustering;
use crate::distribution::{normalize, JointDistribution};
use crate::error::{Error, Result};
use crate::matrix::RawMatrix;

/// Total uniform mass mixed in by [`RawMatrix::smoothed`] when a generator
/// is asked for an irreducible matrix.
pub const SMOOTHING_MASS: f64 = 1e-6;

/// A generated matrix with its planted partition.
#[derive(Debug, Clone)]
pub struct SyntheticData {
    pub raw: RawMatrix,
    pub dist: JointDistribution,
    pub row_truth: Vec<usize>,
    pub col_truth: Vec<usize>,
}

impl SyntheticData {
    pub fn truth(&self) -> CoClustering {
        CoClustering::from_assignments(self.row_truth.clone(), self.col_truth.clone())
    }
}

/// Planted co-clusters mixed with random noise.
///
/// Boundaries are exclusive end offsets of consecutive clusters, so
/// `[20, 50, 80]` describes clusters `0..20`, `20..50` and `50..80`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PlantedSpec {
    pub n_rows: usize,
    pub n_cols: usize,
    pub row_boundaries: Vec<usize>,
    pub col_boundaries: Vec<usize>,
    pub noise_eps: f64,
    pub seed: u64,
}

impl PlantedSpec {
    /// Clusters of (nearly) equal size; the first `n % k` clusters get one
    /// extra element.
    pub fn even(n_rows: usize, n_cols: usize, row_clusters: usize, col_clusters: usize, noise_eps: f64, seed: u64) -> Self {
        PlantedSpec {
            n_rows,
            n_cols,
            row_boundaries: even_boundaries(n_rows, row_clusters),
            col_boundaries: even_boundaries(n_cols, col_clusters),
            noise_eps,
            seed,
        }
    }

    pub fn row_clusters(&self) -> usize {
        self.row_boundaries.len()
    }

    pub fn col_clusters(&self) -> usize {
        self.col_boundaries.len()
    }

    fn validate(&self) -> Result<()> {
        if !(0.0..=1.0).contains(&self.noise_eps) {
            return Err(Error::InvalidConfig(format!("noise weight {} outside [0, 1]", self.noise_eps)));
        }
        check_boundaries(&self.row_boundaries, self.n_rows, "row")?;
        check_boundaries(&self.col_boundaries, self.n_cols, "column")
    }
}

fn even_boundaries(n: usize, k: usize) -> Vec<usize> {
    let mut end = 0;
    (0..k)
        .map(|i| {
            end += n / k + usize::from(i < n % k);
            end
        })
        .collect()
}

fn check_boundaries(b: &[usize], n: usize, what: &str) -> Result<()> {
    if b.is_empty() {
        return Err(Error::InvalidBoundaries(format!("no {what} clusters")));
    }
    let mut start = 0;
    for &end in b {
        if end <= start {
            return Err(Error::InvalidBoundaries(format!("{what} boundaries {b:?} are not strictly increasing from 1")));
        }
        start = end;
    }
    if start != n {
        return Err(Error::InvalidBoundaries(format!("{what} boundaries end at {start}, expected {n}")));
    }
    Ok(())
}

fn labels_from_boundaries(b: &[usize]) -> Vec<usize> {
    let mut labels = Vec::with_capacity(*b.last().unwrap_or(&0));
    let mut start = 0;
    for (id, &end) in b.iter().enumerate() {
        labels.extend(std::iter::repeat(id).take(end - start));
        start = end;
    }
    labels
}

/// Relative mass of planted block `(a, b)`.
///
/// Equal masses with uniform blocks would make the planted table a product
/// distribution with no dependence between rows and columns, so each row
/// cluster gets a distinct profile: a strong diagonal cell plus a weaker
/// cell that shifts with every wrap-around of the diagonal.
pub fn planted_block_weight(a: usize, b: usize, col_clusters: usize) -> f64 {
    let level = a / col_clusters;
    let base = a % col_clusters;
    let mut w = 1.0;
    if b == base {
        w += 4.0;
    }
    if b == (base + level) % col_clusters {
        w += 2.0 * level as f64;
    }
    w
}

/// `P = (1 - ε) T + ε N`: `T` is constant within every planted block and
/// `N` has i.i.d. uniform entries, normalized.
pub fn gen_planted(spec: &PlantedSpec) -> Result<SyntheticData> {
    spec.validate()?;
    let row_truth = labels_from_boundaries(&spec.row_boundaries);
    let col_truth = labels_from_boundaries(&spec.col_boundaries);
    let sizes = |b: &[usize]| -> Vec<f64> {
        let mut start = 0;
        b.iter()
            .map(|&end| {
                let s = (end - start) as f64;
                start = end;
                s
            })
            .collect()
    };
    let (row_sizes, col_sizes) = (sizes(&spec.row_boundaries), sizes(&spec.col_boundaries));
    let kc = spec.col_clusters();
    let total_weight: f64 = (0..spec.row_clusters())
        .flat_map(|a| (0..kc).map(move |b| planted_block_weight(a, b, kc)))
        .sum();

    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let noise: Vec<f64> = (0..spec.n_rows * spec.n_cols).map(|_| rng.gen::<f64>()).collect();
    let noise_total: f64 = noise.iter().sum();

    let eps = spec.noise_eps;
    let mut triplets = Vec::with_capacity(noise.len());
    for r in 0..spec.n_rows {
        for c in 0..spec.n_cols {
            let (a, b) = (row_truth[r], col_truth[c]);
            let t = planted_block_weight(a, b, kc) / total_weight / (row_sizes[a] * col_sizes[b]);
            let n = noise[r * spec.n_cols + c] / noise_total;
            let v = if eps == 0.0 {
                t
            } else if eps == 1.0 {
                n
            } else {
                (1.0 - eps) * t + eps * n
            };
            triplets.push((r, c, v));
        }
    }
    let raw = RawMatrix::from_triplets(spec.n_rows, spec.n_cols, triplets)?;
    let dist = normalize(&raw)?;
    Ok(SyntheticData { raw, dist, row_truth, col_truth })
}

/// Block-diagonal matrix of three 30×30 circulant blocks with coupling
/// width `k`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CirculantSpec {
    pub k: usize,
    /// Mix in [`SMOOTHING_MASS`] of uniform mass so that the bipartite
    /// random walk is irreducible.
    pub smooth: bool,
}

pub const CIRCULANT_BLOCK: usize = 30;
pub const CIRCULANT_BLOCKS: usize = 3;

impl CirculantSpec {
    pub fn new(k: usize) -> Self {
        CirculantSpec { k, smooth: false }
    }
}

/// Row `i` of each block holds `k` entries of `1 / (90 k)` in the circulant
/// positions `(30 - k + i) mod 30, ..., (29 + i) mod 30`.
pub fn gen_circulant(spec: &CirculantSpec) -> Result<SyntheticData> {
    let k = spec.k;
    if !(1..=CIRCULANT_BLOCK).contains(&k) {
        return Err(Error::KOutOfRange(k));
    }
    let n = CIRCULANT_BLOCK * CIRCULANT_BLOCKS;
    let value = 1.0 / (k as f64 * n as f64);
    let mut triplets = Vec::with_capacity(n * k);
    for block in 0..CIRCULANT_BLOCKS {
        let offset = block * CIRCULANT_BLOCK;
        for i in 0..CIRCULANT_BLOCK {
            for j in CIRCULANT_BLOCK - k..CIRCULANT_BLOCK {
                triplets.push((offset + i, offset + (j + i) % CIRCULANT_BLOCK, value));
            }
        }
    }
    let mut raw = RawMatrix::from_triplets(n, n, triplets)?;
    if spec.smooth {
        raw = raw.smoothed(SMOOTHING_MASS)?;
    }
    let dist = normalize(&raw)?;
    let truth: Vec<usize> = (0..n).map(|i| i / CIRCULANT_BLOCK).collect();
    Ok(SyntheticData { raw, dist, row_truth: truth.clone(), col_truth: truth })
}

/// A hand-built example matrix with the clusterings discussed alongside it.
#[derive(Debug, Clone)]
pub struct Fixture {
    pub name: &'static str,
    pub description: &'static str,
    pub raw: RawMatrix,
    pub clusterings: Vec<(&'static str, CoClustering)>,
}

impl Fixture {
    pub fn clustering(&self, name: &str) -> Option<&CoClustering> {
        self.clusterings.iter().find(|(n, _)| *n == name).map(|(_, cc)| cc)
    }

    pub fn dist(&self) -> Result<JointDistribution> {
        normalize(&self.raw)
    }
}

pub const FIXTURE_NAMES: [&str; 5] =
    ["stuck_3x4", "unequal_cardinality_8x4", "entropy_trade", "entropy_trade_shifted", "southern_women"];

pub fn fixtures() -> Vec<Fixture> {
    FIXTURE_NAMES.iter().map(|n| fixture(n).expect("bundled fixture")).collect()
}

fn cc(phi: &[usize], psi: &[usize]) -> CoClustering {
    CoClustering::from_assignments(phi.to_vec(), psi.to_vec())
}

pub fn fixture(name: &str) -> Result<Fixture> {
    let dense = |rows: &[&[f64]]| RawMatrix::from_dense(&rows.iter().map(|r| r.to_vec()).collect::<Vec<_>>());
    let f = match name {
        "stuck_3x4" => Fixture {
            name: "stuck_3x4",
            description: "3x4 matrix on which the sequential heuristic stays at the thin partition for beta = 0.5",
            raw: dense(&[&[0.25, 0.0, 0.0, 0.0], &[0.0, 0.25, 0.0, 0.0], &[0.0, 0.0, 0.25, 0.25]])?,
            clusterings: vec![("thin", cc(&[0, 1, 1], &[0, 1, 1, 1])), ("thick", cc(&[0, 0, 1], &[0, 0, 1, 1]))],
        },
        "unequal_cardinality_8x4" => {
            let rows: Vec<Vec<f64>> =
                (0..8).map(|r| (0..4).map(|c| if r / 2 == c { 0.125 } else { 0.0 }).collect()).collect();
            Fixture {
                name: "unequal_cardinality_8x4",
                description: "8x4 matrix; phi1 wins for beta = 1, phi2 for beta = 0, tie at 0.5",
                raw: RawMatrix::from_dense(&rows)?,
                clusterings: vec![
                    ("phi1", cc(&[0, 0, 1, 1, 2, 2, 3, 3], &[0, 0, 1, 1])),
                    ("phi2", cc(&[0, 1, 1, 1, 2, 2, 2, 3], &[0, 0, 1, 1])),
                ],
            }
        }
        "entropy_trade" => Fixture {
            name: "entropy_trade",
            description: "3x3 matrix where the ground truth loses to an alternative for large beta",
            raw: dense(&[&[0.12, 0.0, 0.0], &[0.0, 0.39, 0.05], &[0.0, 0.05, 0.39]])?,
            clusterings: vec![
                ("ground_truth", cc(&[0, 1, 1], &[0, 1, 1])),
                ("alternative", cc(&[0, 0, 1], &[0, 0, 1])),
            ],
        },
        "entropy_trade_shifted" => Fixture {
            name: "entropy_trade_shifted",
            description: "entropy_trade with weaker off-diagonal mass; the alternative wins from small beta on",
            raw: dense(&[&[0.12, 0.0, 0.0], &[0.0, 0.4, 0.04], &[0.0, 0.04, 0.4]])?,
            clusterings: vec![
                ("ground_truth", cc(&[0, 1, 1], &[0, 1, 1])),
                ("alternative", cc(&[0, 0, 1], &[0, 0, 1])),
            ],
        },
        "southern_women" => Fixture {
            name: "southern_women",
            description: "18 women x 14 events attendance (binary)",
            raw: southern_women(),
            clusterings: vec![(
                "reference",
                cc(
                    &[0, 0, 0, 0, 0, 0, 0, 0, 0, 1, 1, 1, 1, 1, 1, 1, 1, 1],
                    &[0, 0, 0, 0, 0, 0, 1, 1, 1, 2, 2, 2, 2, 2],
                ),
            )],
        },
        other => return Err(Error::UnknownFixture(other.to_string())),
    };
    Ok(f)
}

/// Attendees (1-based women) of events 1 to 14.
const SOUTHERN_WOMEN_EVENTS: [&[usize]; 14] = [
    &[1, 2, 4],
    &[1, 2, 3],
    &[1, 2, 3, 4, 5, 6],
    &[1, 3, 4, 5],
    &[1, 2, 3, 4, 5, 6, 7, 9],
    &[1, 2, 3, 4, 6, 7, 8, 14],
    &[2, 3, 4, 5, 7, 9, 10, 13, 14, 15],
    &[1, 2, 3, 4, 6, 7, 8, 9, 10, 11, 12, 13, 15, 16],
    &[1, 3, 8, 9, 10, 11, 12, 13, 14, 16, 17, 18],
    &[11, 12, 13, 14, 15, 16],
    &[14, 15, 17, 18],
    &[10, 11, 12, 13, 14, 15, 16],
    &[12, 13, 14, 15],
    &[12, 13, 14, 15],
];

fn southern_women() -> RawMatrix {
    let triplets = SOUTHERN_WOMEN_EVENTS
        .iter()
        .enumerate()
        .flat_map(|(e, women)| women.iter().map(move |&w| (w - 1, e, 1.0)));
    RawMatrix::from_triplets(18, 14, triplets).expect("indices in range")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cost::cost_beta;
    use crate::distribution::connected_components;

    #[test]
    fn planted_profile_rows_are_distinct() {
        let w: Vec<Vec<f64>> = (0..5).map(|a| (0..3).map(|b| planted_block_weight(a, b, 3)).collect()).collect();
        assert_eq!(
            w,
            vec![
                vec![5.0, 1.0, 1.0],
                vec![1.0, 5.0, 1.0],
                vec![1.0, 1.0, 5.0],
                vec![5.0, 3.0, 1.0],
                vec![1.0, 5.0, 3.0]
            ]
        );
    }

    #[test]
    fn noiseless_planted_is_blockwise_constant() {
        let d = gen_planted(&PlantedSpec::even(80, 50, 5, 3, 0.0, 1)).unwrap();
        for r in 0..80 {
            for c in 0..50 {
                let first = d.dist.prob((r / 16) * 16, [0, 17, 34][d.col_truth[c]]);
                assert!((d.dist.prob(r, c) - first).abs() < 1e-15);
            }
        }
        assert!(d.dist.mutual_information().unwrap() > 0.1);
        let zero = cost_beta(&d.dist, &d.truth(), 0.0).unwrap().total;
        assert!(zero.abs() < 1e-10, "{zero}");
    }

    #[test]
    fn even_boundaries_split() {
        assert_eq!(even_boundaries(50, 3), vec![17, 34, 50]);
        assert_eq!(even_boundaries(80, 5), vec![16, 32, 48, 64, 80]);
    }

    #[test]
    fn planted_is_seed_deterministic() {
        let a = gen_planted(&PlantedSpec::even(20, 10, 2, 2, 0.5, 9)).unwrap();
        let b = gen_planted(&PlantedSpec::even(20, 10, 2, 2, 0.5, 9)).unwrap();
        let c = gen_planted(&PlantedSpec::even(20, 10, 2, 2, 0.5, 10)).unwrap();
        assert_eq!(a.raw, b.raw);
        assert_ne!(a.raw, c.raw);
    }

    #[test]
    fn bad_boundaries() {
        let mut s = PlantedSpec::even(10, 10, 2, 2, 0.0, 0);
        s.row_boundaries = vec![5, 5, 10];
        assert!(matches!(gen_planted(&s), Err(Error::InvalidBoundaries(_))));
        s.row_boundaries = vec![5, 9];
        assert!(matches!(gen_planted(&s), Err(Error::InvalidBoundaries(_))));
        s.row_boundaries = vec![5, 10];
        s.noise_eps = 1.5;
        assert!(matches!(gen_planted(&s), Err(Error::InvalidConfig(_))));
    }

    #[test]
    fn circulant_structure() {
        let full = gen_circulant(&CirculantSpec::new(30)).unwrap();
        assert!((full.raw.get(5, 7) - 1.0 / 2700.0).abs() < 1e-18);
        assert_eq!(full.raw.get(5, 40), 0.0);
        assert!(cost_beta(&full.dist, &full.truth(), 0.0).unwrap().total.abs() < 1e-10);

        let one = gen_circulant(&CirculantSpec::new(1)).unwrap();
        assert_eq!(one.raw.nnz(), 90);
        assert!((one.raw.get(0, 29) - 1.0 / 90.0).abs() < 1e-18);
        assert!((one.raw.get(1, 0) - 1.0 / 90.0).abs() < 1e-18);

        let three = gen_circulant(&CirculantSpec::new(3)).unwrap();
        assert_eq!(three.raw.nnz(), 270);
        for r in 0..90 {
            let row: Vec<_> = three.raw.iter().filter(|e| e.0 == r).collect();
            assert_eq!(row.len(), 3);
            assert!(row.iter().all(|e| (e.2 - 1.0 / 270.0).abs() < 1e-18));
        }
        assert_eq!(connected_components(&three.raw).unwrap().n_components, 3);
        let smooth = gen_circulant(&CirculantSpec { k: 3, smooth: true }).unwrap();
        assert_eq!(connected_components(&smooth.raw).unwrap().n_components, 1);
        assert!(matches!(gen_circulant(&CirculantSpec::new(0)), Err(Error::KOutOfRange(0))));
        assert!(matches!(gen_circulant(&CirculantSpec::new(31)), Err(Error::KOutOfRange(31))));
    }

    #[test]
    fn fixture_contents() {
        let f = fixture("stuck_3x4").unwrap();
        assert_eq!(f.raw.nnz(), 4);
        assert_eq!(f.raw.get(2, 3), 0.25);
        let e = fixture("entropy_trade").unwrap();
        assert_eq!(e.raw.get(1, 1), 0.39);
        assert_eq!(e.raw.get(2, 1), 0.05);
        assert!(matches!(fixture("nope"), Err(Error::UnknownFixture(_))));
        assert_eq!(fixtures().len(), FIXTURE_NAMES.len());
    }

    #[test]
    fn southern_women_counts() {
        let sw = fixture("southern_women").unwrap().raw;
        assert_eq!((sw.n_rows(), sw.n_cols()), (18, 14));
        assert_eq!(sw.nnz(), 93);
        let attended = |w: usize| sw.iter().filter(|e| e.0 == w).count();
        assert_eq!(attended(0), 8);
        assert_eq!(attended(15), 4);
        assert_eq!(attended(17), 2);
        let sizes: Vec<usize> = (0..14).map(|e| sw.iter().filter(|x| x.1 == e).count()).collect();
        assert_eq!(sizes, vec![3, 3, 6, 4, 8, 8, 10, 14, 12, 6, 4, 7, 4, 4]);
    }
}
