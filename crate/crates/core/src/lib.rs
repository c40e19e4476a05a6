//! Generalized information-theoretic co-clustering.
//!
//! Rows `X` and columns `Y` of a nonnegative matrix are clustered jointly by
//! minimizing `L_β(Φ, Ψ)`, a β-weighted sum of four relevant information
//! losses that equals twice the Markov aggregation cost of the random walk
//! on the matrix's bipartite graph. `β = 1` decouples the two sides into two
//! information-bottleneck problems, `β = 1/2` recovers ITCC and `β = 3/4`
//! recovers IBCC.

pub mod aggregate;
pub mod cost;
pub mod distribution;
pub mod error;
pub mod eval;
pub mod info;
pub mod io;
pub mod markov;
pub mod matrix;
pub mod optimize;
pub mod synth;

pub use aggregate::{aggregate, AggregateStats, CoClustering};
pub use cost::{cost_beta, cost_ibcc, cost_itcc, CostBreakdown, MoveEvaluator};
pub use distribution::{connected_components, normalize, Components, JointDistribution};
pub use error::{Error, Result, Side};
pub use eval::{map_prime, map_score, overlap_matrix, GroundTruth};
pub use info::{entropy, mutual_information, relevant_information_loss, ProbTable};
pub use matrix::RawMatrix;
pub use optimize::{ann_itcc, anneal_schedule, best_of_restarts, one_sided_sib, sgitcc, Init, OptimizerConfig, RunTrace};
pub use synth::{fixture, fixtures, gen_circulant, gen_planted, CirculantSpec, Fixture, PlantedSpec, SyntheticData};
