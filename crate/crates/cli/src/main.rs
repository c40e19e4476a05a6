//! `cocluster` command-line driver.
//!
//! Exit codes: 0 success, 1 input could not be loaded or is not a valid
//! distribution, 2 invalid flags or configuration, 3 the bipartite graph is
//! reducible and `--smooth` was not given, 4 the Markov consistency residual
//! exceeds 1e-9.

mod commands;
mod input;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use cocluster::Error;

#[derive(Parser, Debug)]
#[command(name = "cocluster", version, about = "Information-theoretic co-clustering")]
struct Cli {
    /// Worker threads for restarts and sweeps (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Co-cluster one matrix with the best of several annealed runs.
    Cocluster(CoclusterArgs),
    /// Run a grid of beta values times seeds and write a CSV table.
    Sweep(SweepArgs),
    /// Generate a synthetic matrix with its planted partition.
    Synth(SynthArgs),
    /// List the bundled example matrices or export one.
    Fixtures(FixturesArgs),
    /// Score a predicted assignment against ground-truth labels.
    Eval(EvalArgs),
    /// Compare the Markov aggregation cost with the co-clustering cost.
    MarkovCheck(MarkovCheckArgs),
}

#[derive(Args, Debug, Clone)]
pub struct InputArgs {
    /// Matrix file.
    #[arg(long, conflicts_with = "fixture")]
    pub input: Option<PathBuf>,
    /// File format; guessed from the extension when omitted.
    #[arg(long, value_enum)]
    pub format: Option<FormatArg>,
    /// Field delimiter for dense files.
    #[arg(long)]
    pub delimiter: Option<char>,
    /// Index base of triplet files without a `%%base` header.
    #[arg(long, default_value_t = 0)]
    pub base: usize,
    /// Bundled example matrix.
    #[arg(long)]
    pub fixture: Option<String>,
    /// Mix a tiny uniform mass into every cell.
    #[arg(long)]
    pub smooth: bool,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum FormatArg {
    Csv,
    Tsv,
    Triplets,
    Mtx,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum InitArg {
    Random,
    Sib,
}

#[derive(Args, Debug, Clone)]
pub struct OptArgs {
    #[arg(long, default_value_t = 0.5)]
    pub beta: f64,
    #[arg(long)]
    pub row_clusters: usize,
    #[arg(long)]
    pub col_clusters: usize,
    #[arg(long, default_value_t = 20)]
    pub max_iter: usize,
    #[arg(long, default_value_t = 1e-3)]
    pub tol: f64,
    /// Annealing step.
    #[arg(long, default_value_t = 0.1)]
    pub anneal_step: f64,
    #[arg(long, default_value_t = 1)]
    pub restarts: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, value_enum, default_value_t = InitArg::Random)]
    pub init: InitArg,
    /// Restarts per side of the one-sided initialization.
    #[arg(long, default_value_t = 1)]
    pub init_restarts: usize,
}

#[derive(Args, Debug)]
pub struct CoclusterArgs {
    #[command(flatten)]
    pub input: InputArgs,
    #[command(flatten)]
    pub opt: OptArgs,
    /// Row labels (one integer per line) for scoring.
    #[arg(long)]
    pub row_truth: Option<PathBuf>,
    /// Column labels (one integer per line) for scoring.
    #[arg(long)]
    pub col_truth: Option<PathBuf>,
    /// Directory for the run record.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct SweepArgs {
    #[command(flatten)]
    pub input: InputArgs,
    /// Regenerate a planted matrix with this noise weight for every seed
    /// (80x50 with 5x3 blocks unless resized).
    #[arg(long, conflicts_with_all = ["input", "fixture", "circulant"])]
    pub planted_eps: Option<f64>,
    #[arg(long, default_value_t = 80)]
    pub planted_rows: usize,
    #[arg(long, default_value_t = 50)]
    pub planted_cols: usize,
    /// Use the circulant matrix with this coupling width.
    #[arg(long, conflicts_with_all = ["input", "fixture"])]
    pub circulant: Option<usize>,
    #[command(flatten)]
    pub opt: OptArgs,
    /// Comma-separated beta values; overrides --beta-step.
    #[arg(long, value_delimiter = ',')]
    pub betas: Option<Vec<f64>>,
    /// Grid 0, step, 2 step, ..., 1.
    #[arg(long, default_value_t = 0.1)]
    pub beta_step: f64,
    /// Number of seeds: seed, seed + 1, ...
    #[arg(long, default_value_t = 1)]
    pub seeds: u64,
    #[arg(long)]
    pub row_truth: Option<PathBuf>,
    #[arg(long)]
    pub col_truth: Option<PathBuf>,
    /// Output CSV file.
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum SynthKind {
    Planted,
    Circulant,
}

#[derive(Args, Debug)]
pub struct SynthArgs {
    #[arg(value_enum)]
    pub kind: SynthKind,
    #[arg(long, default_value_t = 80)]
    pub rows: usize,
    #[arg(long, default_value_t = 50)]
    pub cols: usize,
    #[arg(long, default_value_t = 5)]
    pub row_clusters: usize,
    #[arg(long, default_value_t = 3)]
    pub col_clusters: usize,
    #[arg(long, default_value_t = 0.0)]
    pub eps: f64,
    #[arg(long, default_value_t = 15)]
    pub k: usize,
    #[arg(long)]
    pub smooth: bool,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, value_enum, default_value_t = FormatArg::Triplets)]
    pub format: FormatArg,
    /// Output directory for the matrix and the label files.
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Args, Debug)]
pub struct FixturesArgs {
    /// Fixture to export; lists all fixtures when omitted.
    #[arg(long)]
    pub name: Option<String>,
    #[arg(long, value_enum, default_value_t = FormatArg::Triplets)]
    pub format: FormatArg,
    #[arg(long, requires = "name")]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct EvalArgs {
    /// Predicted labels, one integer per line.
    #[arg(long)]
    pub pred: PathBuf,
    /// True labels, one line per element; several comma-separated labels
    /// make the ground truth multi-label.
    #[arg(long)]
    pub truth: PathBuf,
    /// Number of predicted clusters, counting empty ones (default: the
    /// number of true clusters).
    #[arg(long)]
    pub k: Option<usize>,
}

#[derive(Args, Debug)]
pub struct MarkovCheckArgs {
    #[command(flatten)]
    pub input: InputArgs,
    #[arg(long, conflicts_with_all = ["input", "fixture"])]
    pub circulant: Option<usize>,
    /// Random clusterings to test per beta.
    #[arg(long, default_value_t = 20)]
    pub samples: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

/// A failure with its exit status.
#[derive(Debug)]
pub struct Failure {
    pub code: u8,
    pub message: String,
}

impl Failure {
    pub fn config(message: impl Into<String>) -> Self {
        Failure { code: 2, message: message.into() }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::Reducible(_) => 3,
            ref e if e.is_data_error() => 1,
            _ => 2,
        };
        Failure { code, message: e.to_string() }
    }
}

fn run(cli: Cli) -> Result<(), Failure> {
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(n) = cli.threads {
        if n == 0 {
            return Err(Failure::config("--threads must be at least 1"));
        }
        builder = builder.num_threads(n);
    }
    let pool = builder.build().map_err(|e| Failure::config(e.to_string()))?;
    pool.install(|| match cli.command {
        Command::Cocluster(a) => commands::cocluster(a),
        Command::Sweep(a) => commands::sweep(a),
        Command::Synth(a) => commands::synth(a),
        Command::Fixtures(a) => commands::fixtures(a),
        Command::Eval(a) => commands::eval(a),
        Command::MarkovCheck(a) => commands::markov_check(a),
    })
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
