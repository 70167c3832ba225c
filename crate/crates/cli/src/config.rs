use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rnbrw::Smoothing;
use serde::Serialize;

#[derive(Debug, Parser)]
#[command(name = "rnbrw", version, about = "RNBRW edge weighting and community detection")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Estimate retracing probabilities and write an RNBRW-weighted edge list.
    Weight(WeightArgs),
    /// Detect communities, optionally on RNBRW weights, and score against a truth file.
    Detect(DetectArgs),
    /// Generate a benchmark graph with its ground-truth partition.
    Generate(GenerateArgs),
    /// Run a benchmark grid and append one CSV row per condition.
    Sweep(SweepArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Louvain,
    Cnm,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Weighting {
    None,
    Rnbrw,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum SmoothingArg {
    None,
    Add1,
}

impl From<SmoothingArg> for Smoothing {
    fn from(s: SmoothingArg) -> Self {
        match s {
            SmoothingArg::None => Smoothing::None,
            SmoothingArg::Add1 => Smoothing::AddOne,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Kind {
    Lfr,
    Planted,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct WalkArgs {
    /// Master seed; every random component derives its own sub-seed from it.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Worker threads (defaults to the number of CPUs).
    #[arg(long)]
    pub workers: Option<usize>,
    /// Retracing runs to collect, as a multiple of the edge count.
    #[arg(long, default_value_t = 1.0)]
    pub walks_mult: f64,
    #[arg(long, value_enum, default_value = "none")]
    pub smoothing: SmoothingArg,
}

impl WalkArgs {
    pub fn workers(&self) -> usize {
        self.workers
            .unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get()))
            .max(1)
    }
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct WeightArgs {
    /// Input edge list (`u v` per line; a third column is ignored).
    #[arg(long = "in")]
    pub input: PathBuf,
    /// Output weighted edge list; `<out>.estimate.csv` and `<out>.json` are written alongside.
    #[arg(long)]
    pub out: PathBuf,
    #[command(flatten)]
    #[serde(flatten)]
    pub walk: WalkArgs,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct DetectArgs {
    #[arg(long = "in")]
    pub input: PathBuf,
    /// Output partition (`node community` per line); a JSON summary goes to `<out>.json`.
    #[arg(long)]
    pub out: PathBuf,
    #[arg(long, value_enum, default_value = "louvain")]
    pub method: Method,
    #[arg(long, value_enum, default_value = "none")]
    pub weighting: Weighting,
    /// Read edge weights from the third column of the input.
    #[arg(long)]
    pub weighted: bool,
    /// Ground-truth partition for NMI scoring.
    #[arg(long)]
    pub truth: Option<PathBuf>,
    #[command(flatten)]
    #[serde(flatten)]
    pub walk: WalkArgs,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct LfrArgs {
    /// Maximum degree (defaults to 2.5x the average degree).
    #[arg(long)]
    pub max_degree: Option<usize>,
    #[arg(long, default_value_t = 2.0)]
    pub tau1: f64,
    #[arg(long, default_value_t = 1.0)]
    pub tau2: f64,
    #[arg(long, default_value_t = 30)]
    pub min_community: usize,
    #[arg(long, default_value_t = 70)]
    pub max_community: usize,
}

impl LfrArgs {
    pub fn spec(&self, n: usize, avg_degree: f64, mu: f64, seed: u64) -> rnbrw::BenchmarkSpec {
        let mut spec = rnbrw::BenchmarkSpec::new(n, avg_degree, mu, seed);
        if let Some(k) = self.max_degree {
            spec.max_degree = k;
        }
        spec.degree_exponent = self.tau1;
        spec.community_exponent = self.tau2;
        spec.min_community = self.min_community;
        spec.max_community = self.max_community;
        spec
    }
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct GenerateArgs {
    /// Output edge list; `<out>.truth` and `<out>.json` are written alongside.
    #[arg(long)]
    pub out: PathBuf,
    #[arg(long, value_enum, default_value = "lfr")]
    pub kind: Kind,
    #[arg(long)]
    pub n: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Average degree (lfr).
    #[arg(long, default_value_t = 7.0)]
    pub avg_degree: f64,
    /// Mixing parameter (lfr).
    #[arg(long, default_value_t = 0.3)]
    pub mu: f64,
    #[command(flatten)]
    #[serde(flatten)]
    pub lfr: LfrArgs,
    /// Number of blocks (planted).
    #[arg(long, default_value_t = 2)]
    pub q: usize,
    #[arg(long, default_value_t = 0.5)]
    pub p_in: f64,
    #[arg(long, default_value_t = 0.05)]
    pub p_out: f64,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct SweepArgs {
    /// CSV to append to; rows already present are skipped.
    #[arg(long)]
    pub out: PathBuf,
    #[arg(long, value_delimiter = ',', required = true, num_args = 1..)]
    pub grid_mu: Vec<f64>,
    #[arg(long, value_delimiter = ',', default_value = "500")]
    pub grid_n: Vec<usize>,
    #[arg(long, value_delimiter = ',', default_value = "7")]
    pub grid_deg: Vec<f64>,
    #[arg(long, default_value_t = 1)]
    pub reps: u64,
    #[arg(long, value_enum, value_delimiter = ',', default_value = "louvain")]
    pub method: Vec<Method>,
    #[arg(long, value_enum, value_delimiter = ',', default_value = "none,rnbrw")]
    pub weighting: Vec<Weighting>,
    #[command(flatten)]
    #[serde(flatten)]
    pub lfr: LfrArgs,
    #[command(flatten)]
    #[serde(flatten)]
    pub walk: WalkArgs,
}
