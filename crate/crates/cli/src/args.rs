use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(name = "spgraph", version, about = "Generate, convert, and benchmark graphs on the spgraph engine")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Write a synthetic graph.
    #[command(subcommand)]
    Generate(Generate),
    /// Re-encode a graph file, cleaning it on the way.
    Convert(ConvertArgs),
    /// Run one algorithm and write per-vertex results.
    Run(RunArgs),
    /// Repeat a run at several thread counts.
    #[command(subcommand)]
    ScaleSweep(Sweep),
}

#[derive(Debug, Subcommand)]
pub enum Generate {
    /// Raw RMAT tuples; self-loops and duplicates are kept.
    Rmat(RmatArgs),
    /// User-to-item rating edges with skewed item popularity.
    Bipartite(BipartiteArgs),
}

#[derive(Debug, Subcommand)]
pub enum Sweep {
    Run(RunArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum InFormat {
    Edgelist,
    Mtx,
    Bin,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum OutFormat {
    Edgelist,
    Bin,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Cleanup {
    None,
    Symmetrize,
    Dagify,
}

#[derive(Debug, Args)]
pub struct RmatArgs {
    #[arg(long)]
    pub scale: u32,
    #[arg(long, default_value_t = 16)]
    pub edgefactor: u64,
    #[arg(long, default_value_t = 0.57)]
    pub a: f64,
    #[arg(long, default_value_t = 0.19)]
    pub b: f64,
    #[arg(long, default_value_t = 0.19)]
    pub c: f64,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    #[arg(long)]
    pub out: PathBuf,
    #[arg(long, value_enum, default_value_t = OutFormat::Edgelist)]
    pub format: OutFormat,
}

#[derive(Debug, Args)]
pub struct BipartiteArgs {
    #[arg(long)]
    pub users: usize,
    #[arg(long)]
    pub items: usize,
    #[arg(long)]
    pub ratings: usize,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    #[arg(long)]
    pub out: PathBuf,
    #[arg(long, value_enum, default_value_t = OutFormat::Edgelist)]
    pub format: OutFormat,
}

#[derive(Debug, Args)]
pub struct ConvertArgs {
    #[arg(long = "in")]
    pub input: PathBuf,
    #[arg(long, value_enum)]
    pub in_format: InFormat,
    #[arg(long)]
    pub out: PathBuf,
    #[arg(long, value_enum)]
    pub out_format: OutFormat,
    /// Read a weight column from edge-list input and write one to edge-list
    /// output.
    #[arg(long)]
    pub weighted: bool,
    /// Self-loops and duplicate edges are always removed.
    #[arg(long, value_enum, default_value_t = Cleanup::None)]
    pub preprocess: Cleanup,
}

#[derive(Debug, Args)]
pub struct RunArgs {
    #[command(subcommand)]
    pub algorithm: Algorithm,
}

#[derive(Debug, Subcommand)]
pub enum Algorithm {
    Pagerank(PagerankArgs),
    /// Hop distances on the symmetrized graph.
    Bfs(SourceArgs),
    /// Weighted shortest-path distances.
    Sssp(SourceArgs),
    /// Triangles on the acyclic orientation of the symmetrized graph.
    Tc(CommonArgs),
    /// Matrix factorization by gradient descent on a user-to-item graph.
    Cf(CfArgs),
}

impl Algorithm {
    pub fn common(&self) -> &CommonArgs {
        match self {
            Algorithm::Pagerank(a) => &a.common,
            Algorithm::Bfs(a) | Algorithm::Sssp(a) => &a.common,
            Algorithm::Tc(a) => a,
            Algorithm::Cf(a) => &a.common,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Algorithm::Pagerank(_) => "pagerank",
            Algorithm::Bfs(_) => "bfs",
            Algorithm::Sssp(_) => "sssp",
            Algorithm::Tc(_) => "tc",
            Algorithm::Cf(_) => "cf",
        }
    }
}

#[derive(Debug, Args)]
pub struct CommonArgs {
    #[arg(long)]
    pub graph: PathBuf,
    #[arg(long, value_enum, default_value_t = InFormat::Edgelist)]
    pub format: InFormat,
    /// Read a third weight column from edge-list input.
    #[arg(long)]
    pub weighted: bool,
    /// Worker threads; `scale-sweep` takes a comma-separated list.
    #[arg(long, value_delimiter = ',', default_value = "1", value_parser = clap::value_parser!(u32).range(1..))]
    pub threads: Vec<u32>,
    #[arg(long, default_value_t = 8, value_parser = clap::value_parser!(u32).range(1..))]
    pub partitions_per_thread: u32,
    #[arg(long)]
    pub max_iters: Option<usize>,
    /// Per-vertex results, tab separated.
    #[arg(long)]
    pub out: PathBuf,
    #[arg(long)]
    pub report: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SourceArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    /// 1-based start vertex.
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    pub source: u64,
}

#[derive(Debug, Args)]
pub struct PagerankArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    /// Random-surf probability r in `r + (1 - r) * sum`.
    #[arg(long, default_value_t = 0.15)]
    pub damping: f64,
}

#[derive(Debug, Args)]
pub struct CfArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    #[arg(long, default_value_t = 20)]
    pub k: usize,
    #[arg(long, default_value_t = 1e-4)]
    pub gamma: f64,
    #[arg(long, default_value_t = 0.05)]
    pub lambda: f64,
    /// Seed for the starting latent vectors.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Number of users; vertices below it are users, the rest items.
    /// Defaults to one past the largest rating source.
    #[arg(long)]
    pub users: Option<usize>,
}
