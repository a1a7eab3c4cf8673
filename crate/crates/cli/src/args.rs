use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use toposcope_core::attack::{Metric, RemovalMode, DEFAULT_MAX_FRACTION};
use toposcope_core::centrality::{IndexKind, DEFAULT_DAMPING};
use toposcope_core::ingest::{Format, RangePolicy};

#[derive(Debug, Parser)]
#[command(name = "toposcope", version, about = "Centrality, robustness and capacity analysis of router-level topologies")]
pub struct Cli {
    /// Worker threads (default: available parallelism). TOPOSCOPE_THREADS overrides this.
    #[arg(long, global = true)]
    pub threads: Option<usize>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Per-node centrality scores, graph summaries and degree distribution
    Centrality(CentralityArgs),
    /// Rank correlation and top-k overlap between indices
    Correlate(CorrelateArgs),
    /// Node-removal attacks measured by connectivity
    Attack(AttackArgs),
    /// Node-removal attacks measured by aggregate max flow
    Capacity(CapacityArgs),
    /// Seeded synthetic topologies as edge lists
    Generate(GenerateArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FormatArg {
    Auto,
    Edgelist,
    Graphml,
}

impl FormatArg {
    pub fn fixed(self) -> Option<Format> {
        match self {
            FormatArg::Auto => None,
            FormatArg::Edgelist => Some(Format::Edgelist),
            FormatArg::Graphml => Some(Format::Graphml),
        }
    }
}

#[derive(Debug, Clone, Args)]
pub struct IngestArgs {
    /// Input format; `auto` picks GraphML for .graphml/.xml files.
    #[arg(long, value_enum, default_value_t = FormatArg::Auto)]
    pub format: FormatArg,
    /// GraphML data field holding the link capacity.
    #[arg(long, default_value = "LinkSpeed")]
    pub capacity_key: String,
    /// GraphML data field holding the capacity unit (G, M, K).
    #[arg(long, default_value = "LinkSpeedUnits")]
    pub unit_key: String,
    /// How a capacity range "lo-hi" is resolved.
    #[arg(long, default_value = "mean", value_parser = parse_range_policy)]
    pub range_policy: RangePolicy,
    /// Capacity for links that carry none.
    #[arg(long, default_value_t = 1.0)]
    pub default_capacity: f64,
    /// Keep every component instead of the giant one.
    #[arg(long)]
    pub keep_all_components: bool,
}

#[derive(Debug, Args)]
pub struct CentralityArgs {
    #[arg(long, short)]
    pub input: PathBuf,
    #[command(flatten)]
    pub ingest: IngestArgs,
    /// Comma-separated indices or `all`.
    #[arg(long, default_value = "all")]
    pub indices: String,
    #[arg(long, default_value_t = DEFAULT_DAMPING)]
    pub damping: f64,
    /// Also write the degree distribution.
    #[arg(long)]
    pub degree_dist: bool,
    #[arg(long, short, default_value = "toposcope-out")]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct CorrelateArgs {
    /// Topology files or directories of them.
    #[arg(long, short, required = true, num_args = 1..)]
    pub input: Vec<PathBuf>,
    #[command(flatten)]
    pub ingest: IngestArgs,
    #[arg(long, default_value = "all")]
    pub indices: String,
    #[arg(long, default_value_t = DEFAULT_DAMPING)]
    pub damping: f64,
    /// Top-k fraction for the overlap matrices.
    #[arg(long, default_value_t = 0.15)]
    pub topk: f64,
    /// Mean and variance tables across all inputs.
    #[arg(long)]
    pub aggregate: bool,
    /// BC/DC diagnostic rows (implied by --aggregate).
    #[arg(long)]
    pub diagnostics: bool,
    /// Top-k fraction used by the diagnostic rows.
    #[arg(long, default_value_t = 0.05)]
    pub diagnostics_topk: f64,
    /// PageRank damping sweep `start:stop:step`.
    #[arg(long)]
    pub sweep_damping: Option<String>,
    /// Indices PageRank is compared with during the sweep.
    #[arg(long, default_value = "dc")]
    pub against: String,
    #[arg(long, short, default_value = "toposcope-out")]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct AttackArgs {
    #[arg(long, short, required = true, num_args = 1..)]
    pub input: Vec<PathBuf>,
    #[command(flatten)]
    pub ingest: IngestArgs,
    /// Driver indices, comma-separated or `all`.
    #[arg(long, default_value = "all")]
    pub drivers: String,
    #[arg(long, default_value = "simultaneous", value_parser = parse_mode)]
    pub mode: RemovalMode,
    /// Largest fraction of nodes removed.
    #[arg(long, default_value_t = DEFAULT_MAX_FRACTION)]
    pub max_frac: f64,
    /// Explicit removal counts, comma-separated (overrides --max-frac).
    #[arg(long)]
    pub steps: Option<String>,
    #[arg(long, default_value_t = DEFAULT_DAMPING)]
    pub damping: f64,
    /// Impact-factor distribution of this driver across inputs.
    #[arg(long, value_parser = parse_index)]
    pub pmf_of: Option<IndexKind>,
    /// Metric for --pmf-of.
    #[arg(long, default_value = "gcc", value_parser = parse_metric)]
    pub metric: Metric,
    #[arg(long, default_value_t = 10)]
    pub bins: usize,
    #[arg(long, short, default_value = "toposcope-out")]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct CapacityArgs {
    #[arg(long, short, required = true, num_args = 1..)]
    pub input: Vec<PathBuf>,
    #[command(flatten)]
    pub ingest: IngestArgs,
    /// Driver indices, comma-separated or `all` (PageRank is not available).
    #[arg(long, default_value = "all")]
    pub drivers: String,
    #[arg(long, default_value = "simultaneous", value_parser = parse_mode)]
    pub mode: RemovalMode,
    #[arg(long, default_value_t = DEFAULT_MAX_FRACTION)]
    pub max_frac: f64,
    #[arg(long)]
    pub steps: Option<String>,
    #[arg(long, value_parser = parse_index)]
    pub pmf_of: Option<IndexKind>,
    #[arg(long, default_value_t = 10)]
    pub bins: usize,
    #[arg(long, short, default_value = "toposcope-out")]
    pub out: PathBuf,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Model {
    /// Barabási–Albert preferential attachment
    Pa,
    /// Random tree plus uniformly random extra links
    Random,
}

#[derive(Debug, Args)]
pub struct GenerateArgs {
    #[arg(long, value_enum, default_value_t = Model::Pa)]
    pub model: Model,
    #[arg(long, short)]
    pub nodes: usize,
    /// Links per new node (pa).
    #[arg(long, default_value_t = 2)]
    pub m: usize,
    /// Extra-link probability (random).
    #[arg(long, default_value_t = 0.05)]
    pub p: f64,
    /// Draw link capacities.
    #[arg(long)]
    pub capacitated: bool,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    /// Number of graphs, seeded seed, seed+1, ...
    #[arg(long, default_value_t = 1)]
    pub count: usize,
    #[arg(long, short, default_value = "toposcope-out")]
    pub out: PathBuf,
}

fn parse_range_policy(s: &str) -> Result<RangePolicy, String> {
    s.parse().map_err(|e: toposcope_core::Error| e.to_string())
}

fn parse_mode(s: &str) -> Result<RemovalMode, String> {
    s.parse().map_err(|e: toposcope_core::Error| e.to_string())
}

fn parse_metric(s: &str) -> Result<Metric, String> {
    s.parse().map_err(|e: toposcope_core::Error| e.to_string())
}

fn parse_index(s: &str) -> Result<IndexKind, String> {
    s.parse().map_err(|e: toposcope_core::Error| e.to_string())
}
