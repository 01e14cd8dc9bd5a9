use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser, Debug)]
#[command(name = "tiling-lab", version, about = "Perfect tilings in hypergraphs: lifts, barriers, invariants, thresholds, solvers")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Lift a host by a tile and certify barrier properties of the lift.
    Analyze(AnalyzeArgs),
    /// Write the homomorphism digraph of a tile into a host.
    Hom(HomArgs),
    /// Search for a perfect matching or perfect tiling.
    Solve(SolveArgs),
    /// Colouring, interval and density invariants of a tile or host.
    Invariants(InvariantsArgs),
    /// Threshold formulas for a tile.
    Thresholds(ThresholdsArgs),
    /// Generate an extremal or random construction.
    Construct(ConstructArgs),
    /// Build or sample the property graph of a digraph.
    Pgraph(PgraphArgs),
    /// Re-verify a certificate against an instance (exit 3 when invalid).
    Certify(CertifyArgs),
    /// Seeded experiments writing CSV or JSON.
    Experiment(ExperimentArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

/// A tile and host pair, or a ready-made digraph.
#[derive(Args, Debug, Clone)]
pub struct LiftInput {
    /// Host k-graph file.
    #[arg(long)]
    pub host: Option<PathBuf>,
    /// Tile k-graph file.
    #[arg(long)]
    pub tile: Option<PathBuf>,
    /// Use order-preserving homomorphisms.
    #[arg(long)]
    pub ordered: bool,
}

#[derive(Args, Debug)]
pub struct AnalyzeArgs {
    #[command(flatten)]
    pub lift: LiftInput,
    /// Comma-separated subset of spa,div,cov,fissile,matching.
    #[arg(long, default_value = "spa,div,cov")]
    pub props: String,
    #[arg(long, default_value = "0")]
    pub rho: String,
    #[arg(long, default_value_t = 10_000_000)]
    pub budget: u64,
    /// Emit the certificate bundle as JSON rather than a summary.
    #[arg(long)]
    pub json: bool,
    /// Also write the lifted digraph, which certificates refer to.
    #[arg(long)]
    pub write_lift: Option<PathBuf>,
    #[arg(short, long)]
    pub output: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct HomArgs {
    #[command(flatten)]
    pub lift: LiftInput,
    /// Graph family file; produces the rainbow lift of the tile.
    #[arg(long, conflicts_with_all = ["host", "ordered"])]
    pub family: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "text")]
    pub format: Format,
    #[arg(short, long)]
    pub output: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Method {
    Exact,
    Absorb,
    Greedy,
}

#[derive(Args, Debug)]
pub struct SolveArgs {
    /// Digraph file; otherwise --host and --tile.
    #[arg(long)]
    pub instance: Option<PathBuf>,
    #[command(flatten)]
    pub lift: LiftInput,
    #[arg(long, value_enum, default_value = "exact")]
    pub method: Method,
    #[arg(long, default_value_t = 10_000_000)]
    pub budget: u64,
    /// Required by the randomized methods.
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long, default_value_t = 4)]
    pub absorbers: usize,
    #[arg(short, long)]
    pub output: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct InvariantsArgs {
    /// k-graph file.
    #[arg(long)]
    pub graph: PathBuf,
    /// Include interval-colouring invariants and the bounded bottlegraph search.
    #[arg(long)]
    pub ordered: bool,
    #[arg(long, default_value_t = 2)]
    pub b_max: usize,
    /// Check uniform density with this ε.
    #[arg(long, requires = "density")]
    pub eps: Option<String>,
    /// Density d for the uniform density check.
    #[arg(long, requires = "eps")]
    pub density: Option<String>,
    /// Exponent of n in the slack term; defaults to k.
    #[arg(long)]
    pub exponent: Option<u32>,
    /// Sampled density check with this many trials (needs --seed).
    #[arg(long)]
    pub trials: Option<u64>,
    #[arg(long)]
    pub seed: Option<u64>,
}

#[derive(Args, Debug)]
pub struct ThresholdsArgs {
    /// Tile k-graph file.
    #[arg(long)]
    pub tile: Option<PathBuf>,
    /// Degree type; defaults to 1 for graphs and k-1 otherwise.
    #[arg(long)]
    pub d: Option<usize>,
    /// Connectivity threshold of k-graphs with this uniformity.
    #[arg(long)]
    pub connectivity: Option<usize>,
    /// Matching threshold bounds for s-graphs.
    #[arg(long)]
    pub matching: Option<usize>,
    /// Exhaustive optimisation grid with this many steps per unit.
    #[arg(long)]
    pub grid: Option<u32>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum ConstructKind {
    CoverBarrier,
    SpaceBarrier,
    DivisibilityBarrier,
    CompletePartite,
    Downspin,
    Random,
    MinDegree,
}

#[derive(Args, Debug)]
pub struct ConstructArgs {
    #[arg(value_enum)]
    pub kind: ConstructKind,
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long)]
    pub k: Option<usize>,
    #[arg(long)]
    pub i: Option<usize>,
    #[arg(long)]
    pub beta: Option<String>,
    /// Comma-separated part sizes.
    #[arg(long)]
    pub parts: Option<String>,
    #[arg(long)]
    pub l: Option<usize>,
    #[arg(long)]
    pub b: Option<usize>,
    /// Edge probability for `random`.
    #[arg(long)]
    pub p: Option<f64>,
    /// Minimum degree ratio for `min-degree`.
    #[arg(long)]
    pub ratio: Option<String>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long, value_enum, default_value = "text")]
    pub format: Format,
    #[arg(short, long)]
    pub output: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Mode {
    Exact,
    Sampled,
}

#[derive(Args, Debug)]
pub struct PgraphArgs {
    #[arg(long)]
    pub instance: Option<PathBuf>,
    #[command(flatten)]
    pub lift: LiftInput,
    /// Comma-separated subset of spa,div,cov,fissile, or `all`.
    #[arg(long, default_value = "all")]
    pub props: String,
    #[arg(long, default_value = "0")]
    pub rho: String,
    #[arg(long)]
    pub s: usize,
    #[arg(long, value_enum, default_value = "exact")]
    pub mode: Mode,
    #[arg(long)]
    pub trials: Option<u64>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long, value_enum, default_value = "text")]
    pub format: Format,
    #[arg(short, long)]
    pub output: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct CertifyArgs {
    /// Digraph (or host k-graph, for tiling certificates).
    #[arg(long)]
    pub instance: PathBuf,
    #[arg(long)]
    pub cert: PathBuf,
    #[arg(long, default_value_t = 10_000_000)]
    pub budget: u64,
}

#[derive(Args, Debug)]
pub struct ExperimentArgs {
    #[command(subcommand)]
    pub kind: ExperimentKind,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum SweepCheck {
    /// Exact tiling search.
    Exact,
    /// Absorption pipeline on the lift.
    Absorb,
    /// spa(0), div and cov on the lift.
    Barriers,
}

#[derive(Subcommand, Debug)]
pub enum ExperimentKind {
    /// Success rates over a grid of host orders and minimum degree ratios.
    Sweep {
        #[arg(long)]
        tile: PathBuf,
        /// Comma-separated host orders; orders not divisible by v(F) are skipped.
        #[arg(long)]
        ns: String,
        /// Comma-separated minimum degree ratios.
        #[arg(long)]
        deltas: String,
        #[arg(long)]
        trials: u64,
        #[arg(long)]
        seed: u64,
        #[arg(long, value_enum, default_value = "exact")]
        check: SweepCheck,
        #[arg(long, default_value_t = 2_000_000)]
        budget: u64,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Fraction of random s-sets of a seeded dense host keeping its degree ratio.
    Grab {
        #[arg(long)]
        n: Option<usize>,
        /// Edge probability of the host; ignored with --host.
        #[arg(long, default_value_t = 0.95)]
        p: f64,
        #[arg(long)]
        host: Option<PathBuf>,
        #[arg(long)]
        s: usize,
        #[arg(long)]
        samples: u64,
        #[arg(long, default_value = "7/10")]
        ratio: String,
        #[arg(long)]
        seed: u64,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
}
