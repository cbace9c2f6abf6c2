use std::path::PathBuf;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};
use hspex::IntegerPartition;

#[derive(Debug, Parser)]
#[command(name = "hspex", version, about = "p-spectral radius and structural tools for uniform hypergraphs")]
pub struct Cli {
    /// Worker threads for parallel sections (default: all cores).
    #[arg(long, global = true, env = "HSPEX_THREADS")]
    pub threads: Option<usize>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Compute the p-spectral radius of a graph.
    Rho(RhoArgs),
    /// Check a structural property; exit 0 if it holds, 3 if not.
    #[command(subcommand)]
    Check(CheckCommand),
    /// Exhaustive extremal search over an H-free family.
    Extremal(ExtremalArgs),
    /// Greedily saturate a graph inside an H-free family.
    Saturate(SaturateArgs),
    /// Run a verification suite and emit a report.
    Experiment(ExperimentArgs),
}

#[derive(Debug, Clone, Copy, Default, ValueEnum)]
pub enum Format {
    #[default]
    Human,
    Json,
    Csv,
}

#[derive(Debug, Args)]
pub struct OutputArgs {
    /// Emit JSON.
    #[arg(long, conflicts_with = "csv")]
    pub json: bool,
    /// Emit CSV.
    #[arg(long)]
    pub csv: bool,
}

impl OutputArgs {
    pub fn format(&self) -> Format {
        if self.json {
            Format::Json
        } else if self.csv {
            Format::Csv
        } else {
            Format::Human
        }
    }
}

#[derive(Debug, Args)]
pub struct SolverArgs {
    /// Residual tolerance.
    #[arg(long, default_value_t = 1e-10)]
    pub tol: f64,
    /// Number of solver starts.
    #[arg(long, default_value_t = 16)]
    pub starts: usize,
    /// Seed for random starts.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Debug, Args)]
pub struct RhoArgs {
    #[arg(long)]
    pub input: PathBuf,
    #[arg(long)]
    pub p: f64,
    #[command(flatten)]
    pub solver: SolverArgs,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Subcommand)]
pub enum CheckCommand {
    /// k-tightness; prints a violating vertex set when it fails.
    Tight {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        k: usize,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Whether `--edge` is a k-bridge; without `--edge`, whether the graph is k-bridgeless.
    Bridge {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        k: usize,
        #[arg(long, value_delimiter = ',')]
        edge: Option<Vec<usize>>,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Whether `--edge` is a λ-plateau; without `--edge`, whether any edge is
    /// one; with `--k` instead of `--lambda`, whether the graph is k-plateaued.
    Plateau {
        #[arg(long)]
        input: PathBuf,
        #[arg(long, value_delimiter = ',')]
        edge: Option<Vec<usize>>,
        #[arg(long, required_unless_present = "k")]
        lambda: Option<IntegerPartition>,
        #[arg(long, conflicts_with_all = ["lambda", "edge"])]
        k: Option<usize>,
        #[command(flatten)]
        output: OutputArgs,
    },
}

/// A single vertex count `N` or an inclusive range `A..B`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NRange(pub Vec<usize>);

impl FromStr for NRange {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let num = |t: &str| t.trim().parse::<usize>().map_err(|_| format!("expected N or A..B, got {s:?}"));
        match s.split_once("..") {
            Some((a, b)) => {
                let (a, b) = (num(a)?, num(b.trim_start_matches('='))?);
                if a > b {
                    return Err(format!("empty range {s:?}"));
                }
                Ok(NRange((a..=b).collect()))
            }
            None => Ok(NRange(vec![num(s)?])),
        }
    }
}

#[derive(Debug, Args)]
pub struct ExtremalArgs {
    /// Forbidden graph (.hg); repeat for several.
    #[arg(long, required = true)]
    pub forbid: Vec<PathBuf>,
    /// Vertex count `N` or inclusive range `A..B`.
    #[arg(long)]
    pub n: NRange,
    /// Exponent; without it the edge count is maximized.
    #[arg(long)]
    pub p: Option<f64>,
    /// Solve every member instead of edge-maximal ones only.
    #[arg(long)]
    pub full: bool,
    /// Include wall-clock timings (output is then not reproducible).
    #[arg(long)]
    pub timings: bool,
    #[command(flatten)]
    pub solver: SolverArgs,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum OrderArg {
    Lex,
    Random,
}

#[derive(Debug, Args)]
pub struct SaturateArgs {
    #[arg(long, required = true)]
    pub forbid: Vec<PathBuf>,
    /// Vertex count of the empty starting graph.
    #[arg(long, required_unless_present = "input")]
    pub n: Option<usize>,
    /// Starting graph instead of the empty one.
    #[arg(long, conflicts_with = "n")]
    pub input: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = OrderArg::Lex)]
    pub order: OrderArg,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Suite {
    DegreeBound,
    RatioScaling,
    BridgelessTight,
    PlateauConstruct,
    CoarsenessProbe,
    DensityTrend,
}

#[derive(Debug, Args)]
pub struct ExperimentArgs {
    #[arg(value_enum)]
    pub suite: Suite,
    /// Forbidden graphs; for bridgeless-tight each is tested separately, for
    /// plateau-construct exactly one is expected.
    #[arg(long)]
    pub forbid: Vec<PathBuf>,
    #[arg(long)]
    pub p: Option<f64>,
    #[arg(long)]
    pub n: Option<NRange>,
    #[arg(long)]
    pub k: Option<usize>,
    /// Number of cliques in the plateau construction.
    #[arg(long, default_value_t = 2)]
    pub ell: usize,
    /// Random instances for degree-bound.
    #[arg(long, default_value_t = 1000)]
    pub count: usize,
    /// Random saturations per graph for bridgeless-tight.
    #[arg(long, default_value_t = 50)]
    pub trials: usize,
    #[arg(long, value_delimiter = ',', default_value = "2,3")]
    pub r_set: Vec<usize>,
    #[arg(long, value_delimiter = ',', default_value = "1.5,2,3,4")]
    pub p_set: Vec<f64>,
    /// Directory for `{experiment}-{seed}.json` and `.csv`.
    #[arg(long)]
    pub out_dir: Option<PathBuf>,
    #[command(flatten)]
    pub solver: SolverArgs,
    #[command(flatten)]
    pub output: OutputArgs,
}
