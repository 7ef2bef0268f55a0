use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser, Debug)]
#[command(name = "sunflower", version, about = "Sunflowers, robust sunflowers and spread families")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub opts: Opts,
}

#[derive(Subcommand, Debug, Clone, Copy)]
pub enum Command {
    /// Generate a family.
    Gen {
        #[command(subcommand)]
        what: GenCmd,
    },
    /// Analyze a family read with --in. `analyze --verify REPORT` re-checks a report's witness.
    Analyze {
        #[command(subcommand)]
        what: Option<AnalyzeCmd>,
    },
    /// Run an experiment.
    Experiment {
        #[command(subcommand)]
        what: ExperimentCmd,
    },
    /// Applications.
    Apps {
        #[command(subcommand)]
        what: AppsCmd,
    },
}

#[derive(Subcommand, Debug, Clone, Copy)]
pub enum GenCmd {
    /// All transversals of w blocks of size m.
    Product,
    /// Greedy subfamily of the product family with pairwise intersections at most (1-epsilon)w.
    Lowerbound,
    /// Random family.
    Random,
}

#[derive(Subcommand, Debug, Clone, Copy)]
pub enum AnalyzeCmd {
    Spread,
    Sunflower,
    Robust,
    Satisfying,
    Intersecting,
}

#[derive(Subcommand, Debug, Clone, Copy)]
pub enum ExperimentCmd {
    Reduction,
    Janson,
    Schedule,
    Rainbow,
    Whitecover,
}

#[derive(Subcommand, Debug, Clone, Copy)]
pub enum AppsCmd {
    Kneser,
    Ajt,
}

#[derive(ValueEnum, Debug, Clone, Copy, Default, PartialEq, Eq)]
pub enum Format {
    #[default]
    Json,
    Text,
}

#[derive(Args, Debug, Clone, Default)]
pub struct Opts {
    /// Family file (JSON or text); `-` reads stdin.
    #[arg(long = "in", global = true, value_name = "FILE")]
    pub input: Option<PathBuf>,
    /// Write the report here instead of stdout.
    #[arg(long, global = true, value_name = "FILE")]
    pub out: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Report to re-verify (with `analyze`).
    #[arg(long, global = true, value_name = "REPORT")]
    pub verify: Option<PathBuf>,

    #[arg(long, global = true)]
    pub alpha: Option<String>,
    #[arg(long, global = true)]
    pub beta: Option<String>,
    #[arg(long, global = true)]
    pub r: Option<usize>,
    #[arg(long = "w-prime", global = true)]
    pub w_prime: Option<usize>,
    #[arg(long, global = true)]
    pub p: Option<String>,
    #[arg(long, global = true)]
    pub epsilon: Option<String>,
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    #[arg(long, global = true)]
    pub samples: Option<u64>,
    /// exact-ie | exact-enum | exact-branch | mc | auto
    #[arg(long, global = true)]
    pub method: Option<String>,

    /// Width (integer, or `2^k` / float for `experiment schedule`).
    #[arg(long, global = true)]
    pub w: Option<String>,
    #[arg(long, global = true)]
    pub m: Option<usize>,
    #[arg(long, global = true)]
    pub n: Option<usize>,
    #[arg(long, global = true)]
    pub k: Option<usize>,
    #[arg(long, global = true)]
    pub count: Option<usize>,
    #[arg(long = "min-size", global = true)]
    pub min_size: Option<usize>,
    #[arg(long = "max-size", global = true)]
    pub max_size: Option<usize>,
    /// Redraw repeated sets in `gen random`.
    #[arg(long, global = true)]
    pub distinct: bool,

    #[arg(long, global = true)]
    pub kappa: Option<String>,
    /// Weight profile `s0;s1,s2,...` for `analyze spread`.
    #[arg(long, global = true)]
    pub profile: Option<String>,
    /// loglog | log
    #[arg(long, global = true)]
    pub variant: Option<String>,
    #[arg(long, global = true)]
    pub constant: Option<f64>,
    #[arg(long = "w-star", global = true)]
    pub w_star: Option<f64>,
    #[arg(long = "k-const", global = true)]
    pub k_const: Option<f64>,
    #[arg(long = "c-const", global = true)]
    pub c_const: Option<f64>,

    /// link-kernels | exhaustive-subfamilies
    #[arg(long, global = true)]
    pub strategy: Option<String>,
    /// auto | exhaustive | erdos-rado
    #[arg(long, global = true)]
    pub finder: Option<String>,
    /// Petal color for a monochromatic search over a random coloring.
    #[arg(long, global = true)]
    pub color: Option<String>,
    /// red-blue | red-green-blue
    #[arg(long, global = true)]
    pub palette: Option<String>,

    #[arg(long, global = true)]
    pub trials: Option<u32>,
    /// fixed-size | biased
    #[arg(long, global = true)]
    pub mode: Option<String>,
    #[arg(long, global = true)]
    pub delta: Option<String>,
    /// pair | triple | anchored
    #[arg(long, global = true)]
    pub search: Option<String>,
    #[arg(long, global = true)]
    pub anchor: Option<usize>,

    /// Bijection as comma-separated subset indices.
    #[arg(long, global = true)]
    pub pi: Option<String>,
    #[arg(long, global = true)]
    pub budget: Option<u64>,
    /// Matrices as rows `a,b;c,d` separated by `|`.
    #[arg(long, global = true)]
    pub matrices: Option<String>,
    /// Draw random invertible matrices.
    #[arg(long, global = true)]
    pub random: bool,
    /// Number of sampled link sets.
    #[arg(long, global = true)]
    pub links: Option<usize>,
}
