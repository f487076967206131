use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use levelraise::Exec;
use thiserror::Error;

mod input;
mod report;
mod run;

pub const DEFAULT_SEED: u64 = 20_240_531;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{path}: {msg}")]
    Io { path: String, msg: String },
    #[error("{path}:{line}: {msg}")]
    Parse {
        path: String,
        line: usize,
        msg: String,
    },
    #[error("{0}")]
    Library(String),
}

impl CliError {
    pub fn lib(e: impl std::fmt::Display) -> Self {
        CliError::Library(e.to_string())
    }
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Table,
}

#[derive(Debug, Parser)]
#[command(
    name = "levelraise",
    version,
    about = "Exact checks for Hecke identities, coset graphs, Satake parameters, tame L-parameters, slopes and analytic duals"
)]
struct Cli {
    /// Seed for randomized inputs.
    #[arg(long, global = true, default_value_t = DEFAULT_SEED)]
    seed: u64,
    /// Size budget (tree vertices, analytic coefficients).
    #[arg(long, global = true)]
    budget: Option<usize>,
    #[arg(long, global = true, value_enum, default_value = "json")]
    format: Format,
    /// Run everything on the calling thread.
    #[arg(long, global = true)]
    sequential: bool,
    #[command(subcommand)]
    group: Group,
}

#[derive(Debug, Subcommand)]
enum Group {
    /// Hecke identities on a ball of the Bruhat–Tits tree.
    #[command(subcommand)]
    Tree(TreeCmd),
    /// Old/new decomposition, congruences and level raising on a coset graph.
    #[command(subcommand)]
    Graph(GraphCmd),
    /// Spherical eigenvalues and principal series.
    #[command(subcommand)]
    Satake(SatakeCmd),
    /// Components of the space of tame parameters.
    #[command(subcommand)]
    Moduli(ModuliCmd),
    /// Newton polygons and slope factorizations.
    #[command(subcommand)]
    Slope(SlopeCmd),
    /// Locally analytic duals and torus weights.
    #[command(subcommand)]
    Analytic(AnalyticCmd),
}

#[derive(Debug, Subcommand)]
pub enum TreeCmd {
    Verify {
        #[arg(long)]
        l: u64,
        #[arg(long)]
        radius: u32,
    },
}

#[derive(Debug, Args)]
pub struct GraphSource {
    /// Graph file.
    pub path: Option<PathBuf>,
    /// Generate a random connected biregular graph with this many
    /// hyperspecial vertices instead of reading a file (uses --seed).
    #[arg(long, conflicts_with = "path")]
    pub random: Option<usize>,
    /// Prime for --random.
    #[arg(long, default_value_t = 2)]
    pub l: u64,
}

#[derive(Debug, Subcommand)]
pub enum GraphCmd {
    Analyze {
        #[command(flatten)]
        source: GraphSource,
        /// Also run the Ihara kernel test and level-raising search mod this prime.
        #[arg(long)]
        prime: Option<u64>,
        /// Determinant labeling file (defaults to one label per component).
        #[arg(long)]
        labels: Option<PathBuf>,
    },
    Congruence {
        #[command(flatten)]
        source: GraphSource,
    },
    Levelraise {
        #[command(flatten)]
        source: GraphSource,
        #[arg(long)]
        prime: u64,
        /// Determinant labeling file (defaults to one label per component).
        #[arg(long)]
        labels: Option<PathBuf>,
        /// Skip the built-in auxiliary operators.
        #[arg(long)]
        no_aux: bool,
    },
}

#[derive(Debug, Subcommand)]
pub enum SatakeCmd {
    Classify {
        #[arg(long, allow_hyphen_values = true)]
        alpha: String,
        #[arg(long)]
        l: u64,
    },
    Eig {
        #[arg(long, allow_hyphen_values = true)]
        alpha: String,
        #[arg(long)]
        l: u64,
        /// Also test the level-raising congruence modulo this prime.
        #[arg(long)]
        p: Option<u64>,
    },
    VeCheck {
        #[arg(long)]
        q: u64,
        #[arg(long, allow_hyphen_values = true)]
        t1: String,
        #[arg(long, allow_hyphen_values = true)]
        t2: String,
        #[arg(long, allow_hyphen_values = true)]
        t3: String,
        #[arg(long, allow_hyphen_values = true)]
        psi: String,
        /// Work in F_p instead of Q.
        #[arg(long)]
        p: Option<u64>,
    },
}

#[derive(Debug, Subcommand)]
pub enum ModuliCmd {
    Components {
        /// Diagonal of the Satake point, e.g. `l^2,l,1`.
        #[arg(long, allow_hyphen_values = true)]
        diag: Option<String>,
        #[arg(long, allow_hyphen_values = true)]
        l: String,
        /// `gl<n>` or `pgl2`.
        #[arg(long, default_value = "gl")]
        group: String,
    },
    Witness {
        #[arg(long, allow_hyphen_values = true)]
        diag: String,
        #[arg(long, allow_hyphen_values = true)]
        l: String,
        /// Nilpotent as rows separated by `;`, e.g. `0,1;0,0`.
        #[arg(long, allow_hyphen_values = true)]
        n: String,
    },
    Pgl2 {
        #[arg(long, allow_hyphen_values = true)]
        l: String,
    },
}

#[derive(Debug, Args)]
pub struct MatrixSource {
    /// Matrix file, one row per line.
    #[arg(long)]
    pub matrix: Option<PathBuf>,
    /// Matrix given inline, rows separated by `;`.
    #[arg(long, allow_hyphen_values = true, conflicts_with = "matrix")]
    pub inline: Option<String>,
}

#[derive(Debug, Subcommand)]
pub enum SlopeCmd {
    /// Fredholm series det(1 − TU) of a matrix.
    Series {
        #[command(flatten)]
        source: MatrixSource,
        #[arg(long)]
        p: u64,
        #[arg(long, default_value_t = levelraise::slope::DEFAULT_PRECISION)]
        precision: u32,
    },
    Polygon {
        /// Coefficients, constant term first.
        #[arg(long, allow_hyphen_values = true)]
        poly: Option<String>,
        #[command(flatten)]
        source: MatrixSource,
        #[arg(long)]
        p: u64,
        #[arg(long, default_value_t = levelraise::slope::DEFAULT_PRECISION)]
        precision: u32,
    },
    Factor {
        #[arg(long, allow_hyphen_values = true)]
        poly: String,
        #[arg(long)]
        p: u64,
        #[arg(long, allow_hyphen_values = true)]
        h: String,
        #[arg(long, default_value_t = levelraise::slope::DEFAULT_PRECISION)]
        precision: u32,
    },
    Decompose {
        #[command(flatten)]
        source: MatrixSource,
        #[arg(long)]
        p: u64,
        #[arg(long, allow_hyphen_values = true)]
        h: String,
        #[arg(long, default_value_t = levelraise::slope::DEFAULT_PRECISION)]
        precision: u32,
    },
}

#[derive(Debug, Subcommand)]
pub enum AnalyticCmd {
    Ihara {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        m: u32,
        #[arg(long)]
        degree: u32,
    },
    Weight {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        k: u32,
        /// Images in Q/Z of the unit group generators, comma separated.
        #[arg(long, allow_hyphen_values = true, default_value = "0")]
        chi1: String,
        #[arg(long, allow_hyphen_values = true, default_value = "0")]
        chi2: String,
        #[arg(long, allow_hyphen_values = true, default_value = "0")]
        chi3: String,
    },
}

pub struct Opts {
    pub seed: u64,
    pub budget: Option<usize>,
    pub exec: Exec,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let command = std::env::args().skip(1).collect::<Vec<_>>().join(" ");
    let opts = Opts {
        seed: cli.seed,
        budget: cli.budget,
        exec: if cli.sequential {
            Exec::Sequential
        } else {
            Exec::Parallel
        },
    };
    let mut b = report::Builder::new(command);
    let results = match cli.group {
        Group::Tree(c) => run::tree::run(c, &opts, &mut b),
        Group::Graph(c) => run::graph::run(c, &opts, &mut b),
        Group::Satake(c) => run::satake::run(c, &opts, &mut b),
        Group::Moduli(c) => run::moduli::run(c, &opts, &mut b),
        Group::Slope(c) => run::slope::run(c, &opts, &mut b),
        Group::Analytic(c) => run::analytic::run(c, &opts, &mut b),
    };
    match results {
        Ok(results) => {
            let report = b.finish(results);
            match cli.format {
                Format::Json => println!("{}", report.to_json()),
                Format::Table => print!("{}", report.to_table()),
            }
            if report.passed() {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("error: {}", e);
            ExitCode::from(2)
        }
    }
}
