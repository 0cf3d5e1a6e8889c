use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

/// Decide and certify conformal rigidity of finite connected graphs.
#[derive(Debug, Parser)]
#[command(name = "crg", version)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run the certification cascade at both ends of the spectrum.
    Check(CheckArgs),
    /// Export the canonical embedding on one eigenspace.
    Embed(EmbedArgs),
    /// Verdicts for the circulant family Cay(Z_3n, {±1, ±(n-1)}).
    Family(FamilyArgs),
    /// Laplacian eigenvalues with multiplicities.
    Spectrum(SpectrumArgs),
}

#[derive(Debug, Args)]
#[group(required = true, multiple = false)]
pub struct InputArgs {
    /// Named graph, e.g. petersen, hoffman, cycle_7, complete_bipartite_3_4.
    #[arg(long, value_name = "NAME")]
    pub catalog: Option<String>,
    /// File holding one graph6 string.
    #[arg(long, value_name = "FILE")]
    pub graph6: Option<PathBuf>,
    /// Edge-list file: an `n m` header, then one `i j` pair per line.
    #[arg(long, value_name = "FILE")]
    pub edges: Option<PathBuf>,
    /// Circulant Cay(Z_N, ±S), e.g. `--circulant 18 1,5`.
    #[arg(long, num_args = 2, value_names = ["N", "S"])]
    pub circulant: Option<Vec<String>>,
    /// Abelian Cayley graph: group orders then generators, e.g.
    /// `--cayley 4,4 1,0 0,1 1,1`. Generators are closed under negation.
    #[arg(long, num_args = 2.., value_names = ["ORDERS", "GEN"])]
    pub cayley: Option<Vec<String>>,
}

#[derive(Debug, Args)]
pub struct OutputArgs {
    /// Emit JSON instead of text.
    #[arg(long)]
    pub json: bool,
}

#[derive(Debug, Args)]
pub struct CheckArgs {
    #[command(flatten)]
    pub input: InputArgs,
    /// Automorphism generators, one permutation per line (images of 0..n-1).
    #[arg(long, value_name = "FILE")]
    pub gens: Option<PathBuf>,
    /// Eigenvalue grouping tolerance (default: scaled machine precision).
    #[arg(long, value_name = "X")]
    pub tol_group: Option<f64>,
    /// Relative edge-isometry tolerance.
    #[arg(long, value_name = "X", default_value_t = 1e-7)]
    pub tol_iso: f64,
    /// SDP feasibility tolerance.
    #[arg(long, value_name = "X", default_value_t = 1e-9)]
    pub tol_feas: f64,
    /// Random falsifier trials per end.
    #[arg(long, value_name = "N", default_value_t = 1000)]
    pub trials: usize,
    /// Subgradient steps per end.
    #[arg(long, value_name = "N", default_value_t = 500)]
    pub steps: usize,
    /// Falsifier seed; the CRG_SEED environment variable takes precedence.
    #[arg(long, value_name = "N", default_value_t = 0)]
    pub seed: u64,
    /// Comma-separated stages to skip: character-lp, edge-transitive, walk1,
    /// canonical, symmetrized-sdp, trivial-sdp, falsify.
    #[arg(long, value_name = "LIST", value_delimiter = ',')]
    pub stage_skip: Vec<String>,
    /// Run on one thread.
    #[arg(long)]
    pub sequential: bool,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct EmbedArgs {
    #[command(flatten)]
    pub input: InputArgs,
    /// Eigenspace: `lambda2`, `lambdamax` or a numeric eigenvalue.
    #[arg(long, value_name = "WHICH", default_value = "lambda2")]
    pub at: String,
    /// Eigenvalue grouping tolerance.
    #[arg(long, value_name = "X")]
    pub tol_group: Option<f64>,
    /// Relative edge-isometry tolerance for the diagnostics.
    #[arg(long, value_name = "X", default_value_t = 1e-7)]
    pub tol_iso: f64,
    /// Write the CSV here instead of stdout.
    #[arg(long, short, value_name = "FILE")]
    pub out: Option<PathBuf>,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct FamilyArgs {
    /// First n (at least 6).
    #[arg(long, default_value_t = 6)]
    pub from: u64,
    /// Last n (at most 64).
    #[arg(long, default_value_t = 12)]
    pub to: u64,
    /// Random falsifier trials per end, used only if certification fails.
    #[arg(long, value_name = "N", default_value_t = 200)]
    pub trials: usize,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct SpectrumArgs {
    #[command(flatten)]
    pub input: InputArgs,
    /// Eigenvalue grouping tolerance.
    #[arg(long, value_name = "X")]
    pub tol_group: Option<f64>,
    #[command(flatten)]
    pub output: OutputArgs,
}
