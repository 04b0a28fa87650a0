use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser, Debug)]
#[command(
    name = "walters",
    version,
    about = "Involution kernels, dual potentials and Ruelle operators for Walters potentials"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Potential files
    #[command(subcommand)]
    Potential(PotentialCmd),
    /// Involution kernel values
    #[command(subcommand)]
    Kernel(KernelCmd),
    /// Dual potentials
    #[command(subcommand)]
    Dual(DualCmd),
    /// Symmetry relative to a base
    #[command(subcommand)]
    Symmetry(SymmetryCmd),
    /// Twist conditions
    #[command(subcommand)]
    Twist(TwistCmd),
    /// Normalization and dual obstructions
    #[command(subcommand)]
    Normalize(NormalizeCmd),
    /// Cylinder-discretized Ruelle operator
    #[command(subcommand)]
    Ruelle(RuelleCmd),
    /// Run every check
    #[command(subcommand)]
    Verify(VerifyCmd),
}

#[derive(Args, Debug, Clone)]
pub struct PotentialArg {
    /// Potential file (JSON)
    #[arg(long, short = 'p')]
    pub potential: PathBuf,
}

#[derive(Args, Debug, Clone)]
pub struct BaseArg {
    /// Kernel base: 0^inf, 1^inf, 0^a1, 1^a0, or a point such as "0^3 1"
    #[arg(long, default_value = "0^inf")]
    pub base: String,
    /// Run length for the 0^a1 and 1^a0 bases
    #[arg(long)]
    pub alpha: Option<usize>,
}

#[derive(Args, Debug, Clone)]
pub struct TolArg {
    /// Absolute tolerance, within [1e-15, 1e-2]
    #[arg(long, default_value_t = 1e-10)]
    pub tol: f64,
}

#[derive(Subcommand, Debug)]
pub enum PotentialCmd {
    /// Parse, validate and check regularity
    Validate {
        #[command(flatten)]
        potential: PotentialArg,
    },
}

#[derive(Subcommand, Debug)]
pub enum KernelCmd {
    /// W(y|x) with error bound and formula cell
    Eval {
        #[command(flatten)]
        potential: PotentialArg,
        #[command(flatten)]
        base: BaseArg,
        /// Past coordinates y, e.g. "1^2 0^inf"
        #[arg(long)]
        y: String,
        /// Future coordinates x
        #[arg(long)]
        x: String,
        #[command(flatten)]
        tol: TolArg,
    },
    /// CSV grid over leading runs of length <= depth
    Table {
        #[command(flatten)]
        potential: PotentialArg,
        #[command(flatten)]
        base: BaseArg,
        #[arg(long, default_value_t = 4)]
        depth: usize,
        #[command(flatten)]
        tol: TolArg,
    },
}

#[derive(Subcommand, Debug)]
pub enum DualCmd {
    /// Dual sequences as a potential file plus a value table
    Derive {
        #[command(flatten)]
        potential: PotentialArg,
        #[command(flatten)]
        base: BaseArg,
        /// Terms kept when a dual sequence has no closed form
        #[arg(long, default_value_t = 64)]
        terms: usize,
        /// Write the dual potential file here
        #[arg(long, short = 'o')]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
        #[command(flatten)]
        tol: TolArg,
    },
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum Expectation {
    Symmetric,
    Asymmetric,
}

#[derive(Subcommand, Debug)]
pub enum SymmetryCmd {
    /// Condition system and numeric comparison of A* and A
    Check {
        #[command(flatten)]
        potential: PotentialArg,
        #[command(flatten)]
        base: BaseArg,
        #[arg(long, default_value_t = 12)]
        nmax: usize,
        /// Exit with status 1 unless the verdict matches
        #[arg(long, value_enum)]
        expect: Option<Expectation>,
        #[arg(long, default_value_t = 1e-9)]
        tol: f64,
    },
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum PassFail {
    Pass,
    Fail,
}

#[derive(Subcommand, Debug)]
pub enum TwistCmd {
    /// Hypotheses, exhaustive relaxed-twist check and the strict configuration
    Check {
        #[command(flatten)]
        potential: PotentialArg,
        #[command(flatten)]
        base: BaseArg,
        #[arg(long, default_value_t = 5)]
        depth: usize,
        /// Exit with status 1 unless the exhaustive check matches
        #[arg(long, value_enum)]
        expect: Option<PassFail>,
    },
}

#[derive(Subcommand, Debug)]
pub enum NormalizeCmd {
    /// Normalization identities and, when normalized, the dual obstructions
    Check {
        #[command(flatten)]
        potential: PotentialArg,
        #[arg(long, default_value_t = 2)]
        alpha: usize,
        #[arg(long, default_value_t = 12)]
        nmax: usize,
        #[command(flatten)]
        tol: TolArg,
    },
}

#[derive(Subcommand, Debug)]
pub enum RuelleCmd {
    /// Eigenvalue, pressure, entropy and equilibrium masses
    Solve {
        #[command(flatten)]
        potential: PotentialArg,
        #[arg(long, default_value_t = 8)]
        depth: usize,
        #[arg(long, default_value_t = 1e-12)]
        tol: f64,
        #[arg(long, default_value_t = 100_000)]
        max_iters: usize,
        /// Write depth-k cylinder masses as CSV
        #[arg(long)]
        masses: Option<PathBuf>,
    },
}

#[derive(Subcommand, Debug)]
pub enum VerifyCmd {
    /// Pass/fail table of every residual check
    All {
        #[command(flatten)]
        potential: PotentialArg,
        #[arg(long, default_value_t = 8)]
        depth: usize,
        #[arg(long, default_value_t = 2)]
        alpha: usize,
        #[arg(long, default_value_t = 6)]
        word_depth: usize,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Json,
    Text,
}
