use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser, Debug)]
#[command(
    name = "mathieu",
    version,
    about = "Gaussian-weighted Mathieu series: direct sums, large-a expansions, coefficient tables"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    /// Decimal digits of working precision (at least 16).
    #[arg(long, global = true, default_value_t = 50)]
    pub digits: u32,

    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    pub format: Format,

    /// Write to this file instead of stdout.
    #[arg(long, short, global = true)]
    pub output: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Compare one expansion against the direct sum.
    Eval(EvalArgs),
    /// Relative errors of J2 against S-hat at lambda = 2, a = 3.
    Table1,
    /// Evaluate over a grid of a, lambda and r_max values.
    Sweep(SweepArgs),
    /// Dump an exact coefficient family.
    Coeffs(CoeffArgs),
    /// Run the invariant suite; exit status 2 on any failure.
    Verify(VerifyArgs),
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Method {
    /// Pick from the parameter class.
    Auto,
    /// Leading term plus the algebraic series in a^-2.
    Algebraic,
    /// Exact exponential part by Laplace-type integrals (even gamma, real a).
    Theorem1,
    /// Exponential part split into J1 and the asymptotic J2 (even gamma, integer mu).
    Theorem2,
    /// Double-pole expansion for gamma = -1.
    GammaMinus1,
}

impl Method {
    pub fn name(self) -> &'static str {
        match self {
            Method::Auto => "auto",
            Method::Algebraic => "algebraic",
            Method::Theorem1 => "theorem1",
            Method::Theorem2 => "theorem2",
            Method::GammaMinus1 => "gamma-minus1",
        }
    }
}

#[derive(Args, Debug, Clone)]
pub struct SeriesArgs {
    #[arg(long, default_value = "1")]
    pub mu: String,
    #[arg(long, default_value = "0", allow_hyphen_values = true)]
    pub gamma: String,
    #[arg(long, default_value = "2")]
    pub lambda: String,
    #[arg(long, default_value = "3")]
    pub a: String,
    /// Imaginary part of a (complex a must satisfy |arg a| < pi/4).
    #[arg(long, allow_hyphen_values = true)]
    pub a_imag: Option<String>,
}

#[derive(Args, Debug, Clone)]
pub struct Truncations {
    #[arg(long, value_enum, default_value_t = Method::Auto)]
    pub method: Method,
    /// Last algebraic index, or last k-block of the exponential sums.
    #[arg(long)]
    pub k_max: Option<usize>,
    /// Last J2 index (default: just before the smallest term).
    #[arg(long)]
    pub r_max: Option<usize>,
    /// Inner cut-off for p < 0 in the integral form.
    #[arg(long)]
    pub j_max: Option<usize>,
    /// Record wall time (makes output non-reproducible).
    #[arg(long)]
    pub timing: bool,
}

#[derive(Args, Debug)]
pub struct EvalArgs {
    #[command(flatten)]
    pub series: SeriesArgs,
    #[command(flatten)]
    pub trunc: Truncations,
}

#[derive(Args, Debug)]
pub struct SweepArgs {
    #[arg(long, default_value = "1")]
    pub mu: String,
    #[arg(long, default_value = "0", allow_hyphen_values = true)]
    pub gamma: String,
    #[arg(long, value_delimiter = ',', default_value = "2")]
    pub lambda: Vec<String>,
    #[arg(long, value_delimiter = ',', default_value = "3")]
    pub a: Vec<String>,
    /// Comma-separated J2 truncations; each one is a grid axis value.
    #[arg(long = "r-max", value_delimiter = ',')]
    pub r_max: Vec<usize>,
    #[arg(long, value_enum, default_value_t = Method::Auto)]
    pub method: Method,
    #[arg(long)]
    pub k_max: Option<usize>,
    #[arg(long)]
    pub j_max: Option<usize>,
    #[arg(long)]
    pub timing: bool,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Family {
    #[value(name = "c")]
    C,
    #[value(name = "chat")]
    CHat,
    #[value(name = "C")]
    BigC,
    #[value(name = "A")]
    A,
    #[value(name = "B")]
    B,
    #[value(name = "R")]
    R,
    #[value(name = "sigma")]
    Sigma,
}

#[derive(Args, Debug)]
pub struct CoeffArgs {
    #[arg(long, value_enum)]
    pub family: Family,
    #[arg(long, default_value_t = 1)]
    pub m: i64,
    #[arg(long, default_value_t = 0, allow_hyphen_values = true)]
    pub p: i64,
    /// q = -p for the residue family.
    #[arg(long, default_value_t = 2)]
    pub q: u32,
    /// Highest index to list.
    #[arg(long, default_value_t = 3)]
    pub order: u32,
    /// mu for the residue family: a decimal or a fraction such as 7/10.
    #[arg(long, default_value = "0")]
    pub mu: String,
    /// lambda at which the polynomials are also evaluated.
    #[arg(long, default_value = "2")]
    pub lambda: String,
    #[arg(long, default_value = "3")]
    pub a: String,
}

#[derive(Args, Debug)]
pub struct VerifyArgs {
    /// Perturb one coefficient to check that failures are caught.
    #[arg(long, hide = true)]
    pub perturb: bool,
}
