use clap::{Parser, Subcommand, ValueEnum};

#[derive(Parser, Debug)]
#[command(name = "ejasym", version, about = "Asymptotics of S_p(a; w) = sum exp(-a n^p) / n^w")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Evaluate the expansion at one point and compare with direct summation.
    Eval(EvalArgs),
    /// Print the coefficients c_1 .. c_M.
    Coeffs(CoeffsArgs),
    /// Reproduce one of the three tables.
    Table(TableArgs),
    /// Run an identity check suite.
    Verify(VerifyArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Markdown,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Suite {
    /// Poisson-Jacobi transformation
    Pj,
    /// Alternating series identity
    Alt,
    /// Functional equation of zeta and its values at negative odd integers
    Zeta,
    /// Recurrence and reflection formula of gamma
    Gamma,
    /// Agreement of the complex and real forms of the exponential expansions
    Thm12,
}

#[derive(clap::Args, Debug)]
pub struct EvalArgs {
    #[arg(long)]
    pub p: String,
    #[arg(long)]
    pub w: String,
    /// Real or complex (`re+imi`) value with Re a > 0.
    #[arg(long, allow_hyphen_values = true)]
    pub a: String,
    #[arg(long, default_value_t = 30)]
    pub digits: u32,
    /// Fixed number of terms in each exponential expansion (default: optimal truncation).
    #[arg(long = "count", short = 'M')]
    pub count: Option<usize>,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
}

#[derive(clap::Args, Debug)]
pub struct CoeffsArgs {
    #[arg(long)]
    pub p: String,
    #[arg(long)]
    pub w: String,
    #[arg(long, allow_hyphen_values = true)]
    pub a: Option<String>,
    #[arg(long, default_value_t = 30)]
    pub digits: u32,
    #[arg(long = "count", short = 'M', default_value_t = 8)]
    pub count: usize,
    #[arg(long, value_enum, default_value_t = Format::Markdown)]
    pub format: Format,
}

#[derive(clap::Args, Debug)]
pub struct TableArgs {
    #[arg(long, value_parser = clap::value_parser!(u8).range(1..=3))]
    pub id: u8,
    /// Minimum working digits; each row raises this as needed.
    #[arg(long, default_value_t = 30)]
    pub digits: u32,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    #[arg(long, allow_hyphen_values = true)]
    pub a: Option<String>,
    #[arg(long)]
    pub p: Option<String>,
    #[arg(long)]
    pub w: Option<String>,
}

#[derive(clap::Args, Debug)]
pub struct VerifyArgs {
    #[arg(long, value_enum)]
    pub suite: Suite,
    #[arg(long)]
    pub p: Option<String>,
    #[arg(long)]
    pub w: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub a: Option<String>,
    #[arg(long, default_value_t = 50)]
    pub digits: u32,
    /// Number of terms for the thm12 suite.
    #[arg(long = "count", short = 'M', default_value_t = 8)]
    pub count: usize,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
}
