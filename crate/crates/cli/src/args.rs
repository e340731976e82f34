use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

use markov_l2::markov::Route;
use markov_l2::Weight;

use crate::CliError;

#[derive(Debug, Parser)]
#[command(name = "markov-l2", version, about = "Sharp L2 Markov constants for classical weights")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Constants for single cells or small grids.
    Compute(ComputeArgs),
    /// Grids of constants, including the second-derivative Laguerre preset.
    Table(TableArgs),
    /// Series behind the three constant plots.
    FigureData(FigureArgs),
    /// Exact constant next to every applicable bound and estimate.
    Bounds(BoundsArgs),
    /// Independent quadrature and power-iteration checks.
    Verify(VerifyArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Family {
    Hermite,
    Laguerre,
    Jacobi,
    /// Jacobi with `alpha = beta`, taken from `--alpha`.
    Gegenbauer,
}

#[derive(Debug, Clone, Args)]
pub struct WeightArgs {
    #[arg(long, value_enum)]
    pub weight: Family,
    /// Laguerre exponent.
    #[arg(long, allow_hyphen_values = true)]
    pub s: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub alpha: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub beta: Option<f64>,
}

impl WeightArgs {
    /// Weight for one Laguerre exponent (`s` overrides `--s`).
    pub fn weight_with_s(&self, s: Option<f64>) -> Result<Weight, CliError> {
        let s = s.or(self.s);
        let need = |v: Option<f64>, name: &str| {
            v.ok_or_else(|| CliError::Usage(format!("--weight {} needs --{name}", self.family_name())))
        };
        let reject = |v: Option<f64>, name: &str| match v {
            Some(_) => Err(CliError::Usage(format!("--{name} does not apply to --weight {}", self.family_name()))),
            None => Ok(()),
        };
        let w = match self.weight {
            Family::Hermite => {
                reject(s, "s")?;
                reject(self.alpha, "alpha")?;
                reject(self.beta, "beta")?;
                Weight::Hermite
            }
            Family::Laguerre => {
                reject(self.alpha, "alpha")?;
                reject(self.beta, "beta")?;
                Weight::laguerre(need(s, "s")?)?
            }
            Family::Jacobi => {
                reject(s, "s")?;
                Weight::jacobi(need(self.alpha, "alpha")?, need(self.beta, "beta")?)?
            }
            Family::Gegenbauer => {
                reject(s, "s")?;
                reject(self.beta, "beta")?;
                Weight::gegenbauer(need(self.alpha, "alpha")?)?
            }
        };
        Ok(w)
    }

    fn family_name(&self) -> &'static str {
        match self.weight {
            Family::Hermite => "hermite",
            Family::Laguerre => "laguerre",
            Family::Jacobi => "jacobi",
            Family::Gegenbauer => "gegenbauer",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, ValueEnum)]
pub enum Format {
    #[default]
    Csv,
    Json,
}

#[derive(Debug, Clone, Args)]
pub struct OutputArgs {
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    /// Write to a file instead of stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct GridArgs {
    #[arg(long)]
    pub n: Option<usize>,
    /// Comma-separated degrees.
    #[arg(long, value_delimiter = ',')]
    pub n_list: Option<Vec<usize>>,
    /// Comma-separated Laguerre exponents.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub s_list: Option<Vec<f64>>,
    #[arg(long, default_value_t = 1)]
    pub k: usize,
}

impl GridArgs {
    pub fn degrees(&self) -> Result<Vec<usize>, CliError> {
        match (&self.n, &self.n_list) {
            (Some(n), None) => Ok(vec![*n]),
            (None, Some(l)) if !l.is_empty() => Ok(l.clone()),
            (Some(_), Some(_)) => Err(CliError::Usage("give --n or --n-list, not both".into())),
            _ => Err(CliError::Usage("missing --n or --n-list".into())),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, ValueEnum)]
pub enum RouteArg {
    #[default]
    Auto,
    B,
    C,
}

impl From<RouteArg> for Route {
    fn from(r: RouteArg) -> Self {
        match r {
            RouteArg::Auto => Route::Auto,
            RouteArg::B => Route::B,
            RouteArg::C => Route::C,
        }
    }
}

#[derive(Debug, Clone, Args)]
pub struct ComputeArgs {
    #[command(flatten)]
    pub weight: WeightArgs,
    #[command(flatten)]
    pub grid: GridArgs,
    #[arg(long, value_enum, default_value_t = RouteArg::Auto)]
    pub route: RouteArg,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Preset {
    /// `M_{n,2}(s)`, `n` in 4..10, 20, 30, 40, 50, 100 and `s` in 0, -1/2, 1, 2.
    Table2,
}

#[derive(Debug, Clone, Args)]
pub struct TableArgs {
    #[arg(long, value_enum)]
    pub preset: Option<Preset>,
    #[arg(long, value_enum)]
    pub weight: Option<Family>,
    #[arg(long, allow_hyphen_values = true)]
    pub s: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub alpha: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub beta: Option<f64>,
    #[command(flatten)]
    pub grid: GridArgs,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Args)]
pub struct FigureArgs {
    /// Figure number: 1, 2 or 3.
    #[arg(long)]
    pub figure: u8,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Args)]
pub struct BoundsArgs {
    #[command(flatten)]
    pub weight: WeightArgs,
    #[arg(long)]
    pub n: usize,
    /// Restricted class of polynomials with nonnegative coefficients (Laguerre).
    #[arg(long)]
    pub restricted: bool,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Args)]
pub struct VerifyArgs {
    /// Second-order inequality at the classical polynomial and random ones.
    #[arg(long, conflicts_with = "rayleigh")]
    pub am_check: bool,
    /// Quadrature quotient of the extremal polynomial.
    #[arg(long)]
    pub rayleigh: bool,
    #[arg(long, value_enum, requires = "n")]
    pub weight: Option<Family>,
    #[arg(long, allow_hyphen_values = true)]
    pub s: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub alpha: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub beta: Option<f64>,
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long, default_value_t = 1)]
    pub k: usize,
    /// Random polynomials per cell.
    #[arg(long, default_value_t = 200)]
    pub samples: usize,
    #[command(flatten)]
    pub output: OutputArgs,
}

impl VerifyArgs {
    pub fn weight_args(&self) -> Option<WeightArgs> {
        self.weight.map(|weight| WeightArgs { weight, s: self.s, alpha: self.alpha, beta: self.beta })
    }
}

impl TableArgs {
    pub fn weight_args(&self) -> WeightArgs {
        WeightArgs {
            weight: self.weight.unwrap_or(Family::Laguerre),
            s: self.s,
            alpha: self.alpha,
            beta: self.beta,
        }
    }
}
