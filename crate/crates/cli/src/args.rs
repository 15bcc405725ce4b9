use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(name = "pbop", version, about = "Verification suites and experiments for the truncated block operator T_m")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run the invariant suites and write a verification report.
    Verify {
        #[command(flatten)]
        common: Common,
        /// Test hook: perturb CAR generator K before checking the relations.
        #[arg(long, hide = true, value_name = "K")]
        corrupt_generator: Option<usize>,
    },
    /// Run one experiment and write its report.
    Experiment {
        #[arg(value_enum)]
        name: Experiment,
        #[command(flatten)]
        common: Common,
    },
    /// Render a cb-growth or bmo-constant report as SVG plus tidy CSV.
    Plot {
        report: PathBuf,
        /// Output directory (defaults to the report's directory).
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Experiment {
    CbGrowth,
    PbProbe,
    BoundTable,
    BmoConstant,
}

impl Experiment {
    pub fn stem(self) -> &'static str {
        match self {
            Experiment::CbGrowth => "cb-growth",
            Experiment::PbProbe => "pb-probe",
            Experiment::BoundTable => "bound-table",
            Experiment::BmoConstant => "bmo-constant",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

impl Format {
    pub fn extension(self) -> &'static str {
        match self {
            Format::Csv => "csv",
            Format::Json => "json",
        }
    }
}

#[derive(Debug, Clone, Args)]
pub struct Common {
    /// Truncation level(s), comma separated.
    #[arg(long, value_delimiter = ',')]
    pub m: Option<Vec<usize>>,
    /// Run every level 1..=M_MAX.
    #[arg(long, conflicts_with = "m")]
    pub m_max: Option<usize>,
    /// Coupling constant of the Hankel block.
    #[arg(long)]
    pub eps: Option<f64>,
    /// Target polynomial bound; sets eps = (K - 1) / c_obs in the bound table.
    #[arg(long = "K", value_name = "K")]
    pub k: Option<f64>,
    /// Maximal polynomial degree.
    #[arg(long)]
    pub degree: Option<usize>,
    /// Random polynomials per family (or per degree).
    #[arg(long)]
    pub trials: Option<usize>,
    /// Sampling grid size for the BMO estimate (power of two).
    #[arg(long)]
    pub grid: Option<usize>,
    /// Relative tolerance of the power iteration.
    #[arg(long)]
    pub tol: Option<f64>,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    /// Output directory.
    #[arg(long, default_value = ".")]
    pub out: PathBuf,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    /// Also render the report (cb-growth and bmo-constant only).
    #[arg(long)]
    pub plot: bool,
}

impl Common {
    /// `--m` if given, else `1..=--m-max`, else `default`.
    pub fn levels(&self, default: &[usize]) -> Vec<usize> {
        match (&self.m, self.m_max) {
            (Some(list), _) => list.clone(),
            (None, Some(max)) => (1..=max).collect(),
            (None, None) => default.to_vec(),
        }
    }
}
