//! `spherecap`: thresholds, tables and verification for the
//! amplitude-constrained Gaussian channel with a single-sphere input.
//!
//! Every output starts with one `#` metadata line (tool version, engine
//! settings, seed) followed by CSV. Exit codes: 0 success, 1 numeric or
//! verification failure, 2 usage error.

mod commands;
mod format;

use std::ops::RangeInclusive;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use spherecap::expect::{ExpectationEngine, McSpec, QuadratureSpec};

pub const MAX_N: usize = 64;

#[derive(Debug, Parser)]
#[command(
    name = "spherecap",
    version,
    about = "Single-sphere capacity thresholds for the amplitude-constrained Gaussian channel"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Args)]
pub struct Common {
    /// Expectation engine.
    #[arg(long, value_enum, default_value_t = MethodArg::Quad, global = true)]
    pub method: MethodArg,
    /// Monte Carlo seed (required with `--method mc|both`).
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Monte Carlo sample count.
    #[arg(long, default_value_t = 100_000, global = true)]
    pub samples: usize,
    /// Relative tolerance of the quadrature engine.
    #[arg(long, global = true)]
    pub rel_tol: Option<f64>,
    /// Unit of information quantities (thresholds are unit-free).
    #[arg(long, value_enum, default_value_t = Base::Nats, global = true)]
    pub base: Base,
    /// Output file (default: standard output).
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MethodArg {
    Quad,
    Mc,
    Both,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Base {
    Nats,
    Bits,
}

impl Base {
    pub fn name(self) -> &'static str {
        match self {
            Base::Nats => "nats",
            Base::Bits => "bits",
        }
    }

    /// Divisor converting nats to this unit.
    pub fn scale(self) -> f64 {
        match self {
            Base::Nats => 1.0,
            Base::Bits => std::f64::consts::LN_2,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Kind {
    /// Capacity threshold from the SNR-path condition.
    Capacity,
    /// Capacity threshold from the boxcar-law condition.
    Boxcar,
    /// `n = 1` threshold from the scalar tanh condition.
    Tanh,
    /// Single-sphere threshold of the least favourable prior.
    Mmse,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum LevelArg {
    Fast,
    Full,
}

#[derive(Debug, Args)]
pub struct Dims {
    /// A single dimension.
    #[arg(long, conflicts_with = "n_range")]
    pub n: Option<usize>,
    /// Inclusive dimension range `A..B`.
    #[arg(long, value_name = "A..B")]
    pub n_range: Option<String>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Solve one threshold.
    Solve {
        #[arg(long)]
        n: usize,
        #[arg(long, value_enum, default_value_t = Kind::Capacity)]
        kind: Kind,
    },
    /// Capacity thresholds over a range of dimensions.
    Table {
        #[command(flatten)]
        dims: Dims,
    },
    /// Capacity and least-favourable-prior thresholds side by side.
    MmseTable {
        #[command(flatten)]
        dims: Dims,
    },
    /// Information density against the input norm.
    Profile {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        radius: f64,
        /// Grid points on `[0, R]`, endpoints included.
        #[arg(long, default_value_t = 64)]
        grid: usize,
    },
    /// MMSE of the sphere and of the power-matched Gaussian input against `R`.
    MmseCurve {
        #[arg(long)]
        n: usize,
        /// Radii (comma separated); default is `--grid` points on `(0, 3 sqrt(n)]`.
        #[arg(long, value_delimiter = ',')]
        radius: Vec<f64>,
        #[arg(long, default_value_t = 64)]
        grid: usize,
    },
    /// Run the verification suite.
    Verify {
        #[arg(value_enum, default_value_t = LevelArg::Fast)]
        level: LevelArg,
    },
    /// Dimension-free constants.
    Asymptotic,
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("usage: {0}")]
    Usage(String),
    #[error(transparent)]
    Numeric(#[from] spherecap::Error),
    /// The output was written but some rows or checks failed.
    #[error("{0}")]
    Failed(String),
    #[error("i/o: {0}")]
    Io(#[from] std::io::Error),
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 2,
            _ => 1,
        }
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;

pub fn usage<T>(msg: impl Into<String>) -> CliResult<T> {
    Err(CliError::Usage(msg.into()))
}

/// `A..B` (inclusive), both within `1..=MAX_N`.
pub fn parse_range(s: &str) -> CliResult<RangeInclusive<usize>> {
    let (a, b) = s
        .split_once("..=")
        .or_else(|| s.split_once(".."))
        .ok_or_else(|| CliError::Usage(format!("--n-range expects A..B, got {s:?}")))?;
    let parse = |t: &str| {
        t.trim()
            .parse::<usize>()
            .map_err(|_| CliError::Usage(format!("--n-range bound {t:?} is not a dimension")))
    };
    let (a, b) = (parse(a)?, parse(b)?);
    if a > b {
        return usage(format!("--n-range {s} is empty"));
    }
    check_n(a)?;
    check_n(b)?;
    Ok(a..=b)
}

pub fn check_n(n: usize) -> CliResult<usize> {
    if (1..=MAX_N).contains(&n) {
        Ok(n)
    } else {
        usage(format!("dimension must be in 1..={MAX_N}, got {n}"))
    }
}

impl Dims {
    pub fn range(&self) -> CliResult<RangeInclusive<usize>> {
        match (self.n, &self.n_range) {
            (Some(n), None) => check_n(n).map(|n| n..=n),
            (None, Some(r)) => parse_range(r),
            (None, None) => usage("give --n or --n-range"),
            (Some(_), Some(_)) => usage("--n and --n-range are exclusive"),
        }
    }
}

/// The engines requested by `--method`, labelled.
pub fn engines(common: &Common) -> CliResult<Vec<(&'static str, ExpectationEngine)>> {
    let mut quad = QuadratureSpec::default();
    if let Some(t) = common.rel_tol {
        if !(t > 0.0 && t < 1.0) {
            return usage(format!("--rel-tol must be in (0, 1), got {t}"));
        }
        quad.rel_tol = t;
    }
    let quad = || ExpectationEngine::quadrature(quad).map_err(|e| CliError::Usage(e.to_string()));
    let mc = || -> CliResult<ExpectationEngine> {
        let seed = common
            .seed
            .ok_or_else(|| CliError::Usage("--method mc needs --seed".into()))?;
        let spec = McSpec::new(seed, common.samples).map_err(|e| CliError::Usage(e.to_string()))?;
        ExpectationEngine::monte_carlo(spec).map_err(|e| CliError::Usage(e.to_string()))
    };
    Ok(match common.method {
        MethodArg::Quad => vec![("quad", quad()?)],
        MethodArg::Mc => vec![("mc", mc()?)],
        MethodArg::Both => vec![("quad", quad()?), ("mc", mc()?)],
    })
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        // help and version exit 0, malformed arguments exit 2
        Err(e) => e.exit(),
    };
    match commands::run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("spherecap: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ranges() {
        assert_eq!(parse_range("1..3").unwrap(), 1..=3);
        assert_eq!(parse_range("4..=4").unwrap(), 4..=4);
        assert!(matches!(parse_range("3..1"), Err(CliError::Usage(_))));
        assert!(matches!(parse_range("0..2"), Err(CliError::Usage(_))));
        assert!(matches!(parse_range("1..65"), Err(CliError::Usage(_))));
        assert!(matches!(parse_range("1-3"), Err(CliError::Usage(_))));
    }

    #[test]
    fn cli_definition_is_consistent() {
        use clap::CommandFactory;
        Cli::command().debug_assert();
    }
}
