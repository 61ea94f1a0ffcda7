//! The `kmloop` command line: argument types, configuration, report
//! rendering and the command implementations.
//!
//! Exit codes: 0 success, 1 property violation (a failed audit, a
//! non-integrable form), 2 input error, 3 numeric degeneracy.

pub mod commands;
pub mod config;
pub mod report;

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

pub use commands::{run, Outcome};
pub use config::RunConfig;
pub use report::{Format, Report, Table};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}: {1}")]
    Io(String, #[source] std::io::Error),
    #[error("{0}")]
    Input(String),
    #[error(transparent)]
    Core(#[from] kmloop_core::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        use kmloop_core::Error as E;
        match self {
            CliError::Io(..) | CliError::Input(_) => 2,
            CliError::Core(e) => match e {
                E::InvariantViolated { .. } | E::MonodromyObstruction { .. } => 1,
                E::FitResidual { .. }
                | E::Truncation { .. }
                | E::Singular
                | E::Branch(_)
                | E::NonSemisimple { .. }
                | E::NotCertified
                | E::NonConvergence { .. } => 3,
                _ => 2,
            },
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "kmloop", version, about = "Loop algebra, loop group and Kac-Moody computations")]
pub struct Cli {
    /// TOML configuration file.
    #[arg(long, env = "KMLOOP_CONFIG", global = true)]
    pub config: Option<PathBuf>,

    /// `standard` or `paper_literal`; overrides the config file.
    #[arg(long, global = true)]
    pub convention: Option<String>,

    #[arg(long, value_enum, default_value = "json", global = true)]
    pub format: Format,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Graded sup, coefficient and boundary L¹ norms of an element.
    Norms {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long, default_value_t = 0)]
        n_from: u32,
        #[arg(long, default_value_t = 4)]
        n_to: u32,
    },
    /// Audit the tame estimates of d/dz or of ad.
    TameCheck(TameArgs),
    /// Central cocycle of two loops.
    Cocycle {
        #[arg(long)]
        x: PathBuf,
        #[arg(long)]
        y: PathBuf,
    },
    /// Kac-Moody bracket.
    Bracket {
        #[arg(long)]
        x: PathBuf,
        #[arg(long)]
        y: PathBuf,
    },
    /// Adjoint action of a group element (`--x`) on a Kac-Moody vector (`--y`).
    Ad {
        #[arg(long)]
        x: PathBuf,
        #[arg(long)]
        y: PathBuf,
    },
    /// Gauge a compact connection to the alcove.
    GaugeNormalize {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long, default_value_t = 4096)]
        steps: usize,
    },
    /// Transport of `dg = g·α dz` around the unit circle.
    Monodromy {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long, default_value_t = 1024)]
        steps: usize,
    },
    /// Solve `g⁻¹dg = α dz` on the unit circle.
    Integrate {
        #[arg(long = "in")]
        input: PathBuf,
        /// Initial value `g(1)` as a matrix file; identity if absent.
        #[arg(long)]
        g0: Option<PathBuf>,
        #[arg(long, default_value_t = 256)]
        steps: usize,
        /// Refit the samples on this window.
        #[arg(long, allow_hyphen_values = true, requires = "k_max")]
        k_min: Option<i32>,
        #[arg(long, allow_hyphen_values = true, requires = "k_min")]
        k_max: Option<i32>,
    },
    /// Whether an SL(2, ℂ) matrix is an exponential.
    ExpImage {
        #[arg(long = "in")]
        input: PathBuf,
    },
    /// Fréchet distance enclosure.
    Metric {
        #[arg(long)]
        x: PathBuf,
        #[arg(long)]
        y: PathBuf,
        #[arg(long, default_value_t = 8)]
        n_terms: u32,
    },
    /// Emit random elements, or the oracle-minted example values.
    Fixtures {
        #[command(flatten)]
        spec: FixtureArgs,
        #[arg(long)]
        mint_examples: bool,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum TameKind {
    Deriv,
    Ad,
}

#[derive(Debug, Args)]
pub struct TameArgs {
    #[arg(long, value_enum)]
    pub kind: TameKind,
    /// Element for `deriv`; random fixtures when absent.
    #[arg(long = "in")]
    pub input: Option<PathBuf>,
    /// Pair for `ad`; random fixtures when absent.
    #[arg(long, requires = "y")]
    pub x: Option<PathBuf>,
    #[arg(long, requires = "x")]
    pub y: Option<PathBuf>,
    #[arg(long, default_value_t = 0)]
    pub n_from: u32,
    #[arg(long, default_value_t = 4)]
    pub n_to: u32,
    /// Multiplies the proven constant; values below 1 must produce violations.
    #[arg(long, default_value_t = 1.0)]
    pub constant_scale: f64,
    #[command(flatten)]
    pub fixture: FixtureArgs,
}

/// Random fixture parameters. The stream is ChaCha8 seeded by `--seed`.
#[derive(Clone, Debug, Args)]
pub struct FixtureArgs {
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 1)]
    pub count: usize,
    /// Matrix size `n` of `sl(n)`.
    #[arg(long, default_value_t = 2)]
    pub dim: usize,
    #[arg(long, default_value_t = -3, allow_hyphen_values = true)]
    pub k_min: i32,
    #[arg(long, default_value_t = 3, allow_hyphen_values = true)]
    pub k_max: i32,
    #[arg(long, default_value_t = 1.0)]
    pub scale: f64,
    #[arg(long)]
    pub twist: Option<u32>,
    #[arg(long)]
    pub real: bool,
}
