//! Command-line front end for `qhm-core`: construct, verify, convert and
//! classify objects stored as JSON documents.

mod commands;
pub mod document;

use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use thiserror::Error;

pub use commands::run;
pub use document::{Kind, ObjectDocument};

#[derive(Debug, Error)]
pub enum CliError {
    /// Malformed input or an impossible request. Exit code 2.
    #[error("{0}")]
    Format(String),
    #[error("cannot access {path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    /// The input was read but fails a mathematical check. Exit code 1.
    #[error("{0}")]
    Rejected(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Rejected(_) => 1,
            CliError::Format(_) | CliError::Io { .. } => 2,
        }
    }
}

impl From<qhm_core::Error> for CliError {
    fn from(e: qhm_core::Error) -> Self {
        CliError::Rejected(e.to_string())
    }
}

/// Text for stdout (or `--out`) together with the exit code.
#[derive(Debug)]
pub struct Output {
    pub text: String,
    pub exit_code: i32,
    /// Extra line for stderr.
    pub diagnostic: Option<String>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
}

#[derive(Debug, Parser)]
#[command(name = "qhm", version, about = "Quadratic harmonic morphisms, Clifford systems and O-systems")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// Write the result here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Seed for sample points.
    #[arg(long, global = true, env = "QHM_SEED", default_value_t = 0)]
    pub seed: u64,
    /// Number of sample points for sampled checks.
    #[arg(long, global = true, default_value_t = 64)]
    pub samples: usize,
    /// Tolerance for matrix identities in float mode.
    #[arg(long, global = true, default_value_t = 1e-9)]
    pub tol: f64,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Print the decomposition m = (2r+1)·2^(c+4d) and σ(m) = 2^c + 8d.
    Sigma { m: usize },
    /// Build an object from the library's constructions.
    Construct {
        #[arg(value_enum)]
        kind: Kind,
        /// clifford: irreducible system with n+1 members; osystem: number of
        /// members to keep; orthomul: standard multiplication of ℝ, ℂ, ℍ or 𝕆;
        /// qhm: the map of the irreducible (n+1)-member system.
        #[arg(long)]
        n: Option<usize>,
        /// osystem and orthomul: the range-maximal family on ℝ^m.
        #[arg(long)]
        m: Option<usize>,
        /// qhm: the Hopf construction on ℝ^k × ℝ^k, k ∈ {1, 2, 4, 8}.
        #[arg(long)]
        hopf: Option<usize>,
        /// qhm: a named map (`z-squared`, `two-scale`).
        #[arg(long)]
        example: Option<String>,
    },
    /// Check a document; exit 0 if valid, 1 if rejected, 2 if unreadable.
    Verify { file: PathBuf },
    /// Rank, spectrum and splitting of a map.
    Classify { file: PathBuf },
    /// Convert between clifford and qhm, clifford and osystem, osystem and orthomul.
    Convert {
        file: PathBuf,
        #[arg(long, value_enum)]
        to: Kind,
    },
    /// Add components to a domain-minimal map until it is range-maximal.
    Extend { file: PathBuf },
    /// The coordinate change and the umbilical summands of a map.
    Split { file: PathBuf },
    /// Evaluate a map (or a multiplication at the concatenated point (x, y)).
    Eval {
        file: PathBuf,
        /// Comma-separated coordinates; a seeded Gaussian point if omitted.
        #[arg(long)]
        point: Option<String>,
    },
}
