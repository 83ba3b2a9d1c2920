use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(name = "nsmacro", version, about = "No-signaling boxes under majority-vote coarse-graining")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    /// Box file (`{"P": [[..], ..]}`) or builtin: pr, pr:F, uniform, d1_0..d4_1,
    /// L_abcd, class:ID:w1,w2,... (weights may be written `p=0.5`).
    #[arg(long = "box", global = true, value_name = "SOURCE")]
    pub source: Option<String>,

    /// Copy count `M`, or a range `start:end:step`.
    #[arg(long = "M", global = true, value_name = "M")]
    pub m: Option<String>,

    /// majority, threshold:t, unanimous, unanimous:zero|one|coin.
    #[arg(long, global = true, default_value = "majority")]
    pub rule: String,

    #[arg(long, global = true, default_value_t = 100_000)]
    pub trials: u64,

    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,

    /// Write the result here instead of standard output.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,

    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check range, normalization and no-signaling of a box.
    Validate,
    /// CHSH value on all eight facets.
    Chsh,
    /// No-signaling and local polytope membership with certificates.
    Membership,
    /// Macroscopic box for a single M.
    Macro,
    /// Macroscopic CHSH over a range of M.
    Trace,
    /// Sampled macroscopic box.
    Mc,
    /// Information-causality necessary condition.
    Ic,
    /// Data behind figures 1 to 6.
    Figure {
        #[arg(long, value_parser = clap::value_parser!(u8).range(1..=6))]
        id: u8,
    },
    /// Full report: NS, locality, Tsirelson, IC and the large-M label.
    Classify,
}
