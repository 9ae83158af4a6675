//! Command-line front end for `ghz-teleport-core`.
//!
//! Every subcommand returns a [`Failure`] on error; `main` turns it into
//! the exit code (2 arguments, 3 failed check, 4 i/o).

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use num_complex::Complex64;

pub mod args;
pub mod cmd;
pub mod fail;
pub mod report;

pub use fail::Failure;

use args::{parse_complex, VariantArg};

/// Fidelity below `1 - FIDELITY_SLACK` counts as a failed run.
pub const FIDELITY_SLACK: f64 = 1e-9;

#[derive(Debug, Parser)]
#[command(
    name = "ghz-teleport",
    version,
    about = "Teleport EPR pairs and N-qubit GHZ-class states through GHZ entanglement"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Teleport alpha|01> + beta|10> to Bob and Claire.
    TeleportEpr(TeleportEprArgs),
    /// Teleport alpha|0..0> + beta|1..1> to N receivers.
    TeleportNplet(TeleportNpletArgs),
    /// Classify a measurement basis and check whether it can teleport.
    CheckBasis(CheckBasisArgs),
    /// Many seeded runs with random inputs, written as CSV.
    Sweep(SweepArgs),
    /// Run the gate-level network with mid-circuit measurements.
    Circuit(CircuitArgs),
}

#[derive(Debug, Args)]
pub struct CoeffArgs {
    /// Amplitude alpha as `re,im`.
    #[arg(long, default_value = "0.6,0", value_parser = parse_complex, allow_hyphen_values = true)]
    pub alpha: Complex64,
    /// Amplitude beta as `re,im`.
    #[arg(long, default_value = "0.8,0", value_parser = parse_complex, allow_hyphen_values = true)]
    pub beta: Complex64,
}

#[derive(Debug, Args)]
pub struct TeleportEprArgs {
    #[command(flatten)]
    pub coeffs: CoeffArgs,
    /// Phase of the `|pi+->` states in Alice's basis.
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    pub phi: f64,
    /// Seed for Alice's measurement (default from GHZ_TELEPORT_SEED, else 0).
    #[arg(long)]
    pub seed: Option<u64>,
    /// Force outcome k (1-based) instead of sampling.
    #[arg(long)]
    pub outcome: Option<usize>,
    /// Correction rule; `alt` differs from `main` only for outcome 2.
    #[arg(long, value_enum, default_value_t = VariantArg::Main)]
    pub variant: VariantArg,
    /// Write a JSON report here.
    #[arg(long)]
    pub json: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct TeleportNpletArgs {
    /// Number of qubits in the teleported state (and of receivers).
    #[arg(long, value_parser = clap::value_parser!(u8).range(2..=10))]
    pub n: u8,
    #[command(flatten)]
    pub coeffs: CoeffArgs,
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    pub phi: f64,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub outcome: Option<usize>,
    #[arg(long)]
    pub json: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Family {
    #[value(name = "pi123")]
    Pi123,
    #[value(name = "pi1-23-s2")]
    Pi1_23S2,
    #[value(name = "pi1-23-s4")]
    Pi1_23S4,
    #[value(name = "pi13-2-s4")]
    Pi13_2S4,
    #[value(name = "ghz-triplet")]
    GhzTriplet,
    #[value(name = "general")]
    General,
}

#[derive(Debug, Args)]
pub struct CheckBasisArgs {
    #[arg(long, value_enum)]
    pub family: Family,
    /// N for the `general` family.
    #[arg(long, default_value_t = 2, value_parser = clap::value_parser!(u8).range(2..=10))]
    pub n: u8,
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    pub phi: f64,
    #[arg(long)]
    pub json: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    /// Runs per phi step.
    #[arg(long)]
    pub trials: u64,
    #[arg(long, default_value_t = 2, value_parser = clap::value_parser!(u8).range(2..=10))]
    pub n: u8,
    /// Number of phi values, evenly spaced over [0, 2 pi).
    #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u32).range(1..))]
    pub phi_steps: u32,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Write per-run rows here.
    #[arg(long)]
    pub csv: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct CircuitArgs {
    /// Force the measured bits, read as b1 b2 b3 with b1 most significant.
    #[arg(long, value_parser = clap::value_parser!(u8).range(0..=7))]
    pub branch: Option<u8>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[command(flatten)]
    pub coeffs: CoeffArgs,
    #[arg(long, value_enum, default_value_t = VariantArg::Main)]
    pub variant: VariantArg,
    /// Write the network in the line-per-op text format.
    #[arg(long)]
    pub emit_circuit: Option<PathBuf>,
    /// Emit the deferred-measurement form instead.
    #[arg(long)]
    pub deferred: bool,
}

pub fn run(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::TeleportEpr(a) => cmd::teleport::epr(&a),
        Command::TeleportNplet(a) => cmd::teleport::nplet(&a),
        Command::CheckBasis(a) => cmd::basis::check(&a),
        Command::Sweep(a) => cmd::sweep::sweep(&a),
        Command::Circuit(a) => cmd::circuit::circuit(&a),
    }
}
