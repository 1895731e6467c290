//! `voa`: construct a lattice vertex algebra over an exactly-represented
//! coefficient ring, verify its defining identities, and realize its
//! symmetry groups on graded truncations.
//!
//! Exit codes: 0 all checks passed, 1 at least one check failed, 2 invalid
//! input, 3 a resource cap was exceeded.

mod commands;
mod input;
mod report;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use voa_core::ring::Ring;
use voa_core::Error;

use commands::Task;

#[derive(Parser)]
#[command(
    name = "voa",
    version,
    about = "Exact lattice vertex algebra verification"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Lattice invariants, graded dimensions, isometry group orders
    Analyze(CommonOpts),
    /// Verify the defining identities on graded truncations
    VerifyAxioms(CommonOpts),
    /// Graded dimensions by state enumeration against the convolution oracle
    GradedDims(CommonOpts),
    /// Conformal structure decision for the chosen ring, with Virasoro checks
    Conformal(CommonOpts),
    /// Symmetry groups realized as exact matrices on a truncation
    AutReport(CommonOpts),
}

#[derive(Args)]
struct CommonOpts {
    /// Preset name (A1, A2, A1A1, D4, E8) or path to a TOML lattice file
    #[arg(long, default_value = "A1")]
    lattice: String,

    /// Coefficient ring: Q, Z, Fp:<prime>, or Zn:<modulus>
    #[arg(long, default_value = "Q")]
    ring: String,

    /// Top weight of the graded truncation driving identity sweeps
    #[arg(long, default_value_t = 3)]
    max_weight: i64,

    /// Bound on the mode indices (r, s, t run over [-max_mode, max_mode])
    #[arg(long, default_value_t = 2)]
    max_mode: i64,

    /// Top weight of the truncation used for matrix realizations
    #[arg(long, default_value_t = 1)]
    truncation: i64,

    /// 0 runs every instance; a positive value draws that many seeded samples
    #[arg(long, default_value_t = 0)]
    samples: usize,

    /// Seed for sampled instance selection
    #[arg(long, default_value_t = 0)]
    seed: u64,

    /// Cap on group closure sizes
    #[arg(long, default_value_t = voa_core::lattice::DEFAULT_GROUP_CAP)]
    group_cap: usize,

    /// Output format: text or structured (deterministic JSON)
    #[arg(long, default_value = "text")]
    format: String,

    /// Write the report to this path instead of stdout
    #[arg(long)]
    output: Option<PathBuf>,
}

fn build_task(opts: &CommonOpts) -> Result<Task, Error> {
    let (lattice_name, lattice) = input::load_lattice(&opts.lattice)?;
    let ring = Ring::parse(&opts.ring)?;
    if opts.max_weight < 0 || opts.truncation < 0 || opts.max_mode < 0 {
        return Err(Error::Unsupported(
            "weight and mode bounds must be nonnegative".into(),
        ));
    }
    Ok(Task {
        lattice_name,
        lattice,
        ring,
        ring_token: opts.ring.clone(),
        max_weight: opts.max_weight,
        max_mode: opts.max_mode,
        truncation: opts.truncation,
        samples: opts.samples,
        seed: opts.seed,
        group_cap: opts.group_cap,
    })
}

fn run() -> Result<bool, Error> {
    let cli = Cli::parse();
    let (opts, report) = match &cli.command {
        Command::Analyze(o) => (o, commands::analyze(&build_task(o)?)?),
        Command::VerifyAxioms(o) => (o, commands::verify_axioms(&build_task(o)?)?),
        Command::GradedDims(o) => (o, commands::graded_dims(&build_task(o)?)?),
        Command::Conformal(o) => (o, commands::conformal(&build_task(o)?)?),
        Command::AutReport(o) => (o, commands::aut_report(&build_task(o)?)?),
    };
    let rendered = match opts.format.as_str() {
        "text" => report.render_text(),
        "structured" => report.render_json(),
        other => {
            return Err(Error::Unsupported(format!(
                "unknown format '{}' (expected text or structured)",
                other
            )))
        }
    };
    match &opts.output {
        Some(path) => std::fs::write(path, rendered)
            .map_err(|e| Error::Unsupported(format!("cannot write {}: {}", path.display(), e)))?,
        None => print!("{}", rendered),
    }
    Ok(report.all_passed())
}

fn main() -> ExitCode {
    match run() {
        Ok(true) => ExitCode::from(0),
        Ok(false) => ExitCode::from(1),
        Err(Error::CapExceeded { cap }) => {
            eprintln!("error: resource cap exceeded (group closure cap {})", cap);
            ExitCode::from(3)
        }
        Err(e) => {
            eprintln!("error: {}", e);
            ExitCode::from(2)
        }
    }
}
