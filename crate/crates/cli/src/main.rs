//! `latcert`: build the norm-4 shell of a doubled Construction B lattice and
//! certify its code, bound and energy properties with exact arithmetic.

mod commands;
mod render;
mod selftest;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::render::Outcome;

#[derive(Debug, Parser)]
#[command(name = "latcert", version, about)]
struct Cli {
    /// Worker threads; defaults to the available parallelism.
    #[arg(long, global = true, env = "LATCERT_THREADS")]
    threads: Option<usize>,

    /// Report format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Text,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Build the norm-4 shell from a binary code and write it to a file.
    Build(BuildArgs),
    /// Verify a shell file as a spherical code: inner products, distance
    /// invariance, moments and design strength.
    Verify(VerifyArgs),
    /// Certify an upper bound on T-avoiding s-codes.
    CertifyMax(CertifyMaxArgs),
    /// Certify a lower bound on T-avoiding spherical designs.
    CertifyDesign(CertifyDesignArgs),
    /// Certify an energy lower bound and compare with a shell's energy.
    Energy(EnergyArgs),
    /// Compute Venkov e22 values on a shell.
    Venkov(VenkovArgs),
    /// Run the built-in regression suite.
    Selftest(SelftestArgs),
}

#[derive(Debug, Args)]
pub struct BuildArgs {
    /// rm2_5, xqr32, or a generator matrix file (rows of 0/1).
    #[arg(long)]
    pub code: String,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[arg(long)]
    pub shell: PathBuf,
    /// Check distance invariance at every point instead of a sample.
    #[arg(long, conflicts_with = "sample")]
    pub full: bool,
    /// Number of sampled points for the invariance check.
    #[arg(long)]
    pub sample: Option<usize>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Highest moment index examined.
    #[arg(long, default_value_t = latcert::sphercode::DEFAULT_STRENGTH_CAP)]
    pub cap: usize,
    /// Print progress of the pair passes to stderr.
    #[arg(long)]
    pub progress: bool,
}

#[derive(Debug, Args)]
pub struct PolySource {
    /// `builtin:NAME` or a JSON polynomial file in factored form.
    #[arg(long)]
    pub poly: String,
    #[arg(long, default_value_t = 32)]
    pub dim: u32,
    /// Avoided inner products, e.g. "(0,1/4)" or "(-1/4,0) U (1/4,1/2)".
    #[arg(long = "T", default_value = "empty", allow_hyphen_values = true)]
    pub avoided: String,
}

#[derive(Debug, Args)]
pub struct CertifyMaxArgs {
    #[command(flatten)]
    pub source: PolySource,
    /// Largest admissible inner product.
    #[arg(long, allow_hyphen_values = true)]
    pub s: String,
    /// Assumed design strength of the code.
    #[arg(long, default_value_t = 0)]
    pub strength: usize,
}

#[derive(Debug, Args)]
pub struct CertifyDesignArgs {
    #[command(flatten)]
    pub source: PolySource,
    #[arg(long)]
    pub tau: usize,
}

#[derive(Debug, Args)]
pub struct EnergyArgs {
    /// Shell whose energy is compared with the bound; bound only if absent.
    #[arg(long)]
    pub shell: Option<PathBuf>,
    /// invlin, riesz(s), expt, gauss(a) or poly(c0,c1,...).
    #[arg(long)]
    pub potential: String,
    /// Decimal digits for transcendental potentials.
    #[arg(long, default_value_t = latcert::energycert::DEFAULT_PRECISION)]
    pub precision: u32,
}

#[derive(Debug, Args)]
pub struct VenkovArgs {
    #[arg(long)]
    pub shell: PathBuf,
    /// Evaluate the fixed witness pair (the default without --sample).
    #[arg(long)]
    pub witness: bool,
    /// Number of seeded random orthogonal pairs.
    #[arg(long)]
    pub sample: Option<usize>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Debug, Args)]
pub struct SelftestArgs {
    /// Restrict to one built-in code (rm2_5 or xqr32).
    #[arg(long)]
    pub code: Option<String>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
        {
            eprintln!("error: cannot configure {n} threads: {e}");
            return ExitCode::from(2);
        }
    }
    let result = match &cli.command {
        Command::Build(a) => commands::build(a),
        Command::Verify(a) => commands::verify(a),
        Command::CertifyMax(a) => commands::certify_max(a),
        Command::CertifyDesign(a) => commands::certify_design(a),
        Command::Energy(a) => commands::energy(a),
        Command::Venkov(a) => commands::venkov(a),
        Command::Selftest(a) => selftest::run(a),
    };
    match result {
        Ok(Outcome { record, ok }) => {
            // a closed pipe is not a failure of the checks
            let _ = writeln!(std::io::stdout(), "{}", render::render(&record, cli.format));
            if ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
