//! `g2dt verify`: run seeded verification suites and print a report.
//!
//! Exit status is 0 when every suite passes, 1 when any check fails and 2
//! on a usage error.

use std::io::Write;
use std::process::ExitCode;

use clap::builder::PossibleValuesParser;
use clap::{Parser, Subcommand};
use g2dt::campaign::{self, Campaign, Format, SUITE_NAMES};

#[derive(Parser)]
#[command(name = "g2dt", version, about = "Pointwise dDT/dHYM verification toolkit")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run verification suites and emit a report.
    Verify(VerifyArgs),
}

#[derive(clap::Args)]
struct VerifyArgs {
    /// Base seed; every sample derives its own stream from it.
    #[arg(long, env = "G2DT_SEED", default_value_t = 0)]
    seed: u64,

    /// Samples per suite.
    #[arg(long, default_value_t = 1000)]
    samples: usize,

    /// Suites to run (repeatable); all suites when omitted.
    #[arg(long = "suite", value_name = "NAME", value_parser = PossibleValuesParser::new(SUITE_NAMES))]
    suites: Vec<String>,

    #[arg(long, default_value = "json", value_parser = ["json", "text"])]
    format: String,

    /// Relative tolerance for identities that hold to rounding.
    #[arg(long, default_value_t = 1e-9)]
    tol_rel: f64,

    /// Tolerance for comparisons between independent computations.
    #[arg(long, default_value_t = 1e-8)]
    tol_identity: f64,

    /// Largest Fourier cutoff of the torus suite.
    #[arg(long, default_value_t = 3, value_parser = clap::value_parser!(u64).range(1..=4))]
    torus_cutoff: u64,
}

fn verify(args: VerifyArgs) -> ExitCode {
    let suites = match campaign::parse_suites(&args.suites) {
        Ok(s) => s,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    let format: Format = args.format.parse().expect("restricted by clap");
    let c = Campaign {
        seed: args.seed,
        samples: args.samples,
        tol_rel: args.tol_rel,
        tol_identity: args.tol_identity,
        suites,
        torus_cutoff: args.torus_cutoff as usize,
    };
    let reports = campaign::run(&c);
    let out = campaign::emit(&reports, format);
    let mut stdout = std::io::stdout().lock();
    if stdout.write_all(out.as_bytes()).and_then(|_| stdout.flush()).is_err() {
        return ExitCode::from(1);
    }
    if campaign::all_passed(&reports) {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}

fn main() -> ExitCode {
    match Cli::parse().command {
        Command::Verify(args) => verify(args),
    }
}
