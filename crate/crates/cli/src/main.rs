//! toric-calc: exact-arithmetic invariants of toric spaces attached to
//! a finite simplicial complex. Subcommands read a complex document and
//! print a deterministic result document; everything is computed over
//! the rationals, exactly.
//!
//! Exit codes: 0 success, 1 failed verification, 2 invalid input,
//! 3 resource cap exceeded.

mod commands;
mod document;
mod report;

use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use toric_core::cobar::{CobarError, CobarOptions};
use toric_core::par::run_with_threads;

use commands::CommandOutput;
use document::ComplexDocument;
use report::Report;

#[derive(Parser)]
#[command(
    name = "toric-calc",
    version,
    about = "Exact invariants of toric spaces built from a simplicial complex",
    after_help = "Bigraded Betti output uses the Tor^{-i,2j} convention: `exterior` is i \
                  (the count of exterior generators) and `internal` is 2j = 2(i + |τ|)."
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Args)]
struct Common {
    /// Input complex document (JSON with fields m, facets, optional name)
    input: PathBuf,
    /// Output format
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Worker threads for block computations (default: all cores)
    #[arg(long, env = "TORIC_CALC_THREADS")]
    threads: Option<usize>,
    /// Cap on the number of cobar words per degree
    #[arg(long, env = "TORIC_CALC_WORD_CAP", default_value_t = 200_000)]
    word_cap: usize,
}

#[derive(Subcommand)]
enum Command {
    /// Face counts, f/h-vectors, flag status, missing faces
    Info {
        #[command(flatten)]
        common: Common,
    },
    /// Betti numbers of the moment-angle complex Z_K
    BettiZk {
        #[command(flatten)]
        common: Common,
        /// Also print the bigraded Tor table
        #[arg(long)]
        bigraded: bool,
    },
    /// Loop-space homology, graph-product comparison, divergence report
    Loop {
        #[command(flatten)]
        common: Common,
        /// Largest homological degree to compute
        #[arg(long, default_value_t = 5)]
        max_degree: usize,
    },
    /// Quasitoric cohomology: the face ring modulo characteristic data L
    Quasitoric {
        #[command(flatten)]
        common: Common,
        /// Path to the n x m integer matrix of linear forms
        #[arg(long)]
        lambda: PathBuf,
        /// Stop scanning at this exponent degree
        #[arg(long)]
        degree_cap: Option<u32>,
    },
    /// Run the cross-check suite (d^2=0, oracles, series identities)
    Verify {
        #[command(flatten)]
        common: Common,
        /// Degree window for the cobar checks
        #[arg(long, default_value_t = 6)]
        max_degree: usize,
        /// Corrupt a differential first (negative control; always fails)
        #[arg(long, hide = true)]
        sabotage: bool,
    },
}

impl Command {
    fn common(&self) -> &Common {
        match self {
            Command::Info { common } => common,
            Command::BettiZk { common, .. } => common,
            Command::Loop { common, .. } => common,
            Command::Quasitoric { common, .. } => common,
            Command::Verify { common, .. } => common,
        }
    }

    fn name(&self) -> &'static str {
        match self {
            Command::Info { .. } => "info",
            Command::BettiZk { .. } => "betti-zk",
            Command::Loop { .. } => "loop",
            Command::Quasitoric { .. } => "quasitoric",
            Command::Verify { .. } => "verify",
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let format = cli.command.common().format;
    match run(&cli.command) {
        Ok((report, exit)) => {
            print!("{}", report.render(format));
            ExitCode::from(exit)
        }
        Err(err) => {
            eprintln!("error: {err:#}");
            let code = if err.downcast_ref::<CobarError>().is_some_and(|e| {
                matches!(
                    e,
                    CobarError::WordCapExceeded { .. } | CobarError::CountOverflow(_)
                )
            }) {
                3
            } else {
                2
            };
            ExitCode::from(code)
        }
    }
}

fn run(command: &Command) -> anyhow::Result<(Report, u8)> {
    let common = command.common();
    let doc = ComplexDocument::load(&common.input)?;
    let k = doc.build()?;
    let opts = CobarOptions {
        word_cap: common.word_cap,
    };
    let input = Report::input_echo(&doc)?;
    let started = Instant::now();
    let output: CommandOutput = run_with_threads(common.threads, || -> anyhow::Result<_> {
        match command {
            Command::Info { .. } => Ok(commands::cmd_info(&k)),
            Command::BettiZk { bigraded, .. } => Ok(commands::cmd_betti_zk(&k, *bigraded)),
            Command::Loop { max_degree, .. } => Ok(commands::cmd_loop(&k, *max_degree, &opts)?),
            Command::Quasitoric {
                lambda, degree_cap, ..
            } => {
                let matrix = document::load_lambda(lambda)?;
                commands::cmd_quasitoric(&k, &matrix, *degree_cap)
            }
            Command::Verify {
                max_degree,
                sabotage,
                ..
            } => Ok(commands::cmd_verify(&k, *max_degree, &opts, *sabotage)?),
        }
    })?;
    let report = Report {
        command: command.name().to_string(),
        input,
        result: output.result,
        timing_ms: started.elapsed().as_millis(),
        text_lines: output.text_lines,
    };
    Ok((report, output.exit))
}
