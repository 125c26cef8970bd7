//! Argument parsing and dispatch.
//!
//! Exit status contract: 0 when every check in the requested suite passes,
//! 1 when any check fails or is left incomplete, 2 for usage or operational
//! errors (bad flags, unreadable files, invalid parameter ranges).

use crate::drivers::{self, RunCtx};
use crate::report::{emit, SuiteReport};
use anyhow::{bail, Context, Result};
use clap::error::ErrorKind;
use clap::{Parser, Subcommand};
use std::path::PathBuf;

#[derive(Parser)]
#[command(
    name = "hjlab",
    version,
    about = "Verification workbench for a Hales-Jewett dimension bound"
)]
struct Cli {
    /// Worker threads for parallel suites (default: all cores)
    #[arg(long, global = true, env = "HJLAB_WORKERS")]
    workers: Option<usize>,
    /// Base seed for randomized checks
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Working precision in bits for certified arithmetic
    #[arg(long, global = true, default_value_t = 96,
          value_parser = clap::value_parser!(u32).range(32..=65536))]
    precision: u32,
    /// Also write the JSON report to this path
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Ordered-window inequality on two-valued hypercubes
    Lemma1 {
        #[arg(long)]
        n: u32,
        #[arg(long)]
        kappa: u32,
        /// Enumerate every coloring (n at most 4)
        #[arg(long, conflicts_with = "samples")]
        exhaustive: bool,
        /// Random colorings to draw
        #[arg(long, default_value_t = 200)]
        samples: u64,
    },
    /// Subcube-restriction inequality on four-valued grids
    Lemma2 {
        #[arg(long)]
        n: u32,
        #[arg(long)]
        kappa: u32,
        #[arg(long, default_value_t = 20)]
        samples: u64,
    },
    /// Fifteen-line parity gadget checks
    Gadget {
        /// Verify that every grid point meets an even number of gadget lines
        #[arg(long)]
        check_incidence: bool,
        /// Sweep all symmetry-reduced support colorings
        #[arg(long)]
        exhaustive: bool,
        /// JSON progress file for resumable sweeps
        #[arg(long)]
        checkpoint: Option<PathBuf>,
        /// Stop after this many chunks (staged runs)
        #[arg(long)]
        max_chunks: Option<u32>,
    },
    /// Odd-line density bound via embedding multiplicities
    Lemma4 {
        #[arg(long)]
        n: u32,
        #[arg(long)]
        k: u32,
        #[arg(long, num_args = 1..)]
        seeds: Vec<u64>,
    },
    /// Multiplicity formula recount and brute-force cross-check
    Multiplicity {
        #[arg(long)]
        n: u32,
        #[arg(long)]
        k: u32,
        /// Also run the embedding-enumeration oracle per line
        #[arg(long)]
        oracle: bool,
    },
    /// Certified dimension bound
    #[command(subcommand)]
    Bound(BoundCommand),
    /// Lower-bound constructions
    #[command(subcommand)]
    Lower(LowerCommand),
    /// The full acceptance battery
    All,
}

#[derive(Subcommand)]
enum BoundCommand {
    /// Decide the sign of the final margin at one (n, kappa)
    Certify {
        #[arg(long)]
        n: u64,
        #[arg(long)]
        kappa: u32,
    },
    /// Scan window lengths and report minimal certified dimensions
    Search {
        #[arg(long)]
        kappa_min: u32,
        #[arg(long)]
        kappa_max: u32,
    },
}

#[derive(Subcommand)]
enum LowerCommand {
    /// Search for a progression-free two-coloring of an interval
    #[command(name = "ap-free")]
    ApFree {
        #[arg(long = "N")]
        length: u32,
        #[arg(long)]
        t: u32,
        /// Save the witness as a one-dimensional coloring file
        #[arg(long)]
        save: Option<PathBuf>,
    },
    /// Lift an interval coloring to a grid via coordinate sums
    Lift {
        #[arg(long)]
        t: u8,
        #[arg(long)]
        n: u32,
        /// Base interval coloring (one-dimensional coloring file)
        #[arg(long)]
        base: PathBuf,
        /// Save the lifted coloring
        #[arg(long)]
        save: Option<PathBuf>,
    },
    /// Exhaustively scan a coloring file for monochromatic lines
    Verify {
        #[arg(long)]
        coloring: PathBuf,
        /// JSON progress file for resumable scans
        #[arg(long)]
        checkpoint: Option<PathBuf>,
        /// Stop after this many chunks (staged runs)
        #[arg(long)]
        max_chunks: Option<u64>,
    },
}

fn command_name(command: &Command) -> String {
    match command {
        Command::Lemma1 { .. } => "lemma1".into(),
        Command::Lemma2 { .. } => "lemma2".into(),
        Command::Gadget { .. } => "gadget".into(),
        Command::Lemma4 { .. } => "lemma4".into(),
        Command::Multiplicity { .. } => "multiplicity".into(),
        Command::Bound(BoundCommand::Certify { .. }) => "bound certify".into(),
        Command::Bound(BoundCommand::Search { .. }) => "bound search".into(),
        Command::Lower(LowerCommand::ApFree { .. }) => "lower ap-free".into(),
        Command::Lower(LowerCommand::Lift { .. }) => "lower lift".into(),
        Command::Lower(LowerCommand::Verify { .. }) => "lower verify".into(),
        Command::All => "all".into(),
    }
}

fn dispatch(ctx: &RunCtx, command: &Command) -> Result<SuiteReport> {
    match command {
        Command::Lemma1 {
            n,
            kappa,
            exhaustive,
            samples,
        } => drivers::lemma1(ctx, *n, *kappa, *exhaustive, *samples),
        Command::Lemma2 { n, kappa, samples } => drivers::lemma2(ctx, *n, *kappa, *samples),
        Command::Gadget {
            check_incidence,
            exhaustive,
            checkpoint,
            max_chunks,
        } => drivers::gadget(
            ctx,
            *check_incidence,
            *exhaustive,
            checkpoint.as_deref(),
            *max_chunks,
        ),
        Command::Lemma4 { n, k, seeds } => drivers::lemma4(ctx, *n, *k, seeds),
        Command::Multiplicity { n, k, oracle } => drivers::multiplicity(ctx, *n, *k, *oracle),
        Command::Bound(BoundCommand::Certify { n, kappa }) => {
            drivers::bound_certify(ctx, *n, *kappa)
        }
        Command::Bound(BoundCommand::Search {
            kappa_min,
            kappa_max,
        }) => drivers::bound_search(ctx, *kappa_min, *kappa_max),
        Command::Lower(LowerCommand::ApFree { length, t, save }) => {
            drivers::lower_ap_free(ctx, *length, *t, save.as_deref())
        }
        Command::Lower(LowerCommand::Lift { t, n, base, save }) => {
            drivers::lower_lift(ctx, *t, *n, base, save.as_deref())
        }
        Command::Lower(LowerCommand::Verify {
            coloring,
            checkpoint,
            max_chunks,
        }) => drivers::lower_verify(ctx, coloring, checkpoint.as_deref(), *max_chunks),
        Command::All => drivers::all(ctx),
    }
}

fn execute(cli: Cli) -> Result<bool> {
    let workers = match cli.workers {
        Some(w) => w,
        None => std::thread::available_parallelism()
            .map(|p| p.get())
            .unwrap_or(1),
    };
    if workers < 1 {
        bail!("--workers must be at least 1");
    }
    let ctx = RunCtx {
        command: command_name(&cli.command),
        workers,
        seed: cli.seed,
        precision: cli.precision,
    };
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .context("building worker pool")?;
    let report = pool.install(|| dispatch(&ctx, &cli.command))?;
    emit(&report, cli.out.as_deref())?;
    Ok(report.passed())
}

pub fn run() -> i32 {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 2,
            };
            let _ = e.print();
            return code;
        }
    };
    match execute(cli) {
        Ok(passed) => {
            if passed {
                0
            } else {
                1
            }
        }
        Err(err) => {
            eprintln!("error: {err:#}");
            2
        }
    }
}
