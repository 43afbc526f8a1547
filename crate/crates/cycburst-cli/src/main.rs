//! `cycburst` — command-line driver for cyclic burst-substitution
//! channels: burst distances, error-ball measurements, code construction
//! and verification, and reconstruction experiments.
//!
//! Every run writes an artifact (CSV table or JSON document) carrying the
//! canonical config, its hash, and the RNG algorithm identifier, so any
//! result can be reproduced from the artifact alone. Exit codes: 0 on
//! success, 2 on validation failures (including any false inequality flag
//! in the artifact), 3 on infeasible parameters.

mod commands;
mod table;

use std::process::ExitCode;
use std::time::Instant;

use clap::Parser;

use commands::{Command, Ctx};
use table::{write_artifact, Format, Meta};

#[derive(Parser)]
#[command(
    name = "cycburst",
    version,
    about = "Cyclic multiple-burst substitution channels: metric, error balls, codes, reconstruction"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Base seed for every randomized step.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Worker threads for trials and sweep cells (0 = one per CPU core).
    /// Results are identical for any thread count.
    #[arg(long, global = true, default_value_t = 0)]
    threads: usize,
    /// Destination of the command's primary artifact. Tables default to
    /// stdout; construct, shift, and diametric write their code/word-set
    /// files here and always print the summary table to stdout.
    #[arg(long, global = true)]
    out: Option<std::path::PathBuf>,
    /// Table format (single-run JSON documents ignore this).
    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    format: Format,
}

fn exit_code_for(err: &anyhow::Error) -> u8 {
    match err.downcast_ref::<cycburst::Error>() {
        Some(
            cycburst::Error::Infeasible(_)
            | cycburst::Error::SamplingExhausted(_)
            | cycburst::Error::StarOverflow { .. },
        ) => 3,
        _ => 2,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if cli.threads > 0 {
        // per-trial seeds are pre-generated sequentially, so the pool size
        // affects speed only, never output bytes
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(cli.threads)
            .build_global();
    }
    let ctx = Ctx {
        seed: cli.seed,
        out: cli.out,
        format: cli.format,
    };
    let started = Instant::now();
    match commands::dispatch(cli.command, &ctx) {
        Ok(output) => {
            let meta = Meta::new(&output.config, started.elapsed().as_millis());
            let dest = if output.artifact_to_stdout {
                None
            } else {
                ctx.out.as_deref()
            };
            if let Err(e) = write_artifact(&output.artifact, &meta, ctx.format, dest) {
                eprintln!("error: {e:#}");
                return ExitCode::from(2);
            }
            if output.flags_ok {
                ExitCode::SUCCESS
            } else {
                eprintln!("one or more asserted flags are false; see the artifact");
                ExitCode::from(2)
            }
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit_code_for(&e))
        }
    }
}
